#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "explab/geometry.hpp"

namespace explab {

enum class BoundaryPolicy { pinned_exact, pinned_fixed };

/// Explicit mean curvature flow state. pinned_exact keeps the endpoints of an
/// open curve on the self-similar dilation trajectory of the initial data
/// (valid when the initial curve is a self-expander slice at t_start > 0);
/// pinned_fixed freezes them.
struct FlowState {
  PolylineCurve curve;
  double t = 0.0;
  double dt = 0.0;
  double cfl = 0.2;
  BoundaryPolicy boundary = BoundaryPolicy::pinned_exact;
  double t_start = 0.0;
  Vec2 first_start{};
  Vec2 last_start{};
};

FlowState make_flow_state(const PolylineCurve& curve, double t0, double dt,
                          double cfl = 0.2,
                          BoundaryPolicy boundary = BoundaryPolicy::pinned_exact);

/// One explicit step: interior vertices move by dt * H. Enforces
/// dt <= cfl * min_edge^2 (cfl <= 0.25) and aborts on edge collapse.
FlowState mcf_step(const FlowState& state);

/// Steps until t_end (the last step is shortened to land exactly),
/// invoking on_step after every step when provided.
FlowState run_flow(FlowState state, double t_end,
                   const std::function<void(const FlowState&)>& on_step = {});

/// p0 + sqrt(2 mu t) (M - p0): the time-t slice of the self-similar evolution
/// of a mu-expander. The returned curve carries parameter 1/(2t).
PolylineCurve exact_selfsimilar(const PolylineCurve& curve, double mu, Vec2 p0,
                                double t);

/// Max interior normal speed |<H - x, N>| of the normalized flow; zero
/// exactly at mu = 1 expanders. Requires mu == 1 and p0 == 0.
double normalized_flow_residual(const PolylineCurve& curve);

/// (x / sqrt(2t+1), log(2t+1)/2) for t > -1/2.
std::pair<Vec2, double> rescale_map(Vec2 x, double t);

/// Max over points of the distance to the closest segment of the polyline.
double one_sided_hausdorff(const std::vector<Vec2>& points,
                           const PolylineCurve& reference);

}  // namespace explab
