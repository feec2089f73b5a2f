#include "explab/flow.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace explab {

namespace {

double min_edge_length(const PolylineCurve& curve) {
  double m = std::numeric_limits<double>::infinity();
  for (double l : edge_lengths(curve)) m = std::min(m, l);
  return m;
}

}  // namespace

FlowState make_flow_state(const PolylineCurve& curve, double t0, double dt,
                          double cfl, BoundaryPolicy boundary) {
  validate_curve(curve);
  if (!(cfl > 0.0 && cfl <= 0.25)) {
    throw std::invalid_argument("cfl must lie in (0, 0.25]");
  }
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (boundary == BoundaryPolicy::pinned_exact && !curve.closed &&
      !(t0 > 0.0)) {
    throw std::invalid_argument(
        "pinned_exact needs a positive start time (self-similar reference)");
  }
  FlowState s;
  s.curve = curve;
  s.t = t0;
  s.dt = dt;
  s.cfl = cfl;
  s.boundary = boundary;
  s.t_start = t0;
  if (!curve.closed) {
    s.first_start = curve.vertices.front();
    s.last_start = curve.vertices.back();
  }
  return s;
}

FlowState mcf_step(const FlowState& state) {
  const PolylineCurve& c = state.curve;
  const double min_l = min_edge_length(c);
  if (!(state.dt <= state.cfl * min_l * min_l)) {
    char msg[128];
    std::snprintf(msg, sizeof msg, "CFL violation: dt = %.6g > cfl*h^2 = %.6g",
                  state.dt, state.cfl * min_l * min_l);
    throw std::runtime_error(msg);
  }
  const VertexGeometry geom = compute_vertex_geometry(c);

  FlowState next = state;
  next.t = state.t + state.dt;
  for (std::size_t i = 0; i < c.vertices.size(); ++i) {
    if (geom.interior[i]) {
      next.curve.vertices[i] = c.vertices[i] + state.dt * geom.mean_curvature[i];
    }
  }
  if (!c.closed) {
    switch (state.boundary) {
      case BoundaryPolicy::pinned_fixed:
        break;
      case BoundaryPolicy::pinned_exact: {
        const double scale = std::sqrt(next.t / state.t_start);
        next.curve.vertices.front() =
            c.p0 + scale * (state.first_start - c.p0);
        next.curve.vertices.back() = c.p0 + scale * (state.last_start - c.p0);
        break;
      }
    }
  }

  const double collapse = 1e-10 * curve_diameter(next.curve);
  const std::vector<double> el = edge_lengths(next.curve);
  for (std::size_t i = 0; i < el.size(); ++i) {
    if (el[i] < collapse) {
      throw std::runtime_error("edge " + std::to_string(i) +
                               " collapsed at t = " + std::to_string(next.t) +
                               " (length " + std::to_string(el[i]) + ")");
    }
  }
  return next;
}

FlowState run_flow(FlowState state, double t_end,
                   const std::function<void(const FlowState&)>& on_step) {
  if (!(t_end > state.t)) {
    throw std::invalid_argument("t_end must exceed the current time");
  }
  while (state.t < t_end) {
    if (state.t + state.dt > t_end) {
      state.dt = t_end - state.t;
      if (state.dt <= 0.0) break;
    }
    state = mcf_step(state);
    if (on_step) on_step(state);
  }
  return state;
}

PolylineCurve exact_selfsimilar(const PolylineCurve& curve, double mu, Vec2 p0,
                                double t) {
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
  if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
  const double scale = std::sqrt(2.0 * mu * t);
  PolylineCurve out = curve;
  out.p0 = p0;
  out.mu = 1.0 / (2.0 * t);
  for (Vec2& v : out.vertices) v = p0 + scale * (v - p0);
  return out;
}

double normalized_flow_residual(const PolylineCurve& curve) {
  if (std::abs(curve.mu - 1.0) > 1e-12 || norm(curve.p0) > 1e-12) {
    throw std::invalid_argument(
        "normalized-flow residual requires mu = 1 and p0 = 0");
  }
  const VertexGeometry geom = compute_vertex_geometry(curve);
  double worst = 0.0;
  for (std::size_t i = 0; i < curve.vertices.size(); ++i) {
    if (!geom.interior[i]) continue;
    const Vec2 speed = geom.mean_curvature[i] - (curve.vertices[i] - curve.p0);
    worst = std::max(worst, std::abs(dot(speed, perp(geom.tangent[i]))));
  }
  return worst;
}

std::pair<Vec2, double> rescale_map(Vec2 x, double t) {
  if (!(t > -0.5)) throw std::invalid_argument("t must exceed -1/2");
  const double denom = std::sqrt(2.0 * t + 1.0);
  return {x / denom, 0.5 * std::log1p(2.0 * t)};
}

double one_sided_hausdorff(const std::vector<Vec2>& points,
                           const PolylineCurve& reference) {
  if (reference.vertices.size() < 2 || points.empty()) {
    throw std::invalid_argument("need a nonempty point set and polyline");
  }
  const std::size_t m = reference.edge_count();
  double worst = 0.0;
  for (const Vec2& p : points) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      const Vec2 a = reference.vertices[i];
      const Vec2 b =
          reference.vertices[(i + 1) % reference.vertices.size()];
      const Vec2 d = b - a;
      const double t = std::clamp(dot(p - a, d) / norm2(d), 0.0, 1.0);
      best = std::min(best, dist(p, a + t * d));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace explab
