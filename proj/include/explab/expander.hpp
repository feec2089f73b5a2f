#pragma once

#include <cstddef>

#include "explab/geometry.hpp"

namespace explab {

/// Shooting data for the planar self-expander ODE
///   x' = (cos th, sin th),  th' = mu * (-x1 sin th + x2 cos th),
/// started at (0, b) with horizontal tangent and integrated to arclength
/// +-s_max. Requires s_max >= 10 * max(1, 1/sqrt(mu)).
struct ExpanderShootingProblem {
  double mu = 1.0;
  double b = 1.0;
  double ds = 1e-3;
  double s_max = 20.0;
};

struct AsymptoticAngle {
  double angle = 0.0;
  double uncertainty = 0.0;
};

struct ShootResult {
  double b = 0.0;
  double mismatch = 0.0;
  int iterations = 0;
};

void validate_problem(const ExpanderShootingProblem& problem);

/// Classical 4th-order integration of the shooting problem, mirrored across
/// the y-axis. The result is an open symmetric curve with p0 = 0 and the
/// problem's mu. Rejects steps where |th'| * ds > 0.5.
PolylineCurve integrate_expander(const ExpanderShootingProblem& problem);

/// Length-weighted mean tangent angle over the trailing 10% of arclength;
/// uncertainty is the max-min spread over the window. Requires an open curve
/// whose window holds at least 10 vertices.
AsymptoticAngle asymptotic_angle(const PolylineCurve& curve);

/// Bisection on the initial height b until the asymptotic angle matches
/// target within 1e-6 (at most 80 iterations). The bracket must straddle the
/// target; no extrapolation is attempted.
ShootResult shoot_for_cone_angle(double mu, double target, double b_lo,
                                 double b_hi, double ds, double s_max);

// Analytic fixture curves.
PolylineCurve make_line_through_origin(double angle, double extent,
                                       std::size_t n);
PolylineCurve make_offset_line(double b, double extent, std::size_t n);
PolylineCurve make_circle(double radius, Vec2 center, std::size_t n);
/// Two rays from the origin at the given angles, joined by a corner vertex
/// at the origin. Vertex count is rounded up to an odd number.
PolylineCurve make_two_ray_cone(double angle1, double angle2, double extent,
                                std::size_t n);

}  // namespace explab
