#include "explab/expander.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace explab {

namespace {

struct ShootState {
  double x, y, th;
};

double turn_rate(double mu, const ShootState& s) {
  return mu * (-s.x * std::sin(s.th) + s.y * std::cos(s.th));
}

ShootState derivative(double mu, const ShootState& s) {
  return {std::cos(s.th), std::sin(s.th), turn_rate(mu, s)};
}

ShootState axpy(const ShootState& s, double h, const ShootState& d) {
  return {s.x + h * d.x, s.y + h * d.y, s.th + h * d.th};
}

ShootState rk4_step(double mu, const ShootState& s, double h) {
  const ShootState k1 = derivative(mu, s);
  const ShootState k2 = derivative(mu, axpy(s, 0.5 * h, k1));
  const ShootState k3 = derivative(mu, axpy(s, 0.5 * h, k2));
  const ShootState k4 = derivative(mu, axpy(s, h, k3));
  return {s.x + h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
          s.y + h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y),
          s.th + h / 6.0 * (k1.th + 2.0 * k2.th + 2.0 * k3.th + k4.th)};
}

}  // namespace

void validate_problem(const ExpanderShootingProblem& p) {
  if (!(p.mu > 0.0)) throw std::invalid_argument("mu must be positive");
  if (!(p.b > 0.0)) throw std::invalid_argument("b must be positive");
  if (!(p.ds > 0.0)) throw std::invalid_argument("ds must be positive");
  const double min_s = 10.0 * std::max(1.0, 1.0 / std::sqrt(p.mu));
  if (!(p.s_max >= min_s)) {
    throw std::invalid_argument("s_max must be at least " +
                                std::to_string(min_s));
  }
}

PolylineCurve integrate_expander(const ExpanderShootingProblem& p) {
  validate_problem(p);
  const std::size_t steps =
      static_cast<std::size_t>(std::llround(p.s_max / p.ds));
  std::vector<Vec2> forward;
  forward.reserve(steps);
  ShootState s{0.0, p.b, 0.0};
  for (std::size_t k = 0; k < steps; ++k) {
    const double kappa = std::abs(turn_rate(p.mu, s));
    if (kappa * p.ds > 0.5) {
      throw std::runtime_error(
          "step rejected at arclength " + std::to_string(k * p.ds) +
          ": |th'|*ds = " + std::to_string(kappa * p.ds) + " > 0.5");
    }
    s = rk4_step(p.mu, s, p.ds);
    forward.push_back({s.x, s.y});
  }

  PolylineCurve curve;
  curve.closed = false;
  curve.p0 = {0.0, 0.0};
  curve.mu = p.mu;
  curve.vertices.reserve(2 * steps + 1);
  for (std::size_t k = steps; k-- > 0;) {
    curve.vertices.push_back({-forward[k].x, forward[k].y});
  }
  curve.vertices.push_back({0.0, p.b});
  for (std::size_t k = 0; k < steps; ++k) {
    curve.vertices.push_back(forward[k]);
  }
  return curve;
}

AsymptoticAngle asymptotic_angle(const PolylineCurve& curve) {
  validate_curve(curve);
  if (curve.closed) {
    throw std::invalid_argument("asymptotic angle requires an open curve");
  }
  const std::vector<double> s = cumulative_arclength(curve);
  const double total = s.back();
  const double window_start = 0.9 * total;

  // Edges whose midpoint arclength lies in the trailing window. The
  // length-weighted mean direction is the direction of the summed edges.
  Vec2 mean_dir{};
  std::size_t window_edges = 0;
  std::vector<double> angles;
  for (std::size_t i = 0; i + 1 < curve.vertices.size(); ++i) {
    const double smid = 0.5 * (s[i] + s[i + 1]);
    if (smid < window_start) continue;
    const Vec2 e = curve.vertices[i + 1] - curve.vertices[i];
    mean_dir += e;
    angles.push_back(std::atan2(e.y, e.x));
    ++window_edges;
  }
  if (window_edges + 1 < 10) {
    throw std::runtime_error("asymptotic-angle window has fewer than 10 "
                             "vertices (" + std::to_string(window_edges + 1) +
                             ")");
  }
  AsymptoticAngle out;
  out.angle = std::atan2(mean_dir.y, mean_dir.x);
  // Spread as max-min of the angles, measured relative to the mean so a
  // window straddling the atan2 branch cut is not misread as a 2*pi spread.
  double lo = 0.0, hi = 0.0;
  for (double a : angles) {
    double d = a - out.angle;
    while (d > M_PI) d -= 2.0 * M_PI;
    while (d < -M_PI) d += 2.0 * M_PI;
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  out.uncertainty = hi - lo;
  return out;
}

ShootResult shoot_for_cone_angle(double mu, double target, double b_lo,
                                 double b_hi, double ds, double s_max) {
  if (!(b_lo > 0.0) || !(b_hi > b_lo)) {
    throw std::invalid_argument("bracket [b_lo, b_hi] must satisfy 0 < b_lo < b_hi");
  }
  constexpr double angle_tol = 1e-6;
  constexpr int max_iter = 80;

  auto eval = [&](double b) {
    return asymptotic_angle(
               integrate_expander(ExpanderShootingProblem{mu, b, ds, s_max}))
        .angle;
  };
  double f_lo = eval(b_lo) - target;
  double f_hi = eval(b_hi) - target;
  if (f_lo == 0.0) return {b_lo, 0.0, 0};
  if (f_hi == 0.0) return {b_hi, 0.0, 0};
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    throw std::runtime_error(
        "bracket failure: asymptotic angle lies on the same side of the "
        "target at both bracket ends");
  }

  ShootResult res;
  for (res.iterations = 1; res.iterations <= max_iter; ++res.iterations) {
    const double mid = 0.5 * (b_lo + b_hi);
    const double f_mid = eval(mid) - target;
    res.b = mid;
    res.mismatch = f_mid;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      b_lo = mid;
      f_lo = f_mid;
    } else {
      b_hi = mid;
    }
    if (std::abs(f_mid) <= angle_tol && (b_hi - b_lo) <= angle_tol) break;
  }
  return res;
}

PolylineCurve make_line_through_origin(double angle, double extent,
                                       std::size_t n) {
  if (!(extent > 0.0)) throw std::invalid_argument("extent must be positive");
  if (n < 3) throw std::invalid_argument("need at least 3 vertices");
  PolylineCurve c;
  c.closed = false;
  const Vec2 dir{std::cos(angle), std::sin(angle)};
  c.vertices.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double u = -extent + 2.0 * extent * static_cast<double>(k) /
                                   static_cast<double>(n - 1);
    c.vertices.push_back(u * dir);
  }
  return c;
}

PolylineCurve make_offset_line(double b, double extent, std::size_t n) {
  if (!(extent > 0.0)) throw std::invalid_argument("extent must be positive");
  if (n < 3) throw std::invalid_argument("need at least 3 vertices");
  PolylineCurve c;
  c.closed = false;
  c.vertices.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double u = -extent + 2.0 * extent * static_cast<double>(k) /
                                   static_cast<double>(n - 1);
    c.vertices.push_back({u, b});
  }
  return c;
}

PolylineCurve make_circle(double radius, Vec2 center, std::size_t n) {
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  if (n < 3) throw std::invalid_argument("need at least 3 vertices");
  PolylineCurve c;
  c.closed = true;
  c.vertices.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double a = 2.0 * M_PI * static_cast<double>(k) /
                     static_cast<double>(n);
    c.vertices.push_back(center + radius * Vec2{std::cos(a), std::sin(a)});
  }
  return c;
}

PolylineCurve make_two_ray_cone(double angle1, double angle2, double extent,
                                std::size_t n) {
  if (!(extent > 0.0)) throw std::invalid_argument("extent must be positive");
  if (n < 5) throw std::invalid_argument("need at least 5 vertices");
  const std::size_t half = n / 2;  // vertices per ray, origin shared
  PolylineCurve c;
  c.closed = false;
  c.vertices.reserve(2 * half + 1);
  const Vec2 d1{std::cos(angle1), std::sin(angle1)};
  const Vec2 d2{std::cos(angle2), std::sin(angle2)};
  for (std::size_t k = 0; k < half; ++k) {
    const double r =
        extent * static_cast<double>(half - k) / static_cast<double>(half);
    c.vertices.push_back(r * d1);
  }
  c.vertices.push_back({0.0, 0.0});
  for (std::size_t k = 1; k <= half; ++k) {
    const double r = extent * static_cast<double>(k) / static_cast<double>(half);
    c.vertices.push_back(r * d2);
  }
  return c;
}

}  // namespace explab
