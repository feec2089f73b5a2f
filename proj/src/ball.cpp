#include "explab/ball.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <stdexcept>

namespace explab {

namespace {

constexpr double kMinPieceWidth = 1e-12;  // grazing / degenerate piece cutoff

struct EdgeInterval {
  double a, b;
};

// Sub-interval of [0,1] where |p + t*d|^2 <= R^2, p = x_i - p0, d = edge.
// Returns nothing for edges that miss the ball or merely graze it.
std::optional<EdgeInterval> clip_edge(Vec2 p, Vec2 d, double R) {
  const double a2 = norm2(d);
  const double a1 = 2.0 * dot(p, d);
  const double a0 = norm2(p) - R * R;
  const bool in0 = a0 <= 0.0;
  const bool in1 = norm2(p + d) - R * R <= 0.0;
  if (in0 && in1) return EdgeInterval{0.0, 1.0};

  // A discriminant at roundoff scale is a tangential grazing, which carries
  // no measure. The noise floor of disc is set by the cancellation in a0,
  // of order 4 a2 ulp(max(|p|^2, R^2)).
  const double disc = a1 * a1 - 4.0 * a2 * a0;
  const double graze = 4.0 * a2 * 1e-12 * std::max(norm2(p), R * R);
  if (disc <= graze) {
    return std::nullopt;  // miss, or tangential grazing
  }
  const double s = std::sqrt(disc);
  const double qq = -0.5 * (a1 + std::copysign(s, a1));
  double t_lo, t_hi;
  if (qq == 0.0) {
    t_lo = t_hi = 0.0;
  } else {
    t_lo = qq / a2;
    t_hi = a0 / qq;
    if (t_lo > t_hi) std::swap(t_lo, t_hi);
  }
  // One Newton polish per root against q(t) = a2 t^2 + a1 t + a0.
  auto polish = [&](double t) {
    const double g = (a2 * t + a1) * t + a0;
    const double dg = 2.0 * a2 * t + a1;
    if (dg != 0.0) t -= g / dg;
    return t;
  };
  t_lo = polish(t_lo);
  t_hi = polish(t_hi);

  double lo, hi;
  if (in0 && !in1) {
    lo = 0.0;
    hi = std::clamp(t_hi, 0.0, 1.0);
  } else if (!in0 && in1) {
    lo = std::clamp(t_lo, 0.0, 1.0);
    hi = 1.0;
  } else {
    lo = std::max(t_lo, 0.0);
    hi = std::min(t_hi, 1.0);
  }
  if (!(hi - lo > kMinPieceWidth)) return std::nullopt;
  return EdgeInterval{lo, hi};
}

ClippedSegment make_segment(const PolylineCurve& curve, std::size_t edge,
                            double a, double b) {
  const Vec2 v0 = curve.vertices[edge];
  const Vec2 v1 = curve.vertices[(edge + 1) % curve.vertices.size()];
  const Vec2 d = v1 - v0;
  ClippedSegment s;
  s.edge = edge;
  s.a = a;
  s.b = b;
  s.length = (b - a) * norm(d);
  s.mid = v0 + (0.5 * (a + b)) * d;
  return s;
}

void check_radius(double R) {
  if (!(R > 0.0)) throw std::invalid_argument("radius must be positive");
}

}  // namespace

std::vector<ClippedSegment> clip_to_ball(const PolylineCurve& curve, Vec2 p0,
                                         double R) {
  validate_curve(curve);
  check_radius(R);
  std::vector<ClippedSegment> out;
  const std::size_t m = curve.edge_count();
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2 v0 = curve.vertices[i];
    const Vec2 v1 = curve.vertices[(i + 1) % curve.vertices.size()];
    if (auto iv = clip_edge(v0 - p0, v1 - v0, R)) {
      out.push_back(make_segment(curve, i, iv->a, iv->b));
    }
  }
  return out;
}

std::vector<ClippedSegment> clip_to_annulus(const PolylineCurve& curve,
                                            Vec2 p0, double R1, double R2) {
  validate_curve(curve);
  check_radius(R1);
  if (!(R2 > R1)) throw std::invalid_argument("annulus needs R1 < R2");
  std::vector<ClippedSegment> out;
  const std::size_t m = curve.edge_count();
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2 v0 = curve.vertices[i];
    const Vec2 v1 = curve.vertices[(i + 1) % curve.vertices.size()];
    const auto outer = clip_edge(v0 - p0, v1 - v0, R2);
    if (!outer) continue;
    const auto inner = clip_edge(v0 - p0, v1 - v0, R1);
    if (!inner) {
      out.push_back(make_segment(curve, i, outer->a, outer->b));
      continue;
    }
    // outer piece minus inner piece: up to two remnants.
    if (inner->a - outer->a > kMinPieceWidth) {
      out.push_back(make_segment(curve, i, outer->a, inner->a));
    }
    if (outer->b - inner->b > kMinPieceWidth) {
      out.push_back(make_segment(curve, i, inner->b, outer->b));
    }
  }
  return out;
}

double interpolate_on_edge(const PolylineCurve& curve,
                           const std::vector<double>& values, std::size_t edge,
                           double t) {
  const double v0 = values[edge];
  const double v1 = values[(edge + 1) % curve.vertices.size()];
  return v0 + t * (v1 - v0);
}

CurveQuadratureData make_quadrature_data(const PolylineCurve& curve,
                                         const VertexGeometry& geom,
                                         const ScalarField& field) {
  validate_field(curve, field);
  CurveQuadratureData data;
  data.f = field.values;
  data.laplace_f = discrete_laplacian(curve, field);
  data.xperp_sq.resize(curve.vertices.size());
  for (std::size_t i = 0; i < curve.vertices.size(); ++i) {
    data.xperp_sq[i] = norm2(geom.x_perp[i]);
  }
  return data;
}

double integral_over_ball(const PolylineCurve& curve, const ScalarField& field,
                          Vec2 p0, double R) {
  validate_field(curve, field);
  double sum = 0.0;
  for (const ClippedSegment& s : clip_to_ball(curve, p0, R)) {
    sum += interpolate_on_edge(curve, field.values, s.edge,
                               0.5 * (s.a + s.b)) *
           s.length;
  }
  return sum;
}

double integral_over_annulus(const PolylineCurve& curve,
                             const ScalarField& field, Vec2 p0, double R1,
                             double R2) {
  validate_field(curve, field);
  double sum = 0.0;
  for (const ClippedSegment& s : clip_to_annulus(curve, p0, R1, R2)) {
    sum += interpolate_on_edge(curve, field.values, s.edge,
                               0.5 * (s.a + s.b)) *
           s.length;
  }
  return sum;
}

BallScalars ball_scalars(const PolylineCurve& curve,
                         const CurveQuadratureData& data, Vec2 p0, double R) {
  BallScalars out;
  for (const ClippedSegment& s : clip_to_ball(curve, p0, R)) {
    const double t = 0.5 * (s.a + s.b);
    const double fm = interpolate_on_edge(curve, data.f, s.edge, t);
    const double lm = interpolate_on_edge(curve, data.laplace_f, s.edge, t);
    const double pm = interpolate_on_edge(curve, data.xperp_sq, s.edge, t);
    const double d2 = norm2(s.mid - p0);
    out.f_integral += fm * s.length;
    out.transverse_sq += pm * fm * s.length;
    out.laplace_term += (R * R - d2) * lm * s.length;
  }
  return out;
}

double annulus_transverse_weight(const PolylineCurve& curve,
                                 const CurveQuadratureData& data, Vec2 p0,
                                 double R1, double R2, double eps_drop,
                                 DropStats* drops) {
  double sum = 0.0;
  for (const ClippedSegment& s : clip_to_annulus(curve, p0, R1, R2)) {
    const double r = norm(s.mid - p0);
    if (r < eps_drop) {
      if (drops) {
        drops->segments += 1;
        drops->length += s.length;
      }
      continue;
    }
    const double t = 0.5 * (s.a + s.b);
    const double fm = interpolate_on_edge(curve, data.f, s.edge, t);
    const double pm = interpolate_on_edge(curve, data.xperp_sq, s.edge, t);
    sum += fm * pm / (r * r * r) * s.length;
  }
  return sum;
}

RadialProfile build_radial_profile(const PolylineCurve& curve,
                                   const ScalarField& field, Vec2 p0,
                                   const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("empty radius grid");
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!(grid[k] > 0.0)) throw std::invalid_argument("radius must be positive");
    if (k > 0 && !(grid[k] > grid[k - 1])) {
      throw std::invalid_argument("radius grid must be strictly increasing");
    }
  }
  const VertexGeometry geom = compute_vertex_geometry(curve);
  const CurveQuadratureData data = make_quadrature_data(curve, geom, field);
  const double eps_drop = 1e-8 * grid.back();

  RadialProfile profile;
  profile.radius = grid;
  for (double R : grid) {
    const BallScalars s = ball_scalars(curve, data, p0, R);
    profile.f_integral.push_back(s.f_integral);
    profile.density_ratio.push_back(s.f_integral / R);
    profile.transverse_sq.push_back(s.transverse_sq);
    profile.laplace_term.push_back(s.laplace_term);
  }
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    profile.annulus_weight.push_back(annulus_transverse_weight(
        curve, data, p0, grid[k], grid[k + 1], eps_drop, &profile.dropped));
  }
  return profile;
}

void write_radial_profile_csv(const RadialProfile& profile, std::ostream& os) {
  os << "R,F,Theta,A,L,W_annulus\n";
  char buf[512];
  for (std::size_t k = 0; k < profile.radius.size(); ++k) {
    if (k == 0) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,\n",
                    profile.radius[k], profile.f_integral[k],
                    profile.density_ratio[k], profile.transverse_sq[k],
                    profile.laplace_term[k]);
    } else {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                    profile.radius[k], profile.f_integral[k],
                    profile.density_ratio[k], profile.transverse_sq[k],
                    profile.laplace_term[k], profile.annulus_weight[k - 1]);
    }
    os << buf;
  }
}

}  // namespace explab
