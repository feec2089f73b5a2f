#include "explab/geometry.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace explab {

namespace {

std::string idx(std::size_t i) { return std::to_string(i); }

}  // namespace

void validate_curve(const PolylineCurve& curve) {
  if (curve.vertices.size() < 3) {
    throw std::invalid_argument("curve needs at least 3 vertices, got " +
                                idx(curve.vertices.size()));
  }
  if (!(curve.mu >= 0.0)) {
    throw std::invalid_argument("curve mu must be nonnegative");
  }
  const std::size_t m = curve.edge_count();
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2 a = curve.vertices[i];
    const Vec2 b = curve.vertices[(i + 1) % curve.vertices.size()];
    if (!(dist(a, b) > 0.0)) {
      throw std::invalid_argument("repeated consecutive vertex at edge " +
                                  idx(i));
    }
  }
}

void validate_field(const PolylineCurve& curve, const ScalarField& field) {
  if (field.values.size() != curve.vertices.size()) {
    throw std::invalid_argument(
        "size mismatch between field (" + idx(field.values.size()) +
        ") and curve (" + idx(curve.vertices.size()) + ")");
  }
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    if (!(field.values[i] >= 0.0)) {
      throw std::invalid_argument("field value at vertex " + idx(i) +
                                  " is negative or NaN");
    }
  }
}

ScalarField make_constant_field(const PolylineCurve& curve, double value) {
  if (!(value >= 0.0)) {
    throw std::invalid_argument("constant field value must be nonnegative");
  }
  return ScalarField{std::vector<double>(curve.vertices.size(), value)};
}

double curve_diameter(const PolylineCurve& curve) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const Vec2& v : curve.vertices) {
    xmin = std::min(xmin, v.x);
    xmax = std::max(xmax, v.x);
    ymin = std::min(ymin, v.y);
    ymax = std::max(ymax, v.y);
  }
  return std::hypot(xmax - xmin, ymax - ymin);
}

std::vector<double> edge_lengths(const PolylineCurve& curve) {
  const std::size_t m = curve.edge_count();
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    out[i] = dist(curve.vertices[i],
                  curve.vertices[(i + 1) % curve.vertices.size()]);
  }
  return out;
}

double total_arclength(const PolylineCurve& curve) {
  double s = 0.0;
  for (double l : edge_lengths(curve)) s += l;
  return s;
}

std::vector<double> cumulative_arclength(const PolylineCurve& curve) {
  std::vector<double> s(curve.vertices.size(), 0.0);
  for (std::size_t i = 1; i < curve.vertices.size(); ++i) {
    s[i] = s[i - 1] + dist(curve.vertices[i - 1], curve.vertices[i]);
  }
  return s;
}

VertexGeometry compute_vertex_geometry(const PolylineCurve& curve) {
  validate_curve(curve);
  const std::size_t n = curve.vertices.size();
  const std::vector<double> el = edge_lengths(curve);
  const double degenerate = 1e-14 * curve_diameter(curve);
  for (std::size_t i = 0; i < el.size(); ++i) {
    if (el[i] < degenerate) {
      throw std::runtime_error("degenerate edge " + idx(i) + " (length " +
                               std::to_string(el[i]) + ")");
    }
  }

  VertexGeometry g;
  g.len_prev.assign(n, 0.0);
  g.len_next.assign(n, 0.0);
  g.tangent.assign(n, Vec2{});
  g.mean_curvature.assign(n, Vec2{});
  g.x_tangential.assign(n, Vec2{});
  g.x_perp.assign(n, Vec2{});
  g.interior.assign(n, 0);

  auto split_position = [&](std::size_t i) {
    const Vec2 d = curve.vertices[i] - curve.p0;
    g.x_tangential[i] = dot(d, g.tangent[i]) * g.tangent[i];
    g.x_perp[i] = d - g.x_tangential[i];
  };

  for (std::size_t i = 0; i < n; ++i) {
    if (!curve.is_interior(i)) continue;
    const std::size_t ie_prev = (i + n - 1) % n;  // edge into i
    const std::size_t ie_next = i;                // edge out of i
    const double lp = el[ie_prev];
    const double ln = el[ie_next];
    const Vec2 e_prev =
        curve.vertices[i] - curve.vertices[(i + n - 1) % n];
    const Vec2 e_next = curve.vertices[(i + 1) % n] - curve.vertices[i];
    g.len_prev[i] = lp;
    g.len_next[i] = ln;
    g.tangent[i] = normalized(e_prev / lp + e_next / ln);
    g.mean_curvature[i] = (2.0 / (lp + ln)) * (e_next / ln - e_prev / lp);
    g.interior[i] = 1;
    split_position(i);
  }

  if (!curve.closed) {
    // Endpoint extension: single-edge tangent, zero curvature.
    g.len_next[0] = el[0];
    g.tangent[0] = normalized(curve.vertices[1] - curve.vertices[0]);
    split_position(0);
    g.len_prev[n - 1] = el[n - 2];
    g.tangent[n - 1] =
        normalized(curve.vertices[n - 1] - curve.vertices[n - 2]);
    split_position(n - 1);
  }
  return g;
}

std::vector<double> expander_defect(const PolylineCurve& curve,
                                    const VertexGeometry& geom) {
  const std::size_t n = curve.vertices.size();
  std::vector<double> d(n, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < n; ++i) {
    if (!geom.interior[i]) continue;
    const Vec2 rel = curve.vertices[i] - curve.p0;
    d[i] = dot(geom.mean_curvature[i], rel) - curve.mu * norm2(geom.x_perp[i]);
  }
  return d;
}

std::vector<double> expander_defect(const PolylineCurve& curve) {
  return expander_defect(curve, compute_vertex_geometry(curve));
}

double default_defect_tolerance(const PolylineCurve& curve) {
  const double diam = curve_diameter(curve);
  return 1e-6 * (1.0 + curve.mu * diam * diam);
}

DefectSummary classify_expander_type(const PolylineCurve& curve,
                                     const VertexGeometry& geom,
                                     double tolerance) {
  const std::vector<double> d = expander_defect(curve, geom);
  DefectSummary s;
  s.tolerance = tolerance;
  s.min_defect = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!geom.interior[i]) continue;
    s.min_defect = std::min(s.min_defect, d[i]);
    s.max_abs = std::max(s.max_abs, std::abs(d[i]));
  }
  s.expander_type = s.min_defect >= -tolerance;
  return s;
}

DefectSummary classify_expander_type(const PolylineCurve& curve) {
  return classify_expander_type(curve, compute_vertex_geometry(curve),
                                default_defect_tolerance(curve));
}

std::vector<double> discrete_laplacian(const PolylineCurve& curve,
                                       const ScalarField& field) {
  validate_curve(curve);
  if (field.values.size() != curve.vertices.size()) {
    throw std::invalid_argument(
        "size mismatch between field (" + idx(field.values.size()) +
        ") and curve (" + idx(curve.vertices.size()) + ")");
  }
  const std::size_t n = curve.vertices.size();
  const std::vector<double> el = edge_lengths(curve);
  std::vector<double> lap(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!curve.is_interior(i)) continue;
    const double lp = el[(i + n - 1) % n];
    const double ln = el[i];
    const double fp = field.values[(i + n - 1) % n];
    const double fc = field.values[i];
    const double fn = field.values[(i + 1) % n];
    lap[i] = (2.0 / (lp + ln)) * ((fn - fc) / ln - (fc - fp) / lp);
  }
  if (!curve.closed && n >= 3) {
    lap[0] = lap[1];
    lap[n - 1] = lap[n - 2];
  }
  return lap;
}

double growth_condition_estimate(const PolylineCurve& curve, double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1]");
  }
  const VertexGeometry g = compute_vertex_geometry(curve);
  double best = 0.0;
  for (std::size_t i = 0; i < curve.vertices.size(); ++i) {
    if (!g.interior[i]) continue;
    const Vec2 x = curve.vertices[i];
    const Vec2 nu = perp(g.tangent[i]);
    const double num = dot(x, nu) * dot(x, nu);
    const double den = std::pow(1.0 + norm2(x), 1.0 - delta);
    best = std::max(best, num / den);
  }
  return best;
}

PolylineCurve dilate_curve(const PolylineCurve& curve, Vec2 center,
                           double lambda) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("dilation factor must be positive");
  }
  PolylineCurve out = curve;
  for (Vec2& v : out.vertices) v = center + lambda * (v - center);
  return out;
}

}  // namespace explab
