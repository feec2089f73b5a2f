#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace explab {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline Vec2 operator*(Vec2 v, double s) { return s * v; }
inline Vec2 operator/(Vec2 v, double s) { return {v.x / s, v.y / s}; }
inline Vec2& operator+=(Vec2& a, Vec2 b) { a = a + b; return a; }
inline Vec2& operator-=(Vec2& a, Vec2 b) { a = a - b; return a; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm2(Vec2 v) { return dot(v, v); }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
/// Rotation by +90 degrees.
inline Vec2 perp(Vec2 v) { return {-v.y, v.x}; }
inline Vec2 normalized(Vec2 v) { return v / norm(v); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }

/// An immersed polyline in the plane. Open curves carry interior geometry
/// only at vertices with two neighbours; closed curves wrap around.
struct PolylineCurve {
  std::vector<Vec2> vertices;
  bool closed = false;
  Vec2 p0{0.0, 0.0};
  double mu = 0.0;

  std::size_t size() const { return vertices.size(); }
  std::size_t edge_count() const {
    return closed ? vertices.size() : vertices.size() - 1;
  }
  bool is_interior(std::size_t i) const {
    return closed || (i > 0 && i + 1 < vertices.size());
  }
};

/// One scalar per vertex of an associated curve. Values must be nonnegative.
struct ScalarField {
  std::vector<double> values;
};

/// Per-vertex discrete geometry. Entries at open-curve endpoints carry the
/// single-edge tangent and zero curvature; they are extension values used by
/// edge interpolation only and are excluded from interior statistics.
struct VertexGeometry {
  std::vector<double> len_prev;          // length of edge into vertex
  std::vector<double> len_next;          // length of edge out of vertex
  std::vector<Vec2> tangent;             // unit tangent
  std::vector<Vec2> mean_curvature;      // discrete Laplacian of position
  std::vector<Vec2> x_tangential;        // <x-p0,T>T
  std::vector<Vec2> x_perp;              // (x-p0) - x_tangential
  std::vector<char> interior;            // 1 where both neighbours exist
};

struct DefectSummary {
  double min_defect = 0.0;
  double max_abs = 0.0;
  bool expander_type = false;
  double tolerance = 0.0;
};

/// Throws std::invalid_argument on structural violations (vertex count,
/// repeated consecutive vertices, negative mu).
void validate_curve(const PolylineCurve& curve);

/// Throws when the field does not match the curve or carries negative values.
void validate_field(const PolylineCurve& curve, const ScalarField& field);

ScalarField make_constant_field(const PolylineCurve& curve, double value);

/// Diagonal of the vertex bounding box; the length scale used by degeneracy
/// thresholds.
double curve_diameter(const PolylineCurve& curve);

double total_arclength(const PolylineCurve& curve);

/// Cumulative arclength at each vertex (size n; closed curves do not include
/// the wrap edge in the last entry).
std::vector<double> cumulative_arclength(const PolylineCurve& curve);

std::vector<double> edge_lengths(const PolylineCurve& curve);

/// Dual-length-weighted second differences of position (mean curvature) and
/// angle-bisector tangents, with the tangential/normal split of x - p0.
/// Rejects edges shorter than 1e-14 * diameter.
VertexGeometry compute_vertex_geometry(const PolylineCurve& curve);

/// d_i = <H_i, x_i - p0> - mu * |xperp_i|^2 at interior vertices; NaN at
/// open-curve endpoints.
std::vector<double> expander_defect(const PolylineCurve& curve,
                                    const VertexGeometry& geom);
std::vector<double> expander_defect(const PolylineCurve& curve);

/// Default classification tolerance: 1e-6 * (1 + mu * diameter^2).
double default_defect_tolerance(const PolylineCurve& curve);

DefectSummary classify_expander_type(const PolylineCurve& curve,
                                     const VertexGeometry& geom,
                                     double tolerance);
DefectSummary classify_expander_type(const PolylineCurve& curve);

/// Dual-length-weighted second difference of a vertex field. Endpoint entries
/// of open curves copy the nearest interior value (constant extension used by
/// the ball quadrature).
std::vector<double> discrete_laplacian(const PolylineCurve& curve,
                                       const ScalarField& field);

/// Smallest c with <x,nu>^2 <= c (1+|x|^2)^(1-delta) over interior vertices,
/// nu the +90 degree rotation of the tangent. Requires 0 < delta <= 1.
double growth_condition_estimate(const PolylineCurve& curve, double delta);

/// Uniform dilation about center: center + lambda * (x - center).
PolylineCurve dilate_curve(const PolylineCurve& curve, Vec2 center,
                           double lambda);

}  // namespace explab
