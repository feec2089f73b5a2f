#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "explab/geometry.hpp"

namespace explab {

/// Sub-interval [a,b] of one edge lying inside a ball (or annulus) around p0.
struct ClippedSegment {
  std::size_t edge = 0;
  double a = 0.0;
  double b = 1.0;
  double length = 0.0;
  Vec2 mid{};
};

/// Per-vertex values consumed by the ball quadrature. Endpoint entries of
/// open curves hold the single-edge / nearest-interior extensions from
/// geometry-core.
struct CurveQuadratureData {
  std::vector<double> f;
  std::vector<double> laplace_f;
  std::vector<double> xperp_sq;
};

struct DropStats {
  std::size_t segments = 0;
  double length = 0.0;
};

/// Ball-restricted integrals at one radius: F = int f, A = int |xperp|^2 f,
/// L = int (R^2 - |x-p0|^2) laplace(f).
struct BallScalars {
  double f_integral = 0.0;
  double transverse_sq = 0.0;
  double laplace_term = 0.0;
};

/// Radius-indexed table of the ball integrals plus the per-annulus transverse
/// weight W = int f |xperp|^2 / |x-p0|^3 (one entry per consecutive radius
/// pair).
struct RadialProfile {
  std::vector<double> radius;
  std::vector<double> f_integral;        // F(R)
  std::vector<double> density_ratio;     // F(R) / R
  std::vector<double> transverse_sq;     // A(R)
  std::vector<double> laplace_term;      // L(R)
  std::vector<double> annulus_weight;    // W over (R_k, R_{k+1}]
  DropStats dropped;                     // segments excluded near p0
};

/// Exact per-edge solution of |x(t)-p0|^2 = R^2; tangential grazing counts
/// as no crossing.
std::vector<ClippedSegment> clip_to_ball(const PolylineCurve& curve, Vec2 p0,
                                         double R);

/// Pieces with R1 < |x-p0| <= R2 (up to two per edge).
std::vector<ClippedSegment> clip_to_annulus(const PolylineCurve& curve,
                                            Vec2 p0, double R1, double R2);

/// Linear interpolation of a vertex field at edge parameter t.
double interpolate_on_edge(const PolylineCurve& curve,
                           const std::vector<double>& values, std::size_t edge,
                           double t);

CurveQuadratureData make_quadrature_data(const PolylineCurve& curve,
                                         const VertexGeometry& geom,
                                         const ScalarField& field);

/// Midpoint quadrature of the interpolated field over the clipped curve;
/// exact for fields linear along each edge.
double integral_over_ball(const PolylineCurve& curve, const ScalarField& field,
                          Vec2 p0, double R);

double integral_over_annulus(const PolylineCurve& curve,
                             const ScalarField& field, Vec2 p0, double R1,
                             double R2);

BallScalars ball_scalars(const PolylineCurve& curve,
                         const CurveQuadratureData& data, Vec2 p0, double R);

/// W over (R1, R2]. Segments with midpoint distance below eps_drop are
/// excluded and reported through drops.
double annulus_transverse_weight(const PolylineCurve& curve,
                                 const CurveQuadratureData& data, Vec2 p0,
                                 double R1, double R2, double eps_drop,
                                 DropStats* drops = nullptr);

/// Fills the whole table over a strictly increasing positive grid. The
/// singularity guard uses eps = 1e-8 * grid.back().
RadialProfile build_radial_profile(const PolylineCurve& curve,
                                   const ScalarField& field, Vec2 p0,
                                   const std::vector<double>& grid);

/// CSV columns: R,F,Theta,A,L,W_annulus (W on the row of the annulus's outer
/// radius, empty on the first row).
void write_radial_profile_csv(const RadialProfile& profile, std::ostream& os);

}  // namespace explab
