#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "explab/geometry.hpp"

namespace explab {

/// Weighted atoms (position, orthonormal n-frame, weight) representing an
/// n-rectifiable varifold in ambient dimension n+m <= 3.
struct RectifiableVarifold {
  struct Atom {
    std::array<double, 3> x{0.0, 0.0, 0.0};
    std::array<std::array<double, 3>, 2> frame{{{0, 0, 0}, {0, 0, 0}}};
    double w = 0.0;
  };

  int dim_n = 1;
  int ambient = 2;
  std::vector<Atom> atoms;

  double total_mass() const;
};

/// Frames orthonormal within 1e-10, weights positive and finite.
void validate_varifold(const RectifiableVarifold& T);

/// |x|, |P_{frame-complement} x|^2 for one atom.
double atom_radius(const RectifiableVarifold& T,
                   const RectifiableVarifold::Atom& a);
double atom_transverse_sq(const RectifiableVarifold& T,
                          const RectifiableVarifold::Atom& a);

/// One atom per edge: midpoint - origin, unit chord tangent, edge length.
RectifiableVarifold varifold_from_curve(const PolylineCurve& curve,
                                        Vec2 origin = {0.0, 0.0});

/// Deterministic stratified area samples (n = 2 in R^3); weights are exact
/// patch areas, seeded jitter moves atoms only within their angular stratum.
RectifiableVarifold sample_plane_disc(double radius, double target_spacing,
                                      std::uint64_t seed = 0);
RectifiableVarifold sample_cone(double half_angle, double slant_extent,
                                double target_spacing, std::uint64_t seed = 0);
RectifiableVarifold sample_sphere(double target_spacing,
                                  std::uint64_t seed = 0);

double mass_in_ball(const RectifiableVarifold& T, double t);
double density_ratio(const RectifiableVarifold& T, double t);

struct MonotonicitySlack {
  double ratio_s = 0.0;
  double ratio_t = 0.0;
  double transverse_term = 0.0;  // sum over annulus of w |Px|^2 / |x|^(n+2)
  double slack = 0.0;            // (ratio_t - ratio_s) - transverse_term
};

/// Density-ratio increment minus the transverse annulus term; nonnegative up
/// to tolerance when the generating surface satisfies H.(x-p0) >= 0.
MonotonicitySlack monotonicity_check(const RectifiableVarifold& T, double s,
                                     double t);

/// Mass-normalized transverse energy sum over the annulus; zero exactly on
/// cones. Throws on an empty annulus.
double cone_deviation(const RectifiableVarifold& T, double s, double t);

/// Positions scaled by lambda, weights by lambda^n, frames unchanged.
RectifiableVarifold rescale(const RectifiableVarifold& T, double lambda);

/// Mass-weighted angular clustering of atom directions (n = 1 only), circular
/// single-linkage with the given merge threshold. Returns ascending angles.
std::vector<double> fit_ray_directions(const RectifiableVarifold& T, double s,
                                       double t,
                                       double merge_threshold = 0.05);

struct ConeReport {
  double s = 1.0;
  double t = 2.0;
  double ratio_s = 0.0;
  double ratio_t = 0.0;
  double slack = 0.0;
  double deviation = 0.0;
  bool is_cone = false;
  bool hypothesis_warning = false;  // raised when slack < -tol
  std::vector<double> rays;
};

struct ConeReportOptions {
  double s = 1.0;
  double t = 2.0;
  double tol_cone = 1e-3;
  double merge_threshold = 0.05;
};

ConeReport cone_report(const RectifiableVarifold& T,
                       const ConeReportOptions& opts = {});

struct BlowDownResult {
  std::vector<double> scales;
  std::vector<ConeReport> reports;
  std::vector<double> limit_rays;  // rays of the smallest-scale report
};

/// Rescales the curve's edge varifold (about the curve's p0) by each scale
/// and evaluates a ConeReport on the fixed reference annulus. Scales must be
/// strictly decreasing and the curve must cover the outermost annulus.
BlowDownResult blow_down_pipeline(const PolylineCurve& curve,
                                  const std::vector<double>& scales,
                                  const ConeReportOptions& opts = {});

/// CSV exchange: x1..xd, t1_1..t1_d [, t2_1..t2_d], w.
void write_varifold_csv(const RectifiableVarifold& T, std::ostream& os);
RectifiableVarifold read_varifold_csv(std::istream& is);

}  // namespace explab
