#include "explab/monotonicity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace explab {

namespace {

void check_grid(const std::vector<double>& grid, std::size_t min_size) {
  if (grid.size() < min_size) {
    throw std::invalid_argument("radius grid needs at least " +
                                std::to_string(min_size) + " radii");
  }
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!(grid[k] > 0.0)) {
      throw std::invalid_argument("grid radii must be positive");
    }
    if (k > 0 && !(grid[k] > grid[k - 1])) {
      throw std::invalid_argument("grid must be strictly increasing");
    }
  }
}

double simpson(const std::function<double(double)>& fn, double a, double b,
               int nodes) {
  if (nodes < 9) nodes = 9;
  if (nodes % 2 == 0) ++nodes;
  const int intervals = nodes - 1;
  const double h = (b - a) / intervals;
  double sum = fn(a) + fn(b);
  for (int k = 1; k < intervals; ++k) {
    sum += (k % 2 == 1 ? 4.0 : 2.0) * fn(a + k * h);
  }
  return sum * h / 3.0;
}

Verdict decide(const HypothesisStatus& hyp, const std::vector<AnnulusRow>& rows,
               double tol_slack, double tol_eq) {
  if (!hyp.ok()) return Verdict::hypothesis_unmet;
  bool all_eq = true;
  double worst = 0.0;
  for (const AnnulusRow& r : rows) {
    all_eq = all_eq && std::abs(r.slack) <= tol_eq;
    worst = std::min(worst, r.slack);
  }
  if (all_eq) return Verdict::equality;
  if (worst < -tol_slack) return Verdict::violated;
  return Verdict::holds;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::equality: return "equality";
    case Verdict::violated: return "violated";
    case Verdict::hypothesis_unmet: return "hypothesis_unmet";
  }
  return "unknown";
}

VerificationReport verify_theorem13(const PolylineCurve& curve,
                                    const ScalarField& field,
                                    const std::vector<double>& grid,
                                    const VerifyOptions& opts) {
  check_grid(grid, 2);
  validate_field(curve, field);
  const VertexGeometry geom = compute_vertex_geometry(curve);
  const CurveQuadratureData data = make_quadrature_data(curve, geom, field);
  const Vec2 p0 = curve.p0;
  const double mu = curve.mu;
  const double eps_drop = 1e-8 * grid.back();

  VerificationReport rep;
  rep.claim = "thm13";
  rep.grid = grid;
  rep.tol_slack = opts.tol_slack;
  rep.tol_eq = opts.tol_eq;

  const double tol_defect =
      opts.tol_defect ? *opts.tol_defect : default_defect_tolerance(curve);
  const DefectSummary defect = classify_expander_type(curve, geom, tol_defect);
  rep.hypothesis.defect_min = defect.min_defect;
  rep.hypothesis.defect_tol = tol_defect;
  rep.hypothesis.defect_ok = defect.expander_type;

  std::vector<BallScalars> at_radius;
  at_radius.reserve(grid.size());
  for (double R : grid) {
    at_radius.push_back(ball_scalars(curve, data, p0, R));
  }

  auto laplace_integrand = [&](double R) {
    return ball_scalars(curve, data, p0, R).laplace_term / (2.0 * R * R);
  };
  auto mu_integrand = [&](double R) {
    return mu * ball_scalars(curve, data, p0, R).transverse_sq / (R * R);
  };

  rep.worst_slack = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    AnnulusRow row;
    row.r1 = grid[k];
    row.r2 = grid[k + 1];
    row.lhs = at_radius[k + 1].f_integral / row.r2 -
              at_radius[k].f_integral / row.r1;
    row.term1 = annulus_transverse_weight(curve, data, p0, row.r1, row.r2,
                                          eps_drop, &rep.dropped);
    row.term2 = simpson(laplace_integrand, row.r1, row.r2, opts.simpson_nodes);
    row.term3 =
        mu == 0.0 ? 0.0
                  : simpson(mu_integrand, row.r1, row.r2, opts.simpson_nodes);
    row.slack = row.lhs - row.term1 - row.term2 - row.term3;
    rep.worst_slack = std::min(rep.worst_slack, row.slack);
    rep.rows.push_back(row);
  }
  rep.verdict = decide(rep.hypothesis, rep.rows, rep.tol_slack, rep.tol_eq);
  return rep;
}

VerificationReport verify_corollary22(const PolylineCurve& curve,
                                      const ScalarField& field, double lambda,
                                      double R0,
                                      const std::vector<double>& grid,
                                      const VerifyOptions& opts) {
  if (!(R0 > 0.0)) throw std::invalid_argument("R0 must be positive");
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  check_grid(grid, 2);
  if (grid.back() > R0 * (1.0 + 1e-12)) {
    throw std::invalid_argument("grid exceeds R0");
  }
  validate_field(curve, field);
  const VertexGeometry geom = compute_vertex_geometry(curve);
  const CurveQuadratureData data = make_quadrature_data(curve, geom, field);

  VerificationReport rep;
  rep.claim = "cor22";
  rep.grid = grid;
  rep.tol_slack = opts.tol_slack;
  rep.tol_eq = opts.tol_eq;

  const double tol_defect =
      opts.tol_defect ? *opts.tol_defect : default_defect_tolerance(curve);
  const DefectSummary defect = classify_expander_type(curve, geom, tol_defect);
  rep.hypothesis.defect_min = defect.min_defect;
  rep.hypothesis.defect_tol = tol_defect;
  rep.hypothesis.defect_ok = defect.expander_type;

  // Pointwise Laplace hypothesis at interior vertices inside B_R0.
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < curve.vertices.size(); ++i) {
    if (!geom.interior[i]) continue;
    if (norm(curve.vertices[i] - curve.p0) > R0) continue;
    const double m = data.laplace_f[i] +
                     (lambda + 2.0 * curve.mu * data.xperp_sq[i]) /
                         (R0 * R0) * data.f[i];
    margin = std::min(margin, m);
  }
  if (std::isfinite(margin)) rep.hypothesis.laplace_margin_min = margin;

  rep.g.reserve(grid.size());
  for (double R : grid) {
    const double F = ball_scalars(curve, data, curve.p0, R).f_integral;
    rep.g.push_back(std::exp(lambda * R / (2.0 * R0)) * F / R);
  }
  rep.worst_slack = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    AnnulusRow row;
    row.r1 = grid[k];
    row.r2 = grid[k + 1];
    row.lhs = rep.g[k + 1] - rep.g[k];
    row.slack = row.lhs;
    rep.worst_slack = std::min(rep.worst_slack, row.slack);
    rep.rows.push_back(row);
  }
  rep.verdict = decide(rep.hypothesis, rep.rows, rep.tol_slack, rep.tol_eq);
  return rep;
}

VerificationReport verify_corollary23(const PolylineCurve& curve,
                                      const std::vector<double>& grid,
                                      const VerifyOptions& opts) {
  VerificationReport rep =
      verify_theorem13(curve, make_constant_field(curve, 1.0), grid, opts);
  rep.claim = "cor23";
  return rep;
}

MeanValueBound mean_value_bound(const PolylineCurve& curve,
                                const ScalarField& field, double lambda,
                                double R0, double tol) {
  if (!(R0 > 0.0)) throw std::invalid_argument("R0 must be positive");
  validate_field(curve, field);
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < curve.vertices.size(); ++i) {
    const double d = norm(curve.vertices[i] - curve.p0);
    if (d < best) {
      best = d;
      best_i = i;
    }
  }
  if (best > 1e-8 * R0) {
    throw std::runtime_error("p0 does not lie on the curve (nearest vertex " +
                             std::to_string(best_i) + " at distance " +
                             std::to_string(best) + ")");
  }
  MeanValueBound out;
  out.vertex = best_i;
  out.f_at_p0 = field.values[best_i];
  const double F = integral_over_ball(curve, field, curve.p0, R0);
  out.bound = std::exp(lambda / 2.0) * F / (2.0 * R0);  // Vol(B_1 in R^1) = 2
  out.satisfied = out.f_at_p0 <= out.bound + tol;
  return out;
}

}  // namespace explab
