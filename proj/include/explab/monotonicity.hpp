#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "explab/ball.hpp"
#include "explab/geometry.hpp"

namespace explab {

enum class Verdict { holds, equality, violated, hypothesis_unmet };

std::string to_string(Verdict v);

struct AnnulusRow {
  double r1 = 0.0, r2 = 0.0;
  double lhs = 0.0;    // density-ratio increment
  double term1 = 0.0;  // annulus transverse weight W
  double term2 = 0.0;  // Laplace term integral
  double term3 = 0.0;  // mu term integral
  double slack = 0.0;  // lhs - (term1 + term2 + term3)
};

struct HypothesisStatus {
  double defect_min = 0.0;
  double defect_tol = 0.0;
  bool defect_ok = false;
  // Pointwise margin of the Laplace condition (cor22 only):
  // laplace(f) + (lambda + 2 mu |xperp|^2) R0^-2 f.
  std::optional<double> laplace_margin_min;
  bool ok() const {
    return defect_ok &&
           (!laplace_margin_min || *laplace_margin_min >= -1e-12);
  }
};

struct VerificationReport {
  std::string claim;  // thm13 | cor22 | cor23
  std::vector<double> grid;
  std::vector<AnnulusRow> rows;
  std::vector<double> g;  // cor22: weighted density ratio per grid node
  HypothesisStatus hypothesis;
  double worst_slack = 0.0;
  Verdict verdict = Verdict::holds;
  double tol_slack = 0.0;
  double tol_eq = 0.0;
  DropStats dropped;
};

struct VerifyOptions {
  double tol_slack = 1e-6;
  double tol_eq = 1e-4;
  std::optional<double> tol_defect;  // default: 1e-6 (1 + mu diam^2)
  int simpson_nodes = 17;            // per annulus, >= 9, forced odd
};

/// Integrated two-radius form of the density-ratio inequality: per annulus
/// (R1,R2],
///   lhs   = F(R2)/R2 - F(R1)/R1,
///   term1 = int over annulus of f |xperp|^2 / |x-p0|^3,
///   term2 = int_R1^R2 L(R) / (2 R^2) dR   (composite Simpson),
///   term3 = int_R1^R2 mu A(R) / R^2 dR,
/// with slack = lhs - term1 - term2 - term3. A hypothesis failure never
/// aborts the computation; it only changes the verdict.
VerificationReport verify_theorem13(const PolylineCurve& curve,
                                    const ScalarField& field,
                                    const std::vector<double>& grid,
                                    const VerifyOptions& opts = {});

/// Monotonicity of g(R) = exp(lambda R / (2 R0)) F(R) / R on the grid, with
/// the pointwise Laplace hypothesis checked at interior vertices inside
/// B_R0. Grid radii must not exceed R0.
VerificationReport verify_corollary22(const PolylineCurve& curve,
                                      const ScalarField& field, double lambda,
                                      double R0,
                                      const std::vector<double>& grid,
                                      const VerifyOptions& opts = {});

/// f == 1 specialization of verify_theorem13 (the Laplace term vanishes).
VerificationReport verify_corollary23(const PolylineCurve& curve,
                                      const std::vector<double>& grid,
                                      const VerifyOptions& opts = {});

struct MeanValueBound {
  double bound = 0.0;
  double f_at_p0 = 0.0;
  bool satisfied = false;
  std::size_t vertex = 0;
};

/// bound = exp(lambda/2) F(R0) / (2 R0); requires p0 to lie on the curve
/// (within 1e-8 R0 of a vertex).
MeanValueBound mean_value_bound(const PolylineCurve& curve,
                                const ScalarField& field, double lambda,
                                double R0, double tol = 1e-9);

}  // namespace explab
