#pragma once

#include <vector>

#include <Eigen/Core>

#include "chspec/coefficient.hpp"
#include "chspec/floquet.hpp"
#include "chspec/product_field.hpp"
#include "chspec/report.hpp"
#include "chspec/variations.hpp"

namespace chspec {

/// J f = m f' + (m f)' = 2 m f' + m' f on the closed grid. Smooth m only.
Eigen::VectorXd apply_J(const PeriodicCoefficient& m, const FieldJet& f);
/// K f = (f' - f''') / 2.
Eigen::VectorXd apply_K(const FieldJet& f);

struct LemmaResidual {
  double residual = 0.0;  // max |lambda J(ab) - K(ab)| or the weak-form mismatch
  double scale = 0.0;     // magnitude of the terms being compared
  double relative() const { return residual / std::max(scale, 1e-300); }
};

/// Pointwise lambda J(ab) = K(ab) with both operators applied through the closure jet.
LemmaResidual lemma_residual(const PeriodicCoefficient& m, double lambda,
                             const SolutionTrajectory& a, const SolutionTrajectory& b);

/// The same identity tested against T = 1 + sin 2 pi x + cos(4 pi x) / 2 after moving J and K
/// onto T by parts: only samples of ab (plus boundary values) enter, so the mismatch
/// measures the discretisation of the solutions and the quadrature.
LemmaResidual lemma_weak_residual(const PeriodicCoefficient& m, double lambda,
                                  const SolutionTrajectory& a, const SolutionTrajectory& b);

/// {A, B}_1 = int dA/dm J dB/dm,  {A, B}_2 = int dA/dm K dB/dm  (composite Simpson).
double bracket1(const PeriodicCoefficient& m, const FieldJet& a, const FieldJet& b);
double bracket2(const FieldJet& a, const FieldJet& b);
inline double bracket1(const PeriodicCoefficient& m, const GradientField& a, const GradientField& b) {
  return bracket1(m, a.jet, b.jet);
}
inline double bracket2(const GradientField& a, const GradientField& b) { return bracket2(a.jet, b.jet); }

enum class Theorem { kFirst, kSecond };

/// Up to `max_points` auxiliary points (ascending mu) that admit a second Floquet solution
/// and are not flagged degenerate.
std::vector<const AuxiliaryPoint*> conjugacy_points(const std::vector<AuxiliaryPoint>& points,
                                                    int max_points);

/// Brackets over {mu_1..mu_k, c_1..c_k}, c = f under {,}_1 or c = g under {,}_2, against
/// [[0, I], [-I, 0]]. Residuals are the entrywise deviations.
VerificationReport conjugacy_matrix(const PeriodicCoefficient& m,
                                    const std::vector<AuxiliaryPoint>& points, Theorem which,
                                    int max_points = 3, double tolerance = 1e-5);

/// {mu_i, log|rho_j|}_1 + mu_i^2 delta_ij, scaled by max(1, mu_i^2).
VerificationReport mu_log_rho_relation(const PeriodicCoefficient& m,
                                       const std::vector<AuxiliaryPoint>& points,
                                       int max_points = 3, double tolerance = 1e-5);

}  // namespace chspec
