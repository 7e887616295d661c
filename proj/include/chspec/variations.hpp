#pragma once

#include <vector>

#include <Eigen/Core>

#include "chspec/coefficient.hpp"
#include "chspec/floquet.hpp"
#include "chspec/product_field.hpp"
#include "chspec/report.hpp"

namespace chspec {

enum class GradientTarget { kMu, kLogRho, kF, kG };
enum class Conjugate { kF, kG };

const char* to_string(GradientTarget t);

/// Functional derivative d(target)/dm on the closed n-grid of an auxiliary point, with the
/// derivative jet needed to apply J and K.
struct GradientField {
  GradientTarget target = GradientTarget::kMu;
  int aux_index = 0;
  double lambda = 0.0;
  FieldJet jet;
};

/// f = -log|rho| / mu^2, g = -log|rho| / mu^3.
struct ConjugateVariables {
  double mu = 0.0;
  double f = 0.0;
  double g = 0.0;
};
ConjugateVariables conjugate_variables(const AuxiliaryPoint& aux);

/// int_0^1 m y2^2 dx with atom contributions p y2(q)^2.
double weighted_norm(const PeriodicCoefficient& m, const AuxiliaryPoint& aux);
/// A = (int m y2^2)^{-1}
double norming_constant_A(const PeriodicCoefficient& m, const AuxiliaryPoint& aux);
/// B = int m y2 y
double cross_constant_B(const PeriodicCoefficient& m, const AuxiliaryPoint& aux);

/// Both sides of mu int m y2^2 = int (y2 / 2)^2 + (y2')^2.
struct PositivityIdentity {
  double lhs = 0.0;
  double rhs = 0.0;
  double relative_residual() const;
};
PositivityIdentity positivity_identity(const PeriodicCoefficient& m, const AuxiliaryPoint& aux);

GradientField grad_mu(const PeriodicCoefficient& m, const AuxiliaryPoint& aux);
GradientField grad_log_rho(const PeriodicCoefficient& m, const AuxiliaryPoint& aux);
/// Full chain rule, including the term proportional to d(mu)/dm.
GradientField grad_conjugate(const PeriodicCoefficient& m, const AuxiliaryPoint& aux, Conjugate which);

/// Analytic gradients next to central-difference functional derivatives
/// (F[m + eps hat_k] - F[m - eps hat_k]) / (2 eps) at sites x_k = k / n. The analytic side
/// is the exact hat average int (dF/dm) hat_k, so kinks at atoms do not spoil the comparison.
struct GradientComparison {
  int n = 0;
  double eps = 0.0;
  Eigen::VectorXd x;
  Eigen::VectorXd analytic_mu, fd_mu;
  Eigen::VectorXd analytic_log_rho, fd_log_rho;  // empty when no second Floquet solution
};

struct FiniteDifferenceOptions {
  double eps = 1e-5;
  int n = 256;
  double branch_radius = 0.0;  // root tracking limit; 0 selects 0.1 max(1, |mu|)
};

GradientComparison compare_gradients(const PeriodicCoefficient& m, const AuxiliaryPoint& aux,
                                     const FiniteDifferenceOptions& fd,
                                     const SpectralOptions& options = {});

/// Residuals: [max |analytic - FD| / max |analytic|] for mu and (when defined) log|rho|.
VerificationReport verify_gradients(const PeriodicCoefficient& m, const AuxiliaryPoint& aux,
                                    const FiniteDifferenceOptions& fd,
                                    const SpectralOptions& options = {}, double tolerance = 5e-4);

}  // namespace chspec
