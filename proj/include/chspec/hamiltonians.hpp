#pragma once

#include <Eigen/Core>

#include "chspec/coefficient.hpp"
#include "chspec/report.hpp"

namespace chspec {

/// H2 = 1/2 int (v^2 + v'^2),  H3 = int (v^3 + v v'^2),  v = (1 - D^2)^{-1} m.
struct HamiltonianValue {
  double h2 = 0.0;
  double h3 = 0.0;
};

HamiltonianValue hamiltonians(const PeriodicCoefficient& m, int n);
/// The second form 1/2 int v m of H2.
double h2_momentum_form(const PeriodicCoefficient& m, int n);

/// dH2/dm = v.
GridFunction grad_h2(const PeriodicCoefficient& m, int n);
/// dH3/dm = (1 - D^2)^{-1} (3 v^2 - v'^2 - 2 v v'').
GridFunction grad_h3(const PeriodicCoefficient& m, int n);

struct BihamiltonianFields {
  Eigen::VectorXd x;
  Eigen::VectorXd j_grad_h2;  // J v with analytic m, m'
  Eigen::VectorXd k_grad_h3;  // K dH3/dm by Fourier differentiation
  Eigen::VectorXd residual;
  Eigen::VectorXd ch_rhs;     // 3 v v' - 2 v' v'' - v v''' from v alone
};
BihamiltonianFields bihamiltonian_fields(const PeriodicCoefficient& m, int n);

/// Residuals: [max |J dH2/dm - K dH3/dm|, max |J v - (3 v v' - 2 v' v'' - v v''')|]
/// divided by max |J dH2/dm|.
VerificationReport bihamiltonian_residual(const PeriodicCoefficient& m, int n, double tolerance = 1e-6);

}  // namespace chspec
