#pragma once

#include <Eigen/Core>

#include "chspec/coefficient.hpp"
#include "chspec/shooting.hpp"

namespace chspec {

/// A field on the closed grid x_k = k / n (k = 0 .. n) together with its first three
/// x-derivatives. Derivative grids may be empty when unknown.
struct FieldJet {
  Eigen::VectorXd value;
  Eigen::VectorXd d1;
  Eigen::VectorXd d2;
  Eigen::VectorXd d3;

  int n() const { return static_cast<int>(value.size()) - 1; }
  double x(Eigen::Index k) const { return static_cast<double>(k) / n(); }
  bool has_third() const { return d1.size() == value.size() && d3.size() == value.size(); }
};

FieldJet operator+(const FieldJet& a, const FieldJet& b);
FieldJet operator-(const FieldJet& a, const FieldJet& b);
FieldJet operator*(double s, const FieldJet& a);

/// P = a b for two solutions at the same lambda over the first period. Second and third
/// derivatives follow from the spectral equation:
///   P'' = 2 a' b' + 2 (1/4 - lambda m) P,   P''' = 4 (1/4 - lambda m) P' - 2 lambda m' P.
FieldJet product_field(const PeriodicCoefficient& m, const SolutionTrajectory& a,
                       const SolutionTrajectory& b);

/// Max over interior nodes of |central difference of P - P'| / max|P'| and likewise for
/// P'' against P' and P''' against P''; second order in 1/n.
double closure_residual(const FieldJet& f);

}  // namespace chspec
