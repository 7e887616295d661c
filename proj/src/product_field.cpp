#include "chspec/product_field.hpp"

#include <algorithm>
#include <cmath>

#include "chspec/errors.hpp"

namespace chspec {
namespace {

Eigen::VectorXd sum_or_empty(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double sb) {
  if (a.size() != b.size()) return {};
  return a + sb * b;
}

}  // namespace

FieldJet operator+(const FieldJet& a, const FieldJet& b) {
  if (a.value.size() != b.value.size()) throw ValidationError("field grids differ");
  return FieldJet{a.value + b.value, sum_or_empty(a.d1, b.d1, 1.0), sum_or_empty(a.d2, b.d2, 1.0),
                  sum_or_empty(a.d3, b.d3, 1.0)};
}

FieldJet operator-(const FieldJet& a, const FieldJet& b) { return a + (-1.0) * b; }

FieldJet operator*(double s, const FieldJet& a) {
  return FieldJet{s * a.value, s * a.d1, s * a.d2, s * a.d3};
}

FieldJet product_field(const PeriodicCoefficient& m, const SolutionTrajectory& a,
                       const SolutionTrajectory& b) {
  if (std::abs(a.lambda - b.lambda) > 1e-12 * std::max(1.0, std::abs(a.lambda)))
    throw ValidationError("product field needs solutions at the same lambda");
  if (a.n != b.n || a.grid_index.size() != b.grid_index.size())
    throw ValidationError("product field needs trajectories on the same grid");
  const int n = a.n;
  const double lambda = a.lambda;
  FieldJet f;
  f.value.resize(n + 1);
  f.d1.resize(n + 1);
  f.d2.resize(n + 1);
  f.d3.resize(n + 1);
  for (int k = 0; k <= n; ++k) {
    const Eigen::Index ia = a.grid_index[std::size_t(k)];
    const Eigen::Index ib = b.grid_index[std::size_t(k)];
    const double x = double(k) / n;
    const double c = 0.25 - lambda * m.smooth_value(x);
    const double dm = m.smooth_derivative(x);
    const double p = a.psi[ia] * b.psi[ib];
    const double dp = a.dpsi_plus[ia] * b.psi[ib] + a.psi[ia] * b.dpsi_plus[ib];
    f.value[k] = p;
    f.d1[k] = dp;
    f.d2[k] = 2.0 * a.dpsi_plus[ia] * b.dpsi_plus[ib] + 2.0 * c * p;
    f.d3[k] = 4.0 * c * dp - 2.0 * lambda * dm * p;
  }
  return f;
}

double closure_residual(const FieldJet& f) {
  if (!f.has_third() || f.d2.size() != f.value.size()) throw ValidationError("closure residual needs a full jet");
  const Eigen::Index n = f.value.size() - 1;
  const double h = 1.0 / double(n);
  double worst = 0.0;
  auto check = [&](const Eigen::VectorXd& g, const Eigen::VectorXd& dg) {
    const double scale = std::max(dg.cwiseAbs().maxCoeff(), 1e-300);
    for (Eigen::Index k = 1; k < n; ++k)
      worst = std::max(worst, std::abs((g[k + 1] - g[k - 1]) / (2.0 * h) - dg[k]) / scale);
  };
  check(f.value, f.d1);
  check(f.d1, f.d2);
  check(f.d2, f.d3);
  return worst;
}

}  // namespace chspec
