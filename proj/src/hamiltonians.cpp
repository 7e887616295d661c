#include "chspec/hamiltonians.hpp"

#include <algorithm>
#include <complex>

#include "chspec/errors.hpp"
#include "chspec/quadrature.hpp"
#include "chspec/spectral.hpp"

namespace chspec {
namespace {

void require_smooth(const PeriodicCoefficient& m) {
  if (m.has_atoms()) throw ValidationError("Hamiltonian fields need a smooth momentum");
}

struct Velocity {
  Eigen::VectorXd v, d1, d2, d3;
};

Velocity velocity_jet(const PeriodicCoefficient& m, int n) {
  require_smooth(m);
  Velocity out;
  out.v = velocity_from_momentum(m, n).values();
  out.d1 = spectral::derivative(out.v, 1);
  out.d2 = spectral::derivative(out.v, 2);
  out.d3 = spectral::derivative(out.v, 3);
  return out;
}

}  // namespace

HamiltonianValue hamiltonians(const PeriodicCoefficient& m, int n) {
  const Velocity u = velocity_jet(m, n);
  const Eigen::ArrayXd v = u.v.array();
  const Eigen::ArrayXd dv = u.d1.array();
  HamiltonianValue h;
  h.h2 = 0.5 * quadrature::simpson_periodic((v * v + dv * dv).matrix());
  h.h3 = quadrature::simpson_periodic((v * v * v + v * dv * dv).matrix());
  return h;
}

double h2_momentum_form(const PeriodicCoefficient& m, int n) {
  require_smooth(m);
  const Eigen::VectorXd v = velocity_from_momentum(m, n).values();
  return 0.5 * quadrature::simpson_periodic(v.cwiseProduct(momentum_grid(m, n).values()));
}

GridFunction grad_h2(const PeriodicCoefficient& m, int n) {
  require_smooth(m);
  return velocity_from_momentum(m, n);
}

GridFunction grad_h3(const PeriodicCoefficient& m, int n) {
  const Velocity u = velocity_jet(m, n);
  const Eigen::ArrayXd v = u.v.array();
  const Eigen::VectorXd density =
      (3.0 * v * v - u.d1.array().square() - 2.0 * v * u.d2.array()).matrix();
  return GridFunction(spectral::helmholtz_inverse(density));
}

BihamiltonianFields bihamiltonian_fields(const PeriodicCoefficient& m, int n) {
  const Velocity u = velocity_jet(m, n);
  const Eigen::VectorXd gh3 = grad_h3(m, n).values();
  BihamiltonianFields f;
  f.x = Eigen::VectorXd::LinSpaced(n, 0.0, double(n - 1) / n);
  f.j_grad_h2.resize(n);
  for (int k = 0; k < n; ++k) {
    const double x = double(k) / n;
    f.j_grad_h2[k] = 2.0 * m.smooth_value(x) * u.d1[k] + m.smooth_derivative(x) * u.v[k];
  }
  // K = (D - D^3) / 2 has symbol i (omega + omega^3) / 2
  f.k_grad_h3 = spectral::apply_symbol(gh3, [](double w) {
    return std::complex<double>(0.0, 0.5 * (w + w * w * w));
  });
  f.residual = f.j_grad_h2 - f.k_grad_h3;
  const Eigen::ArrayXd v = u.v.array();
  f.ch_rhs = (3.0 * v * u.d1.array() - 2.0 * u.d1.array() * u.d2.array() - v * u.d3.array()).matrix();
  return f;
}

VerificationReport bihamiltonian_residual(const PeriodicCoefficient& m, int n, double tolerance) {
  const BihamiltonianFields f = bihamiltonian_fields(m, n);
  // A vanishing field (e.g. constant m) is compared against the size of m v instead.
  const double floor = 1e-8 * momentum_grid(m, n).values().cwiseAbs().maxCoeff() *
                       velocity_from_momentum(m, n).values().cwiseAbs().maxCoeff();
  const double scale = std::max({f.j_grad_h2.cwiseAbs().maxCoeff(), floor, 1e-300});
  VerificationReport report;
  report.identity = "bihamiltonian";
  report.n = n;
  report.tolerance = tolerance;
  report.residuals.resize(1, 2);
  report.residuals(0, 0) = f.residual.cwiseAbs().maxCoeff() / scale;
  report.residuals(0, 1) = (f.j_grad_h2 - f.ch_rhs).cwiseAbs().maxCoeff() / scale;
  report.metadata["field_scale"] = format_double(scale);
  report.metadata["columns"] = "j_gradh2_vs_k_gradh3,j_v_vs_ch_rhs";
  report.finalize();
  return report;
}

}  // namespace chspec
