#include "chspec/variations.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chspec/errors.hpp"
#include "chspec/quadrature.hpp"

namespace chspec {
namespace {

// Node index of x = 1 on a trajectory.
Eigen::Index period_end(const SolutionTrajectory& t) { return t.grid_index[std::size_t(t.n)]; }

// int_0^1 m_s(x) a(x) b(x) dx + sum over atoms of p a(q) b(q).
double weighted_product(const PeriodicCoefficient& m, const SolutionTrajectory& a,
                        const SolutionTrajectory& b) {
  const Eigen::Index end = period_end(a);
  Eigen::VectorXd f(a.node_count());
  for (Eigen::Index i = 0; i <= end; ++i) f[i] = m.smooth_value(a.x[i]) * a.psi[i] * b.psi[i];
  double total = quadrature::piecewise_simpson(a.x, f, f, a.atom_index, end);
  for (Eigen::Index i : a.atom_index) {
    if (i > end) break;
    // an atom at q = 0 appears as its image at x = 1
    for (const Atom& atom : m.atoms()) {
      const double x = a.x[i] - std::floor(a.x[i] + 1e-12);
      if (std::abs(x - atom.q) <= 1e-12) total += atom.p * a.psi[i] * b.psi[i];
    }
  }
  return total;
}

const SolutionTrajectory& second_solution(const AuxiliaryPoint& aux) {
  if (!aux.y) throw NumericalError("gradient undefined: " + aux.note);
  return *aux.y;
}

// Value of y at x in [0, 1) by local propagation from the nearest stored node at or below x.
double local_value(const PeriodicCoefficient& m, const SolutionTrajectory& t, double x,
                   const ShootingOptions& options) {
  const Eigen::Index end = period_end(t);
  const auto* first = t.x.data();
  Eigen::Index i = Eigen::Index(std::upper_bound(first, first + end + 1, x) - first) - 1;
  i = std::clamp<Eigen::Index>(i, 0, end);
  if (t.x[i] == x) return t.psi[i];
  return propagate(m, t.lambda, ShootingState{t.x[i], t.psi[i], t.dpsi_plus[i]}, x, options).psi;
}

// int g(x) phi_k(x) dx for the unit-integral hat phi_k of half width 1/n centred at k / n,
// where g = alpha y2^2 + beta y2 y is an analytic gradient field on the circle.
double hat_average(const PeriodicCoefficient& m, const AuxiliaryPoint& aux, double alpha, double beta,
                   int k, int n, const ShootingOptions& options) {
  static constexpr double kNode[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                      0.5384693101056831, 0.9061798459386640};
  static constexpr double kWeight[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                        0.4786286704993665, 0.2369268850561891};
  const double h = 1.0 / n;
  const double c = double(k) / n;
  std::vector<double> cuts{c - h, c, c + h, 0.0, 1.0};
  for (const Atom& a : m.atoms())
    for (double shift : {-1.0, 0.0, 1.0}) cuts.push_back(a.q + shift);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double lo = std::max(cuts[s], c - h);
    const double hi = std::min(cuts[s + 1], c + h);
    if (!(hi > lo)) continue;
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    for (int g = 0; g < 5; ++g) {
      const double x = mid + half * kNode[g];
      const double xw = x - std::floor(x);
      const double y2 = local_value(m, aux.y2, xw, options);
      double value = alpha * y2 * y2;
      if (beta != 0.0) value += beta * y2 * local_value(m, *aux.y, xw, options);
      total += half * kWeight[g] * value * (1.0 - std::abs(x - c) / h) / h;
    }
  }
  return total;
}

double tracked_root(const Propagator& period_map, double mu, double radius) {
  auto y2_end = [&](double l) { return period_map.apply(l, Eigen::Vector2d(0.0, 1.0))[0]; };
  double step = 1e-6 * std::max(1.0, std::abs(mu));
  const double f0 = y2_end(mu);
  if (f0 == 0.0) return mu;
  while (step <= radius) {
    const double fl = y2_end(mu - step);
    if ((fl > 0.0) != (f0 > 0.0) || fl == 0.0) return polish_auxiliary_root(period_map, mu - step, mu);
    const double fr = y2_end(mu + step);
    if ((fr > 0.0) != (f0 > 0.0) || fr == 0.0) return polish_auxiliary_root(period_map, mu, mu + step);
    step *= 2.0;
  }
  std::ostringstream msg;
  msg << "lost auxiliary root branch near mu = " << mu;
  throw NumericalError(msg.str());
}

}  // namespace

const char* to_string(GradientTarget t) {
  switch (t) {
    case GradientTarget::kMu: return "mu";
    case GradientTarget::kLogRho: return "log_rho";
    case GradientTarget::kF: return "f";
    case GradientTarget::kG: return "g";
  }
  return "?";
}

ConjugateVariables conjugate_variables(const AuxiliaryPoint& aux) {
  const double log_rho = std::log(std::abs(aux.rho));
  return ConjugateVariables{aux.mu, -log_rho / (aux.mu * aux.mu), -log_rho / (aux.mu * aux.mu * aux.mu)};
}

double weighted_norm(const PeriodicCoefficient& m, const AuxiliaryPoint& aux) {
  return weighted_product(m, aux.y2, aux.y2);
}

double norming_constant_A(const PeriodicCoefficient& m, const AuxiliaryPoint& aux) {
  const double norm = weighted_norm(m, aux);
  if (!(std::abs(norm) > 1e-12)) throw NumericalError("int m y2^2 vanishes at an auxiliary eigenvalue");
  return 1.0 / norm;
}

double cross_constant_B(const PeriodicCoefficient& m, const AuxiliaryPoint& aux) {
  return weighted_product(m, aux.y2, second_solution(aux));
}

double PositivityIdentity::relative_residual() const {
  return std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
}

PositivityIdentity positivity_identity(const PeriodicCoefficient& m, const AuxiliaryPoint& aux) {
  const SolutionTrajectory& y2 = aux.y2;
  const Eigen::VectorXd quarter = 0.25 * y2.psi.cwiseAbs2();
  const Eigen::VectorXd minus = quarter + y2.dpsi_minus.cwiseAbs2();
  const Eigen::VectorXd plus = quarter + y2.dpsi_plus.cwiseAbs2();
  PositivityIdentity id;
  id.lhs = aux.mu * weighted_norm(m, aux);
  id.rhs = quadrature::piecewise_simpson(y2.x, minus, plus, y2.atom_index, period_end(y2));
  return id;
}

GradientField grad_mu(const PeriodicCoefficient& m, const AuxiliaryPoint& aux) {
  const double a = norming_constant_A(m, aux);
  return GradientField{GradientTarget::kMu, aux.index, aux.mu,
                       (-a * aux.mu) * product_field(m, aux.y2, aux.y2)};
}

GradientField grad_log_rho(const PeriodicCoefficient& m, const AuxiliaryPoint& aux) {
  const SolutionTrajectory& y = second_solution(aux);
  const double a = norming_constant_A(m, aux);
  const double b = cross_constant_B(m, aux);
  const FieldJet jet = (a * b * aux.mu) * product_field(m, aux.y2, aux.y2) -
                       aux.mu * product_field(m, aux.y2, y);
  return GradientField{GradientTarget::kLogRho, aux.index, aux.mu, jet};
}

GradientField grad_conjugate(const PeriodicCoefficient& m, const AuxiliaryPoint& aux, Conjugate which) {
  const double mu = aux.mu;
  const double log_rho = std::log(std::abs(aux.rho));
  const int power = which == Conjugate::kF ? 2 : 3;
  const double mu_p = std::pow(mu, power);
  const FieldJet jet = (-1.0 / mu_p) * grad_log_rho(m, aux).jet +
                       (power * log_rho / (mu_p * mu)) * grad_mu(m, aux).jet;
  return GradientField{which == Conjugate::kF ? GradientTarget::kF : GradientTarget::kG, aux.index, mu, jet};
}

GradientComparison compare_gradients(const PeriodicCoefficient& m, const AuxiliaryPoint& aux,
                                     const FiniteDifferenceOptions& fd,
                                     const SpectralOptions& options) {
  require_grid_size(fd.n, "finite-difference grid");
  if (!(fd.eps > 0.0)) throw ValidationError("finite-difference eps must be positive");
  const int n = fd.n;
  const double radius = fd.branch_radius > 0.0 ? fd.branch_radius : 0.1 * std::max(1.0, std::abs(aux.mu));
  const bool with_rho = aux.y.has_value();

  GradientComparison out;
  out.n = n;
  out.eps = fd.eps;
  out.x = Eigen::VectorXd::LinSpaced(n, 0.0, double(n - 1) / n);
  const double a = norming_constant_A(m, aux);
  const double b = with_rho ? cross_constant_B(m, aux) : 0.0;
  out.analytic_mu.resize(n);
  out.fd_mu.resize(n);
  if (with_rho) {
    out.analytic_log_rho.resize(n);
    out.fd_log_rho.resize(n);
  }
  for (int k = 0; k < n; ++k) {
    out.analytic_mu[k] = hat_average(m, aux, -a * aux.mu, 0.0, k, n, options.shooting);
    if (with_rho) out.analytic_log_rho[k] = hat_average(m, aux, a * b * aux.mu, -aux.mu, k, n, options.shooting);
    double mu_pm[2];
    double log_rho_pm[2];
    for (int s = 0; s < 2; ++s) {
      const PeriodicCoefficient shifted = perturb(m, k, n, s == 0 ? fd.eps : -fd.eps);
      const Propagator period_map(shifted, 0.0, 1.0, options.shooting);
      mu_pm[s] = tracked_root(period_map, aux.mu, radius);
      if (with_rho) log_rho_pm[s] = std::log(std::abs(period_map.apply(mu_pm[s], Eigen::Vector2d(0.0, 1.0))[1]));
    }
    out.fd_mu[k] = (mu_pm[0] - mu_pm[1]) / (2.0 * fd.eps);
    if (with_rho) out.fd_log_rho[k] = (log_rho_pm[0] - log_rho_pm[1]) / (2.0 * fd.eps);
  }
  return out;
}

VerificationReport verify_gradients(const PeriodicCoefficient& m, const AuxiliaryPoint& aux,
                                    const FiniteDifferenceOptions& fd,
                                    const SpectralOptions& options, double tolerance) {
  const GradientComparison cmp = compare_gradients(m, aux, fd, options);
  auto rel = [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (a - b).cwiseAbs().maxCoeff() / std::max(a.cwiseAbs().maxCoeff(), 1e-300);
  };
  VerificationReport report;
  report.identity = "gradient_fd_oracle";
  report.n = fd.n;
  report.tolerance = tolerance;
  const bool with_rho = cmp.fd_log_rho.size() > 0;
  report.residuals.resize(1, with_rho ? 2 : 1);
  report.residuals(0, 0) = rel(cmp.analytic_mu, cmp.fd_mu);
  if (with_rho) report.residuals(0, 1) = rel(cmp.analytic_log_rho, cmp.fd_log_rho);
  report.metadata["aux_index"] = std::to_string(aux.index);
  report.metadata["mu"] = format_double(aux.mu);
  report.metadata["eps"] = format_double(fd.eps);
  report.metadata["columns"] = with_rho ? "mu,log_rho" : "mu";
  if (!with_rho) report.metadata["log_rho"] = "skipped: " + aux.note;
  report.finalize();
  return report;
}

}  // namespace chspec
