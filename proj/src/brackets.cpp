#include "chspec/brackets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "chspec/errors.hpp"
#include "chspec/quadrature.hpp"

namespace chspec {
namespace {

constexpr double kPi = std::numbers::pi;

void require_smooth(const PeriodicCoefficient& m) {
  if (m.has_atoms()) throw ValidationError("J on distributional m not supported for grid fields");
}

void require_same_grid(const FieldJet& a, const FieldJet& b) {
  if (a.value.size() != b.value.size()) throw ValidationError("bracket fields live on different grids");
}

// Test function for the weak form of lambda J(ab) = K(ab) and its derivatives.
struct TestFunction {
  double t, d1, d2, d3;
};
TestFunction test_function(double x) {
  const double a = 2.0 * kPi * x;
  const double b = 4.0 * kPi * x;
  return {1.0 + std::sin(a) + 0.5 * std::cos(b),
          2.0 * kPi * std::cos(a) - 2.0 * kPi * std::sin(b),
          -4.0 * kPi * kPi * std::sin(a) - 8.0 * kPi * kPi * std::cos(b),
          -8.0 * kPi * kPi * kPi * std::cos(a) + 32.0 * kPi * kPi * kPi * std::sin(b)};
}

}  // namespace

Eigen::VectorXd apply_J(const PeriodicCoefficient& m, const FieldJet& f) {
  require_smooth(m);
  if (f.d1.size() != f.value.size()) throw ValidationError("J needs the first derivative of the field");
  const int n = f.n();
  Eigen::VectorXd out(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double x = double(k) / n;
    out[k] = 2.0 * m.smooth_value(x) * f.d1[k] + m.smooth_derivative(x) * f.value[k];
  }
  return out;
}

Eigen::VectorXd apply_K(const FieldJet& f) {
  if (!f.has_third()) throw ValidationError("K needs first and third derivatives of the field");
  return 0.5 * (f.d1 - f.d3);
}

LemmaResidual lemma_residual(const PeriodicCoefficient& m, double lambda,
                             const SolutionTrajectory& a, const SolutionTrajectory& b) {
  if (std::abs(a.lambda - lambda) > 1e-12 * std::max(1.0, std::abs(lambda)))
    throw ValidationError("lemma residual: trajectory lambda mismatch");
  const FieldJet p = product_field(m, a, b);
  const Eigen::VectorXd lhs = lambda * apply_J(m, p);
  const Eigen::VectorXd rhs = apply_K(p);
  return LemmaResidual{(lhs - rhs).cwiseAbs().maxCoeff(),
                       std::max(lhs.cwiseAbs().maxCoeff(), rhs.cwiseAbs().maxCoeff())};
}

LemmaResidual lemma_weak_residual(const PeriodicCoefficient& m, double lambda,
                                  const SolutionTrajectory& a, const SolutionTrajectory& b) {
  require_smooth(m);
  if (std::abs(a.lambda - lambda) > 1e-12 * std::max(1.0, std::abs(lambda)))
    throw ValidationError("lemma residual: trajectory lambda mismatch");
  const FieldJet p = product_field(m, a, b);
  const int n = p.n();
  Eigen::VectorXd jt_p(n + 1);
  Eigen::VectorXd kt_p(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double x = double(k) / n;
    const TestFunction t = test_function(x);
    jt_p[k] = (2.0 * m.smooth_value(x) * t.d1 + m.smooth_derivative(x) * t.t) * p.value[k];
    kt_p[k] = 0.5 * (t.d1 - t.d3) * p.value[k];
  }
  auto boundary = [&](auto&& term) { return term(n, test_function(1.0)) - term(0, test_function(0.0)); };
  const double j_boundary = boundary([&](int k, const TestFunction& t) {
    return 2.0 * m.smooth_value(double(k) / n) * t.t * p.value[k];
  });
  const double k_boundary = boundary([&](int k, const TestFunction& t) {
    return 0.5 * (t.t * p.value[k] - t.t * p.d2[k] + t.d1 * p.d1[k] - t.d2 * p.value[k]);
  });
  const double h = 1.0 / n;
  const double j_volume = quadrature::simpson(jt_p, h);
  const double k_volume = quadrature::simpson(kt_p, h);
  const double lhs = lambda * (j_boundary - j_volume);
  const double rhs = k_boundary - k_volume;
  const double scale = std::abs(lambda) * (std::abs(j_boundary) + quadrature::simpson(jt_p.cwiseAbs(), h)) +
                       std::abs(k_boundary) + quadrature::simpson(kt_p.cwiseAbs(), h);
  return LemmaResidual{std::abs(lhs - rhs), scale};
}

double bracket1(const PeriodicCoefficient& m, const FieldJet& a, const FieldJet& b) {
  require_same_grid(a, b);
  return quadrature::simpson(a.value.cwiseProduct(apply_J(m, b)), 1.0 / a.n());
}

double bracket2(const FieldJet& a, const FieldJet& b) {
  require_same_grid(a, b);
  return quadrature::simpson(a.value.cwiseProduct(apply_K(b)), 1.0 / a.n());
}

std::vector<const AuxiliaryPoint*> conjugacy_points(const std::vector<AuxiliaryPoint>& points,
                                                    int max_points) {
  std::vector<const AuxiliaryPoint*> out;
  for (const AuxiliaryPoint& p : points) {
    if (int(out.size()) >= max_points) break;
    if (!p.degenerate && p.y) out.push_back(&p);
  }
  std::sort(out.begin(), out.end(), [](auto* a, auto* b) { return a->mu < b->mu; });
  return out;
}

VerificationReport conjugacy_matrix(const PeriodicCoefficient& m,
                                    const std::vector<AuxiliaryPoint>& points, Theorem which,
                                    int max_points, double tolerance) {
  require_smooth(m);
  const auto chosen = conjugacy_points(points, max_points);
  if (chosen.empty()) throw NumericalError("no non-degenerate auxiliary points");
  const auto k = Eigen::Index(chosen.size());
  const bool first = which == Theorem::kFirst;

  std::vector<FieldJet> grads;
  for (const AuxiliaryPoint* p : chosen) grads.push_back(grad_mu(m, *p).jet);
  for (const AuxiliaryPoint* p : chosen)
    grads.push_back(grad_conjugate(m, *p, first ? Conjugate::kF : Conjugate::kG).jet);

  Eigen::MatrixXd brackets(2 * k, 2 * k);
  for (Eigen::Index i = 0; i < 2 * k; ++i)
    for (Eigen::Index j = 0; j < 2 * k; ++j)
      brackets(i, j) = first ? bracket1(m, grads[std::size_t(i)], grads[std::size_t(j)])
                             : bracket2(grads[std::size_t(i)], grads[std::size_t(j)]);

  Eigen::MatrixXd canonical = Eigen::MatrixXd::Zero(2 * k, 2 * k);
  canonical.topRightCorner(k, k) = Eigen::MatrixXd::Identity(k, k);
  canonical.bottomLeftCorner(k, k) = -Eigen::MatrixXd::Identity(k, k);

  VerificationReport report;
  report.identity = first ? "theorem1_conjugacy" : "theorem2_conjugacy";
  report.n = chosen.front()->y2.n;
  report.tolerance = tolerance;
  report.residuals = brackets - canonical;
  const char* c = first ? "f" : "g";
  report.metadata["max_mu_mu"] = format_double(report.residuals.topLeftCorner(k, k).cwiseAbs().maxCoeff());
  report.metadata[std::string("max_mu_") + c] = format_double(report.residuals.topRightCorner(k, k).cwiseAbs().maxCoeff());
  report.metadata[std::string("max_") + c + "_mu"] = format_double(report.residuals.bottomLeftCorner(k, k).cwiseAbs().maxCoeff());
  report.metadata[std::string("max_") + c + "_" + c] = format_double(report.residuals.bottomRightCorner(k, k).cwiseAbs().maxCoeff());
  std::string mus;
  for (const AuxiliaryPoint* p : chosen) mus += (mus.empty() ? "" : ",") + format_double(p->mu);
  report.metadata["mu"] = mus;
  report.finalize();
  return report;
}

VerificationReport mu_log_rho_relation(const PeriodicCoefficient& m,
                                       const std::vector<AuxiliaryPoint>& points, int max_points,
                                       double tolerance) {
  require_smooth(m);
  const auto chosen = conjugacy_points(points, max_points);
  if (chosen.empty()) throw NumericalError("no non-degenerate auxiliary points");
  const auto k = Eigen::Index(chosen.size());
  VerificationReport report;
  report.identity = "theorem1_mu_log_rho";
  report.n = chosen.front()->y2.n;
  report.tolerance = tolerance;
  report.residuals.resize(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const AuxiliaryPoint& pi = *chosen[std::size_t(i)];
    const FieldJet gi = grad_mu(m, pi).jet;
    const double scale = std::max(1.0, pi.mu * pi.mu);
    for (Eigen::Index j = 0; j < k; ++j) {
      const AuxiliaryPoint& pj = *chosen[std::size_t(j)];
      const double value = bracket1(m, gi, grad_log_rho(m, pj).jet);
      const double expected = i == j ? -pi.mu * pi.mu : 0.0;
      report.residuals(i, j) = (value - expected) / scale;
    }
  }
  report.finalize();
  return report;
}

}  // namespace chspec
