#include <doctest.h>

#include <cmath>
#include <numbers>

#include "chspec/brackets.hpp"
#include "chspec/errors.hpp"
#include "chspec/floquet.hpp"
#include "chspec/product_field.hpp"
#include "chspec/variations.hpp"

using namespace chspec;

namespace {

const PeriodicCoefficient kMixed(SmoothPart::fourier(1.0, {0.25, 0.0}, {0.0, 0.1}));

const std::vector<AuxiliaryPoint>& mixed_points() {
  static const AuxiliarySpectrum aux = [] {
    SpectralOptions o;
    o.grid = 1024;
    return auxiliary_spectrum(kMixed, Window{-1.0, 45.0}, 0, o);
  }();
  REQUIRE(aux.points.size() == 2);
  return aux.points;
}

double field_scale(const FieldJet& a, const FieldJet& b) {
  return a.value.cwiseAbs().maxCoeff() * std::max(b.d1.cwiseAbs().maxCoeff(), b.d3.cwiseAbs().maxCoeff());
}

}  // namespace

TEST_CASE("operators need the right inputs") {
  const PeriodicCoefficient peak(SmoothPart::constant(0.0), {Atom{0.3, 1.0}});
  const auto [y1, y2] = solve_fundamental(peak, 2.0, 64);
  const FieldJet p = product_field(peak, y1, y2);
  CHECK_THROWS_AS(apply_J(peak, p), ValidationError);
  FieldJet bare;
  bare.value = Eigen::VectorXd::Ones(9);
  CHECK_THROWS_AS(apply_K(bare), ValidationError);
}

TEST_CASE("product closure is second order under central differences") {
  auto residual = [](int n) {
    const auto [y1, y2] = solve_fundamental(kMixed, 20.0, n);
    return closure_residual(product_field(kMixed, y1, y2));
  };
  CHECK(residual(64) / residual(128) == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("J and K of a constant field") {
  const auto [y1, y2] = solve_fundamental(PeriodicCoefficient(SmoothPart::constant(2.0)), 1.0, 32);
  FieldJet one;
  one.value = Eigen::VectorXd::Ones(33);
  one.d1 = one.d2 = one.d3 = Eigen::VectorXd::Zero(33);
  const PeriodicCoefficient m(SmoothPart::fourier(0.0, {1.0}, {}));
  const Eigen::VectorXd j = apply_J(m, one);
  CHECK(j[8] == doctest::Approx(m.smooth_derivative(0.25)));
  CHECK(apply_K(one).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("lambda J(ab) = K(ab) on solution products") {
  for (const AuxiliaryPoint& p : mixed_points()) {
    CHECK(lemma_residual(kMixed, p.mu, p.y1, p.y2).relative() < 1e-12);
    CHECK(lemma_residual(kMixed, p.mu, *p.y, p.y2).relative() < 1e-12);
    CHECK(lemma_weak_residual(kMixed, p.mu, p.y1, *p.y).relative() < 1e-9);
  }
  // Against a different coefficient the identity fails.
  const AuxiliaryPoint& p = mixed_points().front();
  const PeriodicCoefficient other(SmoothPart::fourier(1.0, {0.2}, {}));
  CHECK(lemma_weak_residual(other, p.mu, p.y1, p.y2).relative() > 1e-3);
  CHECK_THROWS_AS(lemma_residual(kMixed, p.mu, p.y1, mixed_points().back().y2), ValidationError);
}

TEST_CASE("brackets are antisymmetric") {
  const auto& pts = mixed_points();
  const FieldJet a = grad_mu(kMixed, pts[0]).jet;
  const FieldJet b = grad_log_rho(kMixed, pts[1]).jet;
  const FieldJet c = grad_conjugate(kMixed, pts[0], Conjugate::kF).jet;
  const double s = field_scale(a, b) + field_scale(b, a);
  CHECK(std::abs(bracket1(kMixed, a, b) + bracket1(kMixed, b, a)) <= 1e-9 * s);
  CHECK(std::abs(bracket2(a, b) + bracket2(b, a)) <= 1e-9 * s);
  CHECK(std::abs(bracket1(kMixed, c, c)) <= 1e-9 * field_scale(c, c));
  CHECK(std::abs(bracket2(c, c)) <= 1e-9 * field_scale(c, c));
}

TEST_CASE("second bracket of mu gradients scales with mu") {
  const auto& pts = mixed_points();
  const GradientField g0 = grad_mu(kMixed, pts[0]);
  const GradientField g1 = grad_mu(kMixed, pts[1]);
  const FieldJet probe = grad_log_rho(kMixed, pts[0]).jet;
  // K grad mu_j = mu_j J grad mu_j, so {A, mu_j}_2 = mu_j {A, mu_j}_1.
  CHECK(bracket2(probe, g1.jet) == doctest::Approx(pts[1].mu * bracket1(kMixed, probe, g1.jet)).epsilon(1e-6));
  CHECK(bracket2(probe, g0.jet) == doctest::Approx(pts[0].mu * bracket1(kMixed, probe, g0.jet)).epsilon(1e-6));
}

TEST_CASE("mu and log rho relation") {
  const auto& pts = mixed_points();
  const VerificationReport r = mu_log_rho_relation(kMixed, pts);
  CHECK(r.pass);
  CHECK(r.residuals.rows() == 2);
  // {mu_i, f_i}_1 directly and through the relation.
  for (const AuxiliaryPoint& p : pts) {
    const FieldJet gm = grad_mu(kMixed, p).jet;
    const double direct = bracket1(kMixed, gm, grad_conjugate(kMixed, p, Conjugate::kF).jet);
    const double via = bracket1(kMixed, gm, grad_log_rho(kMixed, p).jet) / (-p.mu * p.mu);
    CHECK(std::abs(direct - via) <= 1e-8);
  }
}

TEST_CASE("conjugacy matrices at the test grid") {
  const auto& pts = mixed_points();
  const VerificationReport t1 = conjugacy_matrix(kMixed, pts, Theorem::kFirst);
  const VerificationReport t2 = conjugacy_matrix(kMixed, pts, Theorem::kSecond);
  CHECK(t1.residuals.rows() == 4);
  CHECK(t1.max_residual() < 1e-5);
  CHECK(t2.max_residual() < 1e-3);
  CHECK(t1.metadata.count("max_mu_f") == 1);
  CHECK(t2.metadata.count("max_g_g") == 1);
}

TEST_CASE("conjugacy needs non-degenerate points") {
  const PeriodicCoefficient one(SmoothPart::constant(1.0));
  const AuxiliarySpectrum aux = auxiliary_spectrum(one, Window{-1.0, 15.0}, 0);
  CHECK(conjugacy_points(aux.points, 3).empty());
  CHECK_THROWS_AS(conjugacy_matrix(one, aux.points, Theorem::kFirst), NumericalError);
}
