#include <doctest.h>

#include <cmath>
#include <numbers>

#include "chspec/coefficient.hpp"
#include "chspec/errors.hpp"
#include "chspec/quadrature.hpp"
#include "chspec/spectral.hpp"

using namespace chspec;
using std::numbers::pi;

namespace {

PeriodicCoefficient cosine(double a) { return PeriodicCoefficient(SmoothPart::fourier(0.0, {a}, {})); }

}  // namespace

TEST_CASE("coefficient rejects malformed atoms") {
  CHECK_THROWS_AS(PeriodicCoefficient(SmoothPart::constant(1.0), {Atom{1.0, 1.0}}), ValidationError);
  CHECK_THROWS_AS(PeriodicCoefficient(SmoothPart::constant(1.0), {Atom{-0.1, 1.0}}), ValidationError);
  CHECK_THROWS_AS(PeriodicCoefficient(SmoothPart::constant(1.0), {Atom{0.2, NAN}}), ValidationError);
  CHECK_THROWS_AS(PeriodicCoefficient(SmoothPart::constant(1.0), {Atom{0.2, 1.0}, Atom{0.2, 2.0}}),
                  ValidationError);
  CHECK_THROWS_AS(SmoothPart::constant(INFINITY), ValidationError);
  CHECK_THROWS_AS(SmoothPart::fourier(1.0, {NAN}, {}), ValidationError);
}

TEST_CASE("atoms are stored sorted") {
  const PeriodicCoefficient m(SmoothPart::constant(0.0), {Atom{0.7, 1.0}, Atom{0.2, 2.0}});
  REQUIRE(m.atoms().size() == 2);
  CHECK(m.atoms()[0].q == 0.2);
  CHECK(m.atoms()[1].q == 0.7);
}

TEST_CASE("grid sizes must be powers of two") {
  CHECK(is_power_of_two(256));
  CHECK_FALSE(is_power_of_two(100));
  CHECK_THROWS_AS(require_grid_size(100, "n"), ValidationError);
  CHECK_THROWS_AS(require_grid_size(4, "n"), ValidationError);
  CHECK_THROWS_AS(GridFunction(Eigen::VectorXd::Zero(12)), ValidationError);
  CHECK_NOTHROW(GridFunction(Eigen::VectorXd::Zero(16)));
}

TEST_CASE("Fourier smooth part evaluates its series") {
  const SmoothPart s = SmoothPart::fourier(1.0, {0.25, 0.0}, {0.0, 0.1});
  const double x = 0.3;
  CHECK(s.value(x) == doctest::Approx(1.0 + 0.25 * std::cos(2 * pi * x) + 0.1 * std::sin(4 * pi * x)).epsilon(1e-14));
  CHECK(s.derivative(x) ==
        doctest::Approx(-0.5 * pi * std::sin(2 * pi * x) + 0.4 * pi * std::cos(4 * pi * x)).epsilon(1e-13));
  CHECK(s.is_band_limited());
  CHECK_FALSE(s.is_zero());
  CHECK(SmoothPart::constant(0.0).is_zero());
}

TEST_CASE("sampled smooth part interpolates a smooth function") {
  const int n = 64;
  Eigen::VectorXd v(n);
  for (int k = 0; k < n; ++k) v[k] = std::exp(std::sin(2 * pi * k / n));
  const SmoothPart s = SmoothPart::samples(v);
  CHECK(s.value(3.0 / n) == doctest::Approx(v[3]).epsilon(1e-14));
  const double x = 0.123;
  CHECK(std::abs(s.value(x) - std::exp(std::sin(2 * pi * x))) < 1e-5);
  CHECK(std::abs(s.derivative(x) - 2 * pi * std::cos(2 * pi * x) * std::exp(std::sin(2 * pi * x))) < 1e-3);
}

TEST_CASE("velocity of a cosine momentum") {
  const GridFunction v = velocity_from_momentum(cosine(1.0), 64);
  for (Eigen::Index k = 0; k < v.size(); ++k)
    CHECK(v[k] == doctest::Approx(std::cos(2 * pi * v.x(k)) / (1 + 4 * pi * pi)).epsilon(1e-13));
  const GridFunction m = momentum_from_velocity(v);
  CHECK(m[5] == doctest::Approx(std::cos(2 * pi * 5 / 64.0)).epsilon(1e-12));
}

TEST_CASE("Green's function solves (1 - D^2) G = delta") {
  // Continuity, periodicity and a unit drop of G' across the atom.
  const double q = 0.3;
  const double h = 1e-9;
  CHECK(helmholtz_green(q - h, q) == doctest::Approx(helmholtz_green(q + h, q)).epsilon(1e-8));
  CHECK(helmholtz_green_derivative(q - h, q) - helmholtz_green_derivative(q + h, q) ==
        doctest::Approx(1.0).epsilon(1e-8));
  CHECK(helmholtz_green(0.0, q) == doctest::Approx(helmholtz_green(1.0, q)).epsilon(1e-14));
  // Away from q: G'' = G by central differences.
  const double x = 0.8, d = 1e-4;
  const double g2 = (helmholtz_green(x + d, q) - 2 * helmholtz_green(x, q) + helmholtz_green(x - d, q)) / (d * d);
  CHECK(g2 == doctest::Approx(helmholtz_green(x, q)).epsilon(1e-6));
  // Integral of G equals 1 (the zero mode of 1 - D^2).
  Eigen::VectorXd g(1024);
  for (int k = 0; k < 1024; ++k) g[k] = helmholtz_green((k + 0.5) / 1024.0, q);
  CHECK(g.mean() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("peakon velocity uses the Green's function") {
  const PeriodicCoefficient m(SmoothPart::constant(0.0), {Atom{0.25, 2.0}});
  const GridFunction v = velocity_from_momentum(m, 16);
  CHECK(v[0] == doctest::Approx(2.0 * std::cosh(0.25 - 0.5) / (2 * std::sinh(0.5))).epsilon(1e-14));
  CHECK(v[4] == doctest::Approx(2.0 * std::cosh(0.5) / (2 * std::sinh(0.5))).epsilon(1e-14));
}

TEST_CASE("perturbation adds a hat of the requested integral") {
  const PeriodicCoefficient m(SmoothPart::constant(1.0));
  const int n = 32;
  const PeriodicCoefficient p = perturb(m, 0, n, 1e-3);
  // The hat wraps around x = 0; its exact integral is eps.
  const int fine = 4096;
  Eigen::VectorXd f(fine + 1);
  for (int i = 0; i <= fine; ++i) f[i] = p.smooth_value(double(i) / fine) - 1.0;
  CHECK(quadrature::simpson(f, 1.0 / fine) == doctest::Approx(1e-3).epsilon(1e-9));
  CHECK(p.smooth_value(0.0) == doctest::Approx(1.0 + 1e-3 * n));
  CHECK(p.smooth_value(0.5) == 1.0);
  CHECK(perturb(m, 3, n, 0.0).smooth().hats().empty());
}

TEST_CASE("spectral derivative and Helmholtz inverse") {
  const int n = 32;
  Eigen::VectorXd f(n);
  for (int k = 0; k < n; ++k) f[k] = std::sin(6 * pi * k / n);
  const Eigen::VectorXd d = spectral::derivative(f, 1);
  const Eigen::VectorXd d3 = spectral::derivative(f, 3);
  const Eigen::VectorXd hi = spectral::helmholtz_inverse(f);
  for (int k = 0; k < n; ++k) {
    CHECK(d[k] == doctest::Approx(6 * pi * std::cos(6 * pi * k / n)).epsilon(1e-12).scale(6 * pi));
    CHECK(d3[k] == doctest::Approx(-std::pow(6 * pi, 3) * std::cos(6 * pi * k / n)).epsilon(1e-12).scale(std::pow(6 * pi, 3)));
    CHECK(hi[k] == doctest::Approx(f[k] / (1 + 36 * pi * pi)).epsilon(1e-14).scale(1.0));
  }
}

TEST_CASE("quadrature rules") {
  // Simpson is exact for cubics.
  Eigen::VectorXd f(9);
  for (int i = 0; i <= 8; ++i) f[i] = std::pow(i / 8.0, 3);
  CHECK(quadrature::simpson(f, 1.0 / 8) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK_THROWS_AS(quadrature::simpson(Eigen::VectorXd::Ones(4), 1.0), ValidationError);

  Eigen::VectorXd g(16);
  for (int k = 0; k < 16; ++k) g[k] = std::pow(std::cos(2 * pi * k / 16), 2);
  CHECK(quadrature::simpson_periodic(g) == doctest::Approx(0.5).epsilon(1e-14));

  // Nonuniform nodes with an odd cell count: exact for quadratics.
  Eigen::VectorXd x(4), q(4);
  x << 0.0, 0.1, 0.35, 1.0;
  for (int i = 0; i < 4; ++i) q[i] = 3 * x[i] * x[i] - x[i] + 2;
  CHECK(quadrature::simpson_nonuniform(x, q, 0, 3) == doctest::Approx(1.0 - 0.5 + 2.0).epsilon(1e-14));

  // A kink at a break node is integrated exactly piecewise.
  Eigen::VectorXd y(5), lo(5), hi(5);
  y << 0.0, 0.25, 0.5, 0.75, 1.0;
  for (int i = 0; i < 5; ++i) lo[i] = hi[i] = std::abs(y[i] - 0.5);
  const Eigen::Index breaks[] = {2};
  CHECK(quadrature::piecewise_simpson(y, lo, hi, breaks, 4) == doctest::Approx(0.25).epsilon(1e-15));
}
