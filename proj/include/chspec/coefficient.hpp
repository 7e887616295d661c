#pragma once

#include <span>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace chspec {

/// A delta atom p * delta(x - q) of the momentum, q in [0, 1).
struct Atom {
  double q = 0.0;
  double p = 0.0;
};

/// Triangular bump centred at `center` with support of half width
/// `half_width` (taken modulo 1) and peak value `height`.
struct Hat {
  double center = 0.0;
  double half_width = 0.0;
  double height = 0.0;
};

/// Smooth 1-periodic part of the momentum. The base is a constant, a finite
/// Fourier series or a periodic cubic spline through uniform samples; any
/// number of hat bumps may be superposed (used by finite-difference oracles).
class SmoothPart {
 public:
  struct Constant {
    double value = 0.0;
  };
  /// mean + sum_k cos[k-1] cos(2 pi k x) + sin[k-1] sin(2 pi k x)
  struct Fourier {
    double mean = 0.0;
    std::vector<double> cos;
    std::vector<double> sin;
  };
  /// Periodic cubic spline through values[k] at x = k / size.
  struct Spline {
    Eigen::VectorXd values;
    Eigen::VectorXd second;  // spline second derivatives at the knots
  };

  static SmoothPart constant(double value);
  static SmoothPart fourier(double mean, std::vector<double> cos_coeffs,
                            std::vector<double> sin_coeffs);
  static SmoothPart samples(Eigen::VectorXd values);

  double value(double x) const;
  double derivative(double x) const;

  /// True when the smooth part vanishes identically (exact propagation applies).
  bool is_zero() const;
  /// True for constant or trigonometric bases without hats.
  bool is_band_limited() const;

  SmoothPart with_hat(const Hat& hat) const;

  const std::variant<Constant, Fourier, Spline>& base() const { return base_; }
  std::span<const Hat> hats() const { return hats_; }

 private:
  explicit SmoothPart(std::variant<Constant, Fourier, Spline> base) : base_(std::move(base)) {}

  std::variant<Constant, Fourier, Spline> base_;
  std::vector<Hat> hats_;
};

/// The momentum m = m_s + sum_n p_n delta(x - q_n) on the unit circle.
/// Immutable after construction; atoms are sorted and pairwise distinct.
class PeriodicCoefficient {
 public:
  explicit PeriodicCoefficient(SmoothPart smooth, std::vector<Atom> atoms = {});

  const SmoothPart& smooth() const { return smooth_; }
  std::span<const Atom> atoms() const { return atoms_; }
  bool has_atoms() const { return !atoms_.empty(); }

  double smooth_value(double x) const { return smooth_.value(x); }
  double smooth_derivative(double x) const { return smooth_.derivative(x); }

 private:
  SmoothPart smooth_;
  std::vector<Atom> atoms_;
};

/// 1-periodic samples at x_k = k / n, n >= 8 a power of two.
class GridFunction {
 public:
  explicit GridFunction(Eigen::VectorXd values);

  Eigen::Index size() const { return values_.size(); }
  double x(Eigen::Index k) const { return static_cast<double>(k) / static_cast<double>(size()); }
  double operator[](Eigen::Index k) const { return values_[k]; }
  const Eigen::VectorXd& values() const { return values_; }

 private:
  Eigen::VectorXd values_;
};

bool is_power_of_two(long n);
void require_grid_size(long n, const char* what);

PeriodicCoefficient make_coefficient(SmoothPart smooth, std::vector<Atom> atoms = {});

/// Samples of the smooth part at k / n (atoms are not represented).
GridFunction momentum_grid(const PeriodicCoefficient& m, int n);
GridFunction smooth_derivative_grid(const PeriodicCoefficient& m, int n);

/// v = (1 - D^2)^{-1} m: Fourier division for the smooth part plus the periodic
/// Green's function p cosh(|x - q| - 1/2) / (2 sinh 1/2) for each atom.
GridFunction velocity_from_momentum(const PeriodicCoefficient& m, int n);
/// Derivative of the velocity. Atom contributions are differentiated analytically
/// (right limit at the atom itself).
GridFunction velocity_derivative(const PeriodicCoefficient& m, int n);
/// (1 - D^2) v through the Fourier symbol.
GridFunction momentum_from_velocity(const GridFunction& v);

/// Periodic Green's function of 1 - D^2 for a unit atom at q, and its x-derivative.
double helmholtz_green(double x, double q);
double helmholtz_green_derivative(double x, double q);

/// Adds a hat of half width 1/n and integral eps centred at site k / n.
PeriodicCoefficient perturb(const PeriodicCoefficient& m, int k, int n, double eps);

}  // namespace chspec
