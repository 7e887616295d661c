#include "chspec/coefficient.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "chspec/errors.hpp"
#include "chspec/spectral.hpp"

namespace chspec {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Signed distance x - c wrapped into [-1/2, 1/2).
double wrapped_offset(double x, double c) {
  const double d = x - c;
  return d - std::floor(d + 0.5);
}

double wrap_unit(double x) { return x - std::floor(x); }

bool all_finite(std::span<const double> xs) {
  return std::all_of(xs.begin(), xs.end(), [](double v) { return std::isfinite(v); });
}

struct ValueVisitor {
  double x;
  double operator()(const SmoothPart::Constant& c) const { return c.value; }
  double operator()(const SmoothPart::Fourier& f) const {
    double s = f.mean;
    for (std::size_t k = 0; k < f.cos.size(); ++k) s += f.cos[k] * std::cos(kTwoPi * double(k + 1) * x);
    for (std::size_t k = 0; k < f.sin.size(); ++k) s += f.sin[k] * std::sin(kTwoPi * double(k + 1) * x);
    return s;
  }
  double operator()(const SmoothPart::Spline& sp) const {
    const Eigen::Index n = sp.values.size();
    const double h = 1.0 / double(n);
    const double u = wrap_unit(x) * double(n);
    Eigen::Index i = static_cast<Eigen::Index>(std::floor(u));
    if (i >= n) i = n - 1;
    const Eigen::Index j = (i + 1) % n;
    const double t = (u - double(i)) * h;
    const double s = h - t;
    return sp.second[i] * s * s * s / (6.0 * h) + sp.second[j] * t * t * t / (6.0 * h) +
           (sp.values[i] - sp.second[i] * h * h / 6.0) * s / h +
           (sp.values[j] - sp.second[j] * h * h / 6.0) * t / h;
  }
};

struct DerivativeVisitor {
  double x;
  double operator()(const SmoothPart::Constant&) const { return 0.0; }
  double operator()(const SmoothPart::Fourier& f) const {
    double s = 0.0;
    for (std::size_t k = 0; k < f.cos.size(); ++k) {
      const double w = kTwoPi * double(k + 1);
      s -= w * f.cos[k] * std::sin(w * x);
    }
    for (std::size_t k = 0; k < f.sin.size(); ++k) {
      const double w = kTwoPi * double(k + 1);
      s += w * f.sin[k] * std::cos(w * x);
    }
    return s;
  }
  double operator()(const SmoothPart::Spline& sp) const {
    const Eigen::Index n = sp.values.size();
    const double h = 1.0 / double(n);
    const double u = wrap_unit(x) * double(n);
    Eigen::Index i = static_cast<Eigen::Index>(std::floor(u));
    if (i >= n) i = n - 1;
    const Eigen::Index j = (i + 1) % n;
    const double t = (u - double(i)) * h;
    const double s = h - t;
    return -sp.second[i] * s * s / (2.0 * h) + sp.second[j] * t * t / (2.0 * h) +
           ((sp.values[j] - sp.values[i]) - (sp.second[j] - sp.second[i]) * h * h / 6.0) / h;
  }
};

}  // namespace

SmoothPart SmoothPart::constant(double value) {
  if (!std::isfinite(value)) throw ValidationError("constant smooth part must be finite");
  return SmoothPart(Constant{value});
}

SmoothPart SmoothPart::fourier(double mean, std::vector<double> cos_coeffs,
                               std::vector<double> sin_coeffs) {
  if (!std::isfinite(mean) || !all_finite(cos_coeffs) || !all_finite(sin_coeffs))
    throw ValidationError("Fourier coefficients must be finite");
  return SmoothPart(Fourier{mean, std::move(cos_coeffs), std::move(sin_coeffs)});
}

SmoothPart SmoothPart::samples(Eigen::VectorXd values) {
  if (values.size() < 4) throw ValidationError("sampled smooth part needs at least 4 samples");
  if (!values.allFinite()) throw ValidationError("sampled smooth part must be finite");
  const double n = double(values.size());
  // Periodic spline: M_{i-1} + 4 M_i + M_{i+1} = 6 n^2 (y_{i-1} - 2 y_i + y_{i+1}), diagonal in Fourier space.
  Eigen::VectorXd second = spectral::apply_symbol(values, [n](double omega) {
    const double c = std::cos(omega / n);
    return std::complex<double>(6.0 * n * n * (2.0 * c - 2.0) / (4.0 + 2.0 * c));
  });
  return SmoothPart(Spline{std::move(values), std::move(second)});
}

double SmoothPart::value(double x) const {
  double s = std::visit(ValueVisitor{x}, base_);
  for (const Hat& hat : hats_) {
    const double d = std::abs(wrapped_offset(x, hat.center));
    if (d < hat.half_width) s += hat.height * (1.0 - d / hat.half_width);
  }
  return s;
}

double SmoothPart::derivative(double x) const {
  double s = std::visit(DerivativeVisitor{x}, base_);
  for (const Hat& hat : hats_) {
    const double d = wrapped_offset(x, hat.center);
    if (d != 0.0 && std::abs(d) < hat.half_width)
      s += (d > 0.0 ? -1.0 : 1.0) * hat.height / hat.half_width;
  }
  return s;
}

bool SmoothPart::is_zero() const {
  if (!hats_.empty()) return false;
  if (const auto* c = std::get_if<Constant>(&base_)) return c->value == 0.0;
  if (const auto* f = std::get_if<Fourier>(&base_)) {
    auto zero = [](double v) { return v == 0.0; };
    return f->mean == 0.0 && std::all_of(f->cos.begin(), f->cos.end(), zero) &&
           std::all_of(f->sin.begin(), f->sin.end(), zero);
  }
  return std::get<Spline>(base_).values.isZero(0.0);
}

bool SmoothPart::is_band_limited() const {
  return hats_.empty() && !std::holds_alternative<Spline>(base_);
}

SmoothPart SmoothPart::with_hat(const Hat& hat) const {
  if (!(hat.half_width > 0.0) || hat.half_width > 0.5 || !std::isfinite(hat.height))
    throw ValidationError("hat needs half width in (0, 1/2] and finite height");
  SmoothPart out = *this;
  out.hats_.push_back(Hat{wrap_unit(hat.center), hat.half_width, hat.height});
  return out;
}

PeriodicCoefficient::PeriodicCoefficient(SmoothPart smooth, std::vector<Atom> atoms)
    : smooth_(std::move(smooth)), atoms_(std::move(atoms)) {
  for (const Atom& a : atoms_) {
    if (!(a.q >= 0.0 && a.q < 1.0)) throw ValidationError("atom position must lie in [0, 1)");
    if (!std::isfinite(a.p)) throw ValidationError("atom weight must be finite");
  }
  std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) { return a.q < b.q; });
  for (std::size_t i = 1; i < atoms_.size(); ++i) {
    if (atoms_[i].q - atoms_[i - 1].q <= 1e-12)
      throw ValidationError("duplicate atom position q = " + std::to_string(atoms_[i].q));
  }
}

GridFunction::GridFunction(Eigen::VectorXd values) : values_(std::move(values)) {
  require_grid_size(static_cast<long>(values_.size()), "grid function");
  if (!values_.allFinite()) throw ValidationError("grid function has non-finite samples");
}

bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

void require_grid_size(long n, const char* what) {
  if (n < 8 || !is_power_of_two(n))
    throw ValidationError(std::string(what) + ": grid size must be a power of two >= 8, got " +
                          std::to_string(n));
}

PeriodicCoefficient make_coefficient(SmoothPart smooth, std::vector<Atom> atoms) {
  return PeriodicCoefficient(std::move(smooth), std::move(atoms));
}

GridFunction momentum_grid(const PeriodicCoefficient& m, int n) {
  require_grid_size(n, "momentum_grid");
  Eigen::VectorXd v(n);
  for (int k = 0; k < n; ++k) v[k] = m.smooth_value(double(k) / n);
  return GridFunction(std::move(v));
}

GridFunction smooth_derivative_grid(const PeriodicCoefficient& m, int n) {
  require_grid_size(n, "smooth_derivative_grid");
  Eigen::VectorXd v(n);
  for (int k = 0; k < n; ++k) v[k] = m.smooth_derivative(double(k) / n);
  return GridFunction(std::move(v));
}

double helmholtz_green(double x, double q) {
  const double d = wrap_unit(x - q);
  return std::cosh(d - 0.5) / (2.0 * std::sinh(0.5));
}

double helmholtz_green_derivative(double x, double q) {
  const double d = wrap_unit(x - q);
  return std::sinh(d - 0.5) / (2.0 * std::sinh(0.5));
}

GridFunction velocity_from_momentum(const PeriodicCoefficient& m, int n) {
  Eigen::VectorXd v = spectral::helmholtz_inverse(momentum_grid(m, n).values());
  for (const Atom& a : m.atoms())
    for (int k = 0; k < n; ++k) v[k] += a.p * helmholtz_green(double(k) / n, a.q);
  return GridFunction(std::move(v));
}

GridFunction velocity_derivative(const PeriodicCoefficient& m, int n) {
  Eigen::VectorXd dv =
      spectral::derivative(spectral::helmholtz_inverse(momentum_grid(m, n).values()), 1);
  for (const Atom& a : m.atoms())
    for (int k = 0; k < n; ++k) dv[k] += a.p * helmholtz_green_derivative(double(k) / n, a.q);
  return GridFunction(std::move(dv));
}

GridFunction momentum_from_velocity(const GridFunction& v) {
  return GridFunction(spectral::helmholtz(v.values()));
}

PeriodicCoefficient perturb(const PeriodicCoefficient& m, int k, int n, double eps) {
  require_grid_size(n, "perturb");
  if (k < 0 || k >= n) throw ValidationError("perturbation site out of range");
  if (eps == 0.0) return m;
  const double width = 1.0 / double(n);
  SmoothPart smooth = m.smooth().with_hat(Hat{double(k) * width, width, eps / width});
  std::vector<Atom> atoms(m.atoms().begin(), m.atoms().end());
  return PeriodicCoefficient(std::move(smooth), std::move(atoms));
}

}  // namespace chspec
