#include "chspec/spectral.hpp"

#include <numbers>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "chspec/errors.hpp"

namespace chspec::spectral {

Eigen::VectorXd apply_symbol(const Eigen::VectorXd& samples,
                             const std::function<std::complex<double>(double)>& symbol) {
  const Eigen::Index n = samples.size();
  if (n < 2) throw ValidationError("spectral operator needs at least two samples");
  Eigen::FFT<double> fft;
  std::vector<double> time(samples.data(), samples.data() + n);
  std::vector<std::complex<double>> freq;
  fft.fwd(freq, time);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index wave = (2 * j <= n) ? j : j - n;
    const double omega = 2.0 * std::numbers::pi * static_cast<double>(wave);
    std::complex<double> s = symbol(omega);
    if (2 * j == n) s = std::complex<double>(s.real(), 0.0);
    freq[static_cast<std::size_t>(j)] *= s;
  }
  std::vector<std::complex<double>> back;
  fft.inv(back, freq);
  Eigen::VectorXd out(n);
  for (Eigen::Index k = 0; k < n; ++k) out[k] = back[static_cast<std::size_t>(k)].real();
  return out;
}

Eigen::VectorXd derivative(const Eigen::VectorXd& samples, int order) {
  if (order < 0) throw ValidationError("derivative order must be non-negative");
  return apply_symbol(samples, [order](double omega) {
    return std::pow(std::complex<double>(0.0, omega), order);
  });
}

Eigen::VectorXd helmholtz_inverse(const Eigen::VectorXd& samples) {
  return apply_symbol(samples, [](double omega) { return std::complex<double>(1.0 / (1.0 + omega * omega)); });
}

Eigen::VectorXd helmholtz(const Eigen::VectorXd& samples) {
  return apply_symbol(samples, [](double omega) { return std::complex<double>(1.0 + omega * omega); });
}

}  // namespace chspec::spectral
