#pragma once

#include <complex>
#include <functional>

#include <Eigen/Core>

// Fourier-symbol operators on uniform periodic samples x_k = k / n of the unit circle.

namespace chspec::spectral {

/// Applies the multiplier symbol(omega), omega = 2 pi j the angular wavenumber of mode j.
/// The Nyquist mode keeps only the real part of the symbol.
Eigen::VectorXd apply_symbol(const Eigen::VectorXd& samples,
                             const std::function<std::complex<double>(double)>& symbol);

Eigen::VectorXd derivative(const Eigen::VectorXd& samples, int order = 1);

/// (1 - D^2)^{-1}
Eigen::VectorXd helmholtz_inverse(const Eigen::VectorXd& samples);
/// (1 - D^2)
Eigen::VectorXd helmholtz(const Eigen::VectorXd& samples);

}  // namespace chspec::spectral
