#include "chspec/quadrature.hpp"

#include "chspec/errors.hpp"

namespace chspec::quadrature {

double simpson(const Eigen::VectorXd& f, double h) {
  const Eigen::Index cells = f.size() - 1;
  if (cells < 2 || cells % 2 != 0) throw ValidationError("Simpson needs an even number of cells");
  double odd = 0.0;
  double even = 0.0;
  for (Eigen::Index k = 1; k < cells; ++k) (k % 2 ? odd : even) += f[k];
  return h / 3.0 * (f[0] + f[cells] + 4.0 * odd + 2.0 * even);
}

double simpson_periodic(const Eigen::VectorXd& f) {
  const Eigen::Index n = f.size();
  if (n < 2 || n % 2 != 0) throw ValidationError("periodic Simpson needs an even sample count");
  double odd = 0.0;
  double even = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) (k % 2 ? odd : even) += f[k];
  return (4.0 * odd + 2.0 * even) / (3.0 * double(n));
}

double simpson_nonuniform(const Eigen::VectorXd& x, const Eigen::VectorXd& f, Eigen::Index begin,
                          Eigen::Index end) {
  const Eigen::Index cells = end - begin;
  if (cells <= 0) return 0.0;
  if (cells == 1) return 0.5 * (x[end] - x[begin]) * (f[begin] + f[end]);
  double sum = 0.0;
  Eigen::Index i = begin;
  for (; i + 2 <= end; i += 2) {
    const double h0 = x[i + 1] - x[i];
    const double h1 = x[i + 2] - x[i + 1];
    const double hs = h0 + h1;
    sum += hs / 6.0 *
           ((2.0 - h1 / h0) * f[i] + hs * hs / (h0 * h1) * f[i + 1] + (2.0 - h0 / h1) * f[i + 2]);
  }
  if (i < end) {
    // last cell [x_{end-1}, x_end] from the parabola through the last three nodes
    const double h0 = x[end - 1] - x[end - 2];
    const double h1 = x[end] - x[end - 1];
    const double hs = h0 + h1;
    sum += f[end] * (2.0 * h1 * h1 + 3.0 * h0 * h1) / (6.0 * hs) +
           f[end - 1] * (h1 * h1 + 3.0 * h0 * h1) / (6.0 * h0) -
           f[end - 2] * h1 * h1 * h1 / (6.0 * h0 * hs);
  }
  return sum;
}

double piecewise_simpson(const Eigen::VectorXd& x, const Eigen::VectorXd& f_minus,
                         const Eigen::VectorXd& f_plus, std::span<const Eigen::Index> breaks,
                         Eigen::Index end) {
  Eigen::VectorXd f = f_plus;
  double total = 0.0;
  Eigen::Index start = 0;
  auto close_stretch = [&](Eigen::Index stop) {
    if (stop <= start) return;
    f[start] = f_plus[start];
    f[stop] = f_minus[stop];
    total += simpson_nonuniform(x, f, start, stop);
  };
  for (Eigen::Index b : breaks) {
    if (b <= start || b >= end) continue;
    close_stretch(b);
    start = b;
  }
  close_stretch(end);
  return total;
}

}  // namespace chspec::quadrature
