#pragma once

#include <span>

#include <Eigen/Core>

namespace chspec::quadrature {

/// Composite Simpson on n + 1 equispaced nodes (n even) with spacing h.
double simpson(const Eigen::VectorXd& f, double h);

/// Composite Simpson for n periodic samples f(k / n) over one period (n even).
double simpson_periodic(const Eigen::VectorXd& f);

/// Simpson on arbitrary increasing nodes x[begin..end]; exact for quadratics.
/// Odd cell counts close with a three-point rule on the last cell.
double simpson_nonuniform(const Eigen::VectorXd& x, const Eigen::VectorXd& f, Eigen::Index begin,
                          Eigen::Index end);

/// Integral over nodes [0, end] of a function smooth between breakpoints.
/// f_minus / f_plus hold the left / right limits at each node; `breaks` lists the
/// nodes where they differ (sorted).
double piecewise_simpson(const Eigen::VectorXd& x, const Eigen::VectorXd& f_minus,
                         const Eigen::VectorXd& f_plus, std::span<const Eigen::Index> breaks,
                         Eigen::Index end);

}  // namespace chspec::quadrature
