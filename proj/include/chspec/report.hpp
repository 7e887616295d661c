#pragma once

#include <map>
#include <string>

#include <Eigen/Core>

namespace chspec {

/// Outcome of checking one identity: residuals are already normalised so that
/// pass <=> every |residual| <= tolerance.
struct VerificationReport {
  std::string identity;
  int n = 0;
  Eigen::MatrixXd residuals;
  double tolerance = 0.0;
  bool pass = false;
  std::map<std::string, std::string> metadata;

  /// Recomputes `pass` from residuals and tolerance (empty residuals pass vacuously).
  void finalize();
  double max_residual() const;
};

VerificationReport failed_report(std::string identity, std::string reason, int n = 0);

std::string format_double(double v);

}  // namespace chspec
