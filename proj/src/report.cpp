#include "chspec/report.hpp"

#include <cmath>
#include <cstdio>

namespace chspec {

void VerificationReport::finalize() {
  pass = residuals.size() == 0 || (residuals.array().isFinite().all() &&
                                    residuals.cwiseAbs().maxCoeff() <= tolerance);
}

double VerificationReport::max_residual() const {
  return residuals.size() == 0 ? 0.0 : residuals.cwiseAbs().maxCoeff();
}

VerificationReport failed_report(std::string identity, std::string reason, int n) {
  VerificationReport r;
  r.identity = std::move(identity);
  r.n = n;
  r.pass = false;
  r.metadata["error"] = std::move(reason);
  return r;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace chspec
