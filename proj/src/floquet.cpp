#include "chspec/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "chspec/errors.hpp"

namespace chspec {
namespace {

constexpr double kCoincidentMultipliers = 1e-7;

double polish(const auto& f, double lo, double hi) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw NumericalError("root bracket without sign change");
  std::uintmax_t iterations = 200;
  const auto bracket = boost::math::tools::toms748_solve(
      f, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(), iterations);
  const double a = bracket.first;
  const double b = bracket.second;
  return std::abs(f(a)) <= std::abs(f(b)) ? a : b;
}

std::vector<double> scan_nodes(const Window& w, double density) {
  std::vector<double> nodes;
  if (!(w.hi > w.lo)) return nodes;
  const auto count = static_cast<long>(std::ceil((w.hi - w.lo) * density)) + 1;
  nodes.reserve(static_cast<std::size_t>(std::max(2L, count)));
  const long intervals = std::max(1L, count - 1);
  for (long i = 0; i <= intervals; ++i)
    nodes.push_back(w.lo + (w.hi - w.lo) * double(i) / double(intervals));
  return nodes;
}

}  // namespace

double discriminant(const PeriodicCoefficient& m, double lambda, const ShootingOptions& options) {
  return 0.5 * fundamental_matrix(m, lambda, 1.0, options).entries.trace();
}

MultiplierPair multipliers(double delta) {
  if (!std::isfinite(delta)) throw NumericalError("non-finite discriminant");
  if (std::abs(delta) < 1.0) throw NumericalError("inside band: complex multipliers");
  const double big = delta + std::copysign(std::sqrt(delta * delta - 1.0), delta);
  return MultiplierPair{big, 1.0 / big};
}

SpectralScan scan_monodromy(const PeriodicCoefficient& m, const Window& window,
                            const SpectralOptions& options) {
  SpectralScan scan;
  scan.window = window;
  const std::vector<double> nodes = scan_nodes(window, options.nodes_per_unit);
  const auto count = static_cast<Eigen::Index>(nodes.size());
  scan.lambda.resize(count);
  scan.y2_end.resize(count);
  scan.delta.resize(count);
  if (count == 0) return scan;
  const Propagator period_map(m, 0.0, 1.0, options.shooting);
  for (Eigen::Index i = 0; i < count; ++i) {
    const Eigen::Matrix2d u = period_map.transfer(nodes[std::size_t(i)]);
    scan.lambda[i] = nodes[std::size_t(i)];
    scan.y2_end[i] = u(0, 1);
    scan.delta[i] = 0.5 * u.trace();
  }
  return scan;
}

double polish_auxiliary_root(const Propagator& period_map, double lo, double hi) {
  return polish([&](double l) { return period_map.apply(l, Eigen::Vector2d(0.0, 1.0))[0]; }, lo, hi);
}

AuxiliarySpectrum auxiliary_spectrum(const PeriodicCoefficient& m, const Window& window,
                                     int max_count, const SpectralOptions& options) {
  return auxiliary_spectrum(m, scan_monodromy(m, window, options), max_count, options);
}

AuxiliarySpectrum auxiliary_spectrum(const PeriodicCoefficient& m, const SpectralScan& scan,
                                     int max_count, const SpectralOptions& options) {
  AuxiliarySpectrum out;
  const Eigen::Index count = scan.lambda.size();
  if (count < 2) return out;
  const Propagator period_map(m, 0.0, 1.0, options.shooting);
  auto y2_end = [&](double l) { return period_map.apply(l, Eigen::Vector2d(0.0, 1.0))[0]; };
  const double guard = options.zero_guard;

  std::vector<double> roots;
  auto bracket = [&](double a, double fa, double b, double fb) {
    if (fb == 0.0) {
      roots.push_back(b);
    } else if (fa != 0.0 && (fa > 0.0) != (fb > 0.0)) {
      roots.push_back(polish(y2_end, a, b));
    }
  };
  if (scan.y2_end[0] == 0.0 && std::abs(scan.lambda[0]) >= guard) roots.push_back(scan.lambda[0]);
  for (Eigen::Index i = 0; i + 1 < count; ++i) {
    double a = scan.lambda[i];
    double b = scan.lambda[i + 1];
    double fa = scan.y2_end[i];
    double fb = scan.y2_end[i + 1];
    if (b <= -guard || a >= guard) {
      bracket(a, fa, b, fb);
      continue;
    }
    // Bracket touches the excluded band around zero: split it there.
    if (a < -guard) bracket(a, fa, -guard, y2_end(-guard));
    if (b > guard) {
      const double fg = y2_end(guard);
      if (fg == 0.0) roots.push_back(guard);
      bracket(guard, fg, b, fb);
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());

  if (max_count > 0 && roots.size() > std::size_t(max_count)) {
    out.truncated = true;
    std::ostringstream msg;
    msg << "found " << roots.size() << " auxiliary eigenvalues, keeping the first " << max_count;
    out.warnings.push_back(msg.str());
    roots.resize(std::size_t(max_count));
  }
  int index = 1;
  for (double mu : roots) out.points.push_back(make_auxiliary_point(m, mu, index++, options));
  return out;
}

AuxiliaryPoint make_auxiliary_point(const PeriodicCoefficient& m, double mu, int index,
                                    const SpectralOptions& options) {
  if (std::abs(mu) < options.zero_guard) throw ValidationError("auxiliary eigenvalue inside zero guard band");
  AuxiliaryPoint aux;
  aux.index = index;
  aux.mu = mu;
  auto [y1, y2] = Propagator(m, 0.0, double(options.periods), options.shooting, options.grid).trajectories(mu);
  const Eigen::Index end = y1.grid_index[std::size_t(options.grid)];
  aux.monodromy << y1.psi[end], y2.psi[end], y1.dpsi_plus[end], y2.dpsi_plus[end];
  aux.rho = aux.monodromy(1, 1);
  if (aux.rho == 0.0) throw NumericalError("vanishing multiplier at an auxiliary eigenvalue");
  aux.rho_tilde = 1.0 / aux.rho;
  aux.delta = 0.5 * aux.monodromy.trace();
  aux.degenerate = std::abs(std::abs(aux.delta) - 1.0) <= options.degeneracy_tol;
  aux.y1 = std::move(y1);
  aux.y2 = std::move(y2);
  try {
    aux.y = second_floquet(aux);
  } catch (const NumericalError& e) {
    aux.note = e.what();
  }
  return aux;
}

SolutionTrajectory second_floquet(const AuxiliaryPoint& aux) {
  const Eigen::Matrix2d& u = aux.monodromy;
  const double rho_tilde = 1.0 / aux.rho;
  const double scale = std::max(1.0, u.cwiseAbs().maxCoeff());
  if (std::abs(aux.rho - rho_tilde) <= kCoincidentMultipliers) {
    if (std::abs(u(1, 0)) <= kCoincidentMultipliers * scale) return aux.y1;
    throw NumericalError("closed-gap Jordan point: second Floquet solution unavailable");
  }
  const double c = -u(1, 0) / (u(1, 1) - rho_tilde);
  return combine(1.0, aux.y1, c, aux.y2);
}

PeriodicSpectrum periodic_spectrum(const PeriodicCoefficient& m, const Window& window,
                                   const SpectralOptions& options) {
  return periodic_spectrum(m, scan_monodromy(m, window, options), options);
}

PeriodicSpectrum periodic_spectrum(const PeriodicCoefficient& m, const SpectralScan& scan,
                                   const SpectralOptions& options) {
  PeriodicSpectrum out;
  const Eigen::Index count = scan.lambda.size();
  if (count < 2) return out;
  const Propagator period_map(m, 0.0, 1.0, options.shooting);
  auto delta = [&](double l) { return 0.5 * period_map.transfer(l).trace(); };
  const Eigen::VectorXd& d = scan.delta;
  const Eigen::VectorXd& lam = scan.lambda;

  for (int level : {1, -1}) {
    // g > 0 means "inside a gap" for this level
    auto in_gap = [level](double value) { return level * value > 1.0; };
    std::vector<char> consumed(std::size_t(count), 0);

    // Local extrema whose neighbours lie in the band: tangential touches or gaps
    // narrower than the scan spacing.
    for (Eigen::Index i = 1; i + 1 < count; ++i) {
      const double c = level * d[i];
      if (!(c >= level * d[i - 1] && c >= level * d[i + 1])) continue;
      if (in_gap(d[i - 1]) || in_gap(d[i + 1]) || c < 0.9) continue;
      const auto [arg, neg] = boost::math::tools::brent_find_minima(
          [&](double l) { return -level * delta(l); }, lam[i - 1], lam[i + 1], 26);
      const double peak = -neg;
      if (peak <= 1.0 - options.closed_gap_tol) continue;
      consumed[std::size_t(i - 1)] = consumed[std::size_t(i)] = 1;
      if (peak <= 1.0 + options.closed_gap_tol) {
        out.edges.push_back(BandEdge{arg, level, true, false});
      } else {
        auto g = [&](double l) { return level * delta(l) - 1.0; };
        out.edges.push_back(BandEdge{polish(g, lam[i - 1], arg), level, false, true});
        out.edges.push_back(BandEdge{polish(g, arg, lam[i + 1]), level, false, false});
      }
    }
    for (Eigen::Index i = 0; i + 1 < count; ++i) {
      if (consumed[std::size_t(i)] || in_gap(d[i]) == in_gap(d[i + 1])) continue;
      auto g = [&](double l) { return level * delta(l) - 1.0; };
      out.edges.push_back(BandEdge{polish(g, lam[i], lam[i + 1]), level, false, in_gap(d[i + 1])});
    }
  }
  std::sort(out.edges.begin(), out.edges.end(),
            [](const BandEdge& a, const BandEdge& b) { return a.lambda < b.lambda; });

  // Pair edges into gaps.
  std::vector<SpectralGap> gaps;
  bool inside = std::abs(d[0]) > 1.0;
  SpectralGap current;
  current.open_below = true;
  current.lambda_minus = scan.window.lo;
  for (const BandEdge& e : out.edges) {
    if (e.double_root) {
      SpectralGap g;
      g.lambda_minus = g.lambda_plus = e.lambda;
      g.closed = true;
      gaps.push_back(g);
      continue;
    }
    if (e.enters_gap && !inside) {
      current = SpectralGap{};
      current.lambda_minus = e.lambda;
      inside = true;
    } else if (!e.enters_gap && inside) {
      current.lambda_plus = e.lambda;
      gaps.push_back(current);
      inside = false;
    }
  }
  if (inside) {
    current.lambda_plus = scan.window.hi;
    current.open_above = true;
    gaps.push_back(current);
  }
  std::sort(gaps.begin(), gaps.end(),
            [](const SpectralGap& a, const SpectralGap& b) { return a.lambda_minus < b.lambda_minus; });

  // Index gaps relative to the one containing lambda = 0 (which always exists: Delta(0) = cosh 1/2).
  std::ptrdiff_t zero = -1;
  const bool window_has_zero = scan.window.lo <= 0.0 && scan.window.hi >= 0.0;
  for (std::size_t k = 0; k < gaps.size() && window_has_zero; ++k) {
    if (gaps[k].lambda_minus <= 0.0 && gaps[k].lambda_plus >= 0.0) {
      gaps[k].contains_zero = true;
      zero = std::ptrdiff_t(k);
    }
  }
  for (std::size_t k = 0; k < gaps.size(); ++k) {
    if (zero >= 0) {
      gaps[k].index = int(std::ptrdiff_t(k) - zero);
    } else {
      // window does not reach zero: count gaps from the window's nearer side
      gaps[k].index = scan.window.lo > 0.0 ? int(k + 1) : -int(gaps.size() - k);
    }
  }
  out.gaps = std::move(gaps);
  return out;
}

VerificationReport gap_check(const PeriodicSpectrum& spectrum,
                             const std::vector<AuxiliaryPoint>& points) {
  VerificationReport report;
  report.identity = "gap_interlacing";
  report.tolerance = 0.0;
  const auto& gaps = spectrum.gaps;
  report.residuals = Eigen::MatrixXd::Zero(Eigen::Index(gaps.size()) + 1, 1);
  std::vector<char> assigned(points.size(), 0);
  int checked = 0;
  for (std::size_t k = 0; k < gaps.size(); ++k) {
    const SpectralGap& g = gaps[k];
    const double scale_lo = std::max(1.0, std::abs(g.lambda_minus));
    const double scale_hi = std::max(1.0, std::abs(g.lambda_plus));
    const double rel = g.closed ? 1e-6 : 1e-9;
    const double lo = g.open_below ? -std::numeric_limits<double>::infinity() : g.lambda_minus - rel * scale_lo;
    const double hi = g.open_above ? std::numeric_limits<double>::infinity() : g.lambda_plus + rel * scale_hi;
    int inside = 0;
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (points[j].mu >= lo && points[j].mu <= hi) {
        ++inside;
        assigned[j] = 1;
      }
    }
    double residual = 0.0;
    if (g.contains_zero) {
      residual = inside;
    } else if (g.open_below || g.open_above) {
      residual = std::max(0, inside - 1);
    } else {
      residual = inside - 1;
      ++checked;
    }
    report.residuals(Eigen::Index(k), 0) = residual;
  }
  const auto stray = std::count(assigned.begin(), assigned.end(), 0);
  report.residuals(Eigen::Index(gaps.size()), 0) = double(stray);
  report.metadata["gaps"] = std::to_string(gaps.size());
  report.metadata["bounded_gaps_checked"] = std::to_string(checked);
  report.metadata["auxiliary_points"] = std::to_string(points.size());
  report.metadata["points_outside_gaps"] = std::to_string(stray);
  report.finalize();
  return report;
}

}  // namespace chspec
