#include "chspec/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chspec/errors.hpp"

namespace chspec {
namespace {

constexpr double kOverflow = 1e300;

struct Breakpoint {
  double x = 0.0;
  bool atom = false;
  double weight = 0.0;
  int grid_k = -1;
};

void require_same_lambda(const SolutionTrajectory& a, const SolutionTrajectory& b) {
  if (std::abs(a.lambda - b.lambda) > 1e-12 * std::max(1.0, std::abs(a.lambda)))
    throw ValidationError("trajectories belong to different lambda");
  if (a.node_count() != b.node_count()) throw ValidationError("trajectories have different nodes");
}

}  // namespace

Eigen::VectorXd SolutionTrajectory::grid_psi() const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(grid_index.size()));
  for (std::size_t k = 0; k < grid_index.size(); ++k) out[Eigen::Index(k)] = psi[grid_index[k]];
  return out;
}

Eigen::VectorXd SolutionTrajectory::grid_dpsi() const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(grid_index.size()));
  for (std::size_t k = 0; k < grid_index.size(); ++k) out[Eigen::Index(k)] = dpsi_plus[grid_index[k]];
  return out;
}

SolutionTrajectory combine(double a, const SolutionTrajectory& lhs, double b,
                           const SolutionTrajectory& rhs) {
  require_same_lambda(lhs, rhs);
  SolutionTrajectory out = lhs;
  out.psi = a * lhs.psi + b * rhs.psi;
  out.dpsi_minus = a * lhs.dpsi_minus + b * rhs.dpsi_minus;
  out.dpsi_plus = a * lhs.dpsi_plus + b * rhs.dpsi_plus;
  return out;
}

ShootingState delta_jump(const ShootingState& s, double p, double lambda) {
  return ShootingState{s.x, s.psi, s.dpsi - lambda * p * s.psi};
}

Eigen::Matrix2d free_propagator(double d) {
  const double c = std::cosh(0.5 * d);
  const double s = std::sinh(0.5 * d);
  Eigen::Matrix2d p;
  p << c, 2.0 * s, 0.5 * s, c;
  return p;
}

Propagator::Propagator(const PeriodicCoefficient& m, double from, double to,
                       const ShootingOptions& options, int record_grid)
    : from_(from), to_(to), record_grid_(record_grid) {
  if (!(to >= from) || !std::isfinite(from) || !std::isfinite(to))
    throw ValidationError("propagation interval must satisfy from <= to");
  if (!is_power_of_two(options.steps_per_period))
    throw ValidationError("steps per period must be a power of two");
  if (record_grid != 0) require_grid_size(record_grid, "trajectory grid");
  const long steps = std::max<long>(options.steps_per_period, record_grid);
  const bool exact = m.smooth().is_zero();
  periods_ = std::max(1, static_cast<int>(std::lround(to - from)));

  std::vector<Breakpoint> points;
  if (!exact) {
    const long j0 = static_cast<long>(std::floor(from * double(steps))) + 1;
    const long j1 = static_cast<long>(std::ceil(to * double(steps))) - 1;
    for (long j = j0; j <= j1; ++j) points.push_back({double(j) / double(steps)});
  }
  if (record_grid > 0) {
    const long k0 = static_cast<long>(std::floor(from * record_grid)) + 1;
    const long k1 = static_cast<long>(std::floor(to * record_grid));
    for (long k = k0; k <= k1; ++k) {
      Breakpoint b{double(k) / double(record_grid)};
      b.grid_k = static_cast<int>(k);
      points.push_back(b);
    }
  }
  for (const Atom& a : m.atoms()) {
    for (long image = static_cast<long>(std::floor(from)) - 1; image <= static_cast<long>(std::ceil(to)); ++image) {
      const double x = a.q + double(image);
      if (x > from && x <= to) points.push_back({x, true, a.p, -1});
    }
  }
  points.push_back({to});
  std::stable_sort(points.begin(), points.end(),
                   [](const Breakpoint& a, const Breakpoint& b) { return a.x < b.x; });

  // Merge coincident breakpoints; lattice/grid coordinates are exact and win over atom positions.
  std::vector<Breakpoint> merged;
  for (const Breakpoint& b : points) {
    if (!merged.empty() && b.x - merged.back().x <= 1e-12 * std::max(1.0, std::abs(b.x))) {
      Breakpoint& last = merged.back();
      if (b.atom) {
        last.atom = true;
        last.weight += b.weight;
      } else if (!last.atom || b.grid_k >= 0) {
        last.x = b.x;
      }
      if (b.grid_k >= 0) last.grid_k = b.grid_k;
      continue;
    }
    merged.push_back(b);
  }
  if (!merged.empty() && merged.front().x - from <= 1e-12 * std::max(1.0, std::abs(from)))
    merged.erase(merged.begin());

  double prev = from;
  segments_.reserve(merged.size());
  for (const Breakpoint& b : merged) {
    Segment seg;
    seg.x_end = b.x;
    seg.h = b.x - prev;
    seg.exact = exact;
    if (!exact) {
      seg.m0 = m.smooth_value(prev);
      seg.m_mid = m.smooth_value(prev + 0.5 * seg.h);
      seg.m1 = m.smooth_value(b.x);
    }
    seg.has_atom = b.atom;
    seg.atom_weight = b.weight;
    seg.record = record_grid > 0 && (b.grid_k >= 0 || b.atom);
    seg.grid_k = b.grid_k;
    if (exact) seg.exact_map = free_propagator(seg.h);
    segments_.push_back(seg);
    prev = b.x;
  }
}

template <int Cols, class Visit>
Eigen::Matrix<double, 2, Cols> Propagator::run(double lambda, Eigen::Matrix<double, 2, Cols> y,
                                               Visit&& visit) const {
  using State = Eigen::Matrix<double, 2, Cols>;
  auto rhs = [](double c, const State& s) {
    State r;
    r.row(0) = s.row(1);
    r.row(1) = c * s.row(0);
    return r;
  };
  for (const Segment& seg : segments_) {
    if (seg.exact) {
      y = seg.exact_map * y;
    } else {
      const double h = seg.h;
      const double c0 = 0.25 - lambda * seg.m0;
      const double cm = 0.25 - lambda * seg.m_mid;
      const double c1 = 0.25 - lambda * seg.m1;
      const State k1 = rhs(c0, y);
      const State k2 = rhs(cm, y + 0.5 * h * k1);
      const State k3 = rhs(cm, y + 0.5 * h * k2);
      const State k4 = rhs(c1, y + h * k3);
      y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    State before = y;
    if (seg.has_atom) y.row(1) -= (lambda * seg.atom_weight) * y.row(0);
    if (!(y.cwiseAbs().maxCoeff() <= kOverflow)) {
      std::ostringstream msg;
      msg << "shooting overflow at lambda = " << lambda << ", x = " << seg.x_end;
      throw NumericalError(msg.str());
    }
    if (seg.record) visit(seg, before, y);
  }
  return y;
}

Eigen::Matrix2d Propagator::transfer(double lambda) const {
  return run<2>(lambda, Eigen::Matrix2d::Identity(), [](const Segment&, const auto&, const auto&) {});
}

Eigen::Vector2d Propagator::apply(double lambda, const Eigen::Vector2d& state) const {
  return run<1>(lambda, state, [](const Segment&, const auto&, const auto&) {});
}

std::pair<SolutionTrajectory, SolutionTrajectory> Propagator::trajectories(
    double lambda, const Eigen::Matrix2d& initial) const {
  if (record_grid_ == 0) throw ValidationError("propagator has no recording grid");
  Eigen::Index count = 1;
  for (const Segment& s : segments_) count += s.record ? 1 : 0;

  std::pair<SolutionTrajectory, SolutionTrajectory> out;
  for (SolutionTrajectory* t : {&out.first, &out.second}) {
    t->lambda = lambda;
    t->n = record_grid_;
    t->periods = periods_;
    t->x.resize(count);
    t->psi.resize(count);
    t->dpsi_minus.resize(count);
    t->dpsi_plus.resize(count);
  }
  auto store = [&](Eigen::Index i, double x, int grid_k, bool atom, const Eigen::Matrix2d& before,
                   const Eigen::Matrix2d& after) {
    for (int col = 0; col < 2; ++col) {
      SolutionTrajectory& t = col == 0 ? out.first : out.second;
      t.x[i] = x;
      t.psi[i] = after(0, col);
      t.dpsi_minus[i] = before(1, col);
      t.dpsi_plus[i] = after(1, col);
      if (grid_k >= 0) t.grid_index.push_back(i);
      if (atom) t.atom_index.push_back(i);
    }
  };
  const double start_k = from_ * record_grid_;
  const bool start_on_grid = std::abs(start_k - std::round(start_k)) < 1e-9;
  store(0, from_, start_on_grid ? 0 : -1, false, initial, initial);

  Eigen::Index i = 1;
  run<2>(lambda, initial, [&](const Segment& seg, const Eigen::Matrix2d& before, const Eigen::Matrix2d& after) {
    store(i++, seg.x_end, seg.grid_k, seg.has_atom, before, after);
  });
  return out;
}

ShootingState propagate(const PeriodicCoefficient& m, double lambda, const ShootingState& from,
                        double to, const ShootingOptions& options) {
  if (to < from.x) throw ValidationError("propagate requires to >= from.x");
  if (to == from.x) return from;
  const Eigen::Vector2d y = Propagator(m, from.x, to, options).apply(lambda, Eigen::Vector2d(from.psi, from.dpsi));
  return ShootingState{to, y[0], y[1]};
}

FundamentalMatrix fundamental_matrix(const PeriodicCoefficient& m, double lambda, double x,
                                     const ShootingOptions& options) {
  if (!(x >= 0.0 && x <= 2.0)) throw ValidationError("fundamental matrix requires x in [0, 2]");
  FundamentalMatrix u;
  u.lambda = lambda;
  u.x = x;
  if (x > 0.0) u.entries = Propagator(m, 0.0, x, options).transfer(lambda);
  return u;
}

std::pair<SolutionTrajectory, SolutionTrajectory> solve_fundamental(
    const PeriodicCoefficient& m, double lambda, int n, const ShootingOptions& options,
    int periods) {
  if (periods < 1 || periods > 2) throw ValidationError("trajectories span one or two periods");
  return Propagator(m, 0.0, double(periods), options, n).trajectories(lambda);
}

double wronskian(const SolutionTrajectory& a, const SolutionTrajectory& b) {
  require_same_lambda(a, b);
  return a.psi[0] * b.dpsi_plus[0] - a.dpsi_plus[0] * b.psi[0];
}

double wronskian_drift(const SolutionTrajectory& a, const SolutionTrajectory& b) {
  const double w0 = wronskian(a, b);
  const Eigen::VectorXd w_plus = a.psi.cwiseProduct(b.dpsi_plus) - a.dpsi_plus.cwiseProduct(b.psi);
  const Eigen::VectorXd w_minus = a.psi.cwiseProduct(b.dpsi_minus) - a.dpsi_minus.cwiseProduct(b.psi);
  return std::max((w_plus.array() - w0).abs().maxCoeff(), (w_minus.array() - w0).abs().maxCoeff());
}

}  // namespace chspec
