#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "chspec/coefficient.hpp"

// Integration of psi'' = psi / 4 - lambda m psi through smooth stretches and across atoms.
// States carry the right limit of psi' wherever an atom sits on the evaluation point.

namespace chspec {

struct ShootingState {
  double x = 0.0;
  double psi = 0.0;
  double dpsi = 0.0;
};

struct ShootingOptions {
  int steps_per_period = 4096;  // RK4 steps per unit length, power of two
};

/// U(x, lambda) = [[y1, y2], [y1', y2']] with U(0, lambda) = I.
struct FundamentalMatrix {
  double lambda = 0.0;
  double x = 0.0;
  Eigen::Matrix2d entries = Eigen::Matrix2d::Identity();

  double determinant() const { return entries(0, 0) * entries(1, 1) - entries(0, 1) * entries(1, 0); }
};

/// Dense output on the uniform grid k / n (k = 0 .. periods * n) with atom positions inserted.
struct SolutionTrajectory {
  double lambda = 0.0;
  int n = 0;
  int periods = 1;
  Eigen::VectorXd x;
  Eigen::VectorXd psi;
  Eigen::VectorXd dpsi_minus;  // left limits
  Eigen::VectorXd dpsi_plus;   // right limits
  std::vector<Eigen::Index> grid_index;  // node of grid point k / n
  std::vector<Eigen::Index> atom_index;  // nodes carrying an atom

  Eigen::Index node_count() const { return x.size(); }
  /// psi and right-limit psi' restricted to the uniform grid (periods * n + 1 values).
  Eigen::VectorXd grid_psi() const;
  Eigen::VectorXd grid_dpsi() const;
};

/// a * lhs + b * rhs for trajectories on identical nodes.
SolutionTrajectory combine(double a, const SolutionTrajectory& lhs, double b,
                           const SolutionTrajectory& rhs);

/// Jump condition across an atom of weight p: psi' -> psi' - lambda p psi.
ShootingState delta_jump(const ShootingState& s, double p, double lambda);

/// The constant-coefficient propagator of psi'' = psi / 4 over a length d.
Eigen::Matrix2d free_propagator(double d);

/// Precomputed integration plan for a fixed coefficient over [from, to].
/// RK4 steps lie on the lattice j / steps_per_period and are split at atoms;
/// stretches with identically zero smooth part use the exact propagator.
/// Reusable for any lambda; the plan itself is immutable.
class Propagator {
 public:
  Propagator(const PeriodicCoefficient& m, double from, double to,
             const ShootingOptions& options = {}, int record_grid = 0);

  double from() const { return from_; }
  double to() const { return to_; }

  Eigen::Matrix2d transfer(double lambda) const;
  Eigen::Vector2d apply(double lambda, const Eigen::Vector2d& state) const;

  /// Trajectories of both columns of the fundamental matrix, started from `initial`
  /// at `from`. Requires a recording grid.
  std::pair<SolutionTrajectory, SolutionTrajectory> trajectories(
      double lambda, const Eigen::Matrix2d& initial = Eigen::Matrix2d::Identity()) const;

 private:
  struct Segment {
    double x_end = 0.0;
    double h = 0.0;
    double m0 = 0.0, m_mid = 0.0, m1 = 0.0;
    bool exact = false;
    bool has_atom = false;
    double atom_weight = 0.0;
    bool record = false;
    int grid_k = -1;
    Eigen::Matrix2d exact_map = Eigen::Matrix2d::Identity();
  };

  template <int Cols, class Visit>
  Eigen::Matrix<double, 2, Cols> run(double lambda, Eigen::Matrix<double, 2, Cols> y,
                                     Visit&& visit) const;

  double from_ = 0.0;
  double to_ = 0.0;
  int record_grid_ = 0;
  int periods_ = 1;
  std::vector<Segment> segments_;
};

ShootingState propagate(const PeriodicCoefficient& m, double lambda, const ShootingState& from,
                        double to, const ShootingOptions& options = {});

/// x in [0, 2].
FundamentalMatrix fundamental_matrix(const PeriodicCoefficient& m, double lambda, double x,
                                     const ShootingOptions& options = {});

/// (y1, y2) on the n-grid over `periods` periods.
std::pair<SolutionTrajectory, SolutionTrajectory> solve_fundamental(
    const PeriodicCoefficient& m, double lambda, int n, const ShootingOptions& options = {},
    int periods = 1);

/// a psi_b' - a' psi_b at x = 0.
double wronskian(const SolutionTrajectory& a, const SolutionTrajectory& b);
/// max over nodes of |W(x) - W(0)|, both one-sided limits included.
double wronskian_drift(const SolutionTrajectory& a, const SolutionTrajectory& b);

}  // namespace chspec
