#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "chspec/coefficient.hpp"
#include "chspec/report.hpp"
#include "chspec/shooting.hpp"

namespace chspec {

struct Window {
  double lo = -60.0;
  double hi = 60.0;
};

struct SpectralOptions {
  ShootingOptions shooting;
  int grid = 256;                  // trajectory grid n
  int periods = 1;                 // trajectory length (2 enables Floquet checks)
  double nodes_per_unit = 512.0;   // lambda scan density
  double zero_guard = 1e-6;        // excluded band (-guard, guard) around lambda = 0
  double degeneracy_tol = 1e-8;    // ||Delta(mu)| - 1| threshold for band-edge points
  double closed_gap_tol = 1e-8;    // |Delta| - 1 at an extremum below which a gap is closed
};

/// Delta(lambda) = (y1(1) + y2'(1)) / 2.
double discriminant(const PeriodicCoefficient& m, double lambda, const ShootingOptions& options = {});

/// Roots of rho^2 - 2 Delta rho + 1 = 0 for |Delta| >= 1; |rho_plus| >= |rho_minus|.
struct MultiplierPair {
  double rho_plus = 1.0;
  double rho_minus = 1.0;
};
MultiplierPair multipliers(double delta);

/// Monodromy U(1, lambda) sampled on a uniform lambda grid.
struct SpectralScan {
  Window window;
  Eigen::VectorXd lambda;
  Eigen::VectorXd y2_end;  // y2(1, lambda)
  Eigen::VectorXd delta;   // Delta(lambda)
};
SpectralScan scan_monodromy(const PeriodicCoefficient& m, const Window& window,
                            const SpectralOptions& options = {});

struct AuxiliaryPoint {
  int index = 0;  // 1-based, ascending mu
  double mu = 0.0;
  double rho = 0.0;        // y2'(1, mu)
  double rho_tilde = 0.0;  // 1 / rho
  double delta = 0.0;      // Delta(mu)
  bool degenerate = false;
  Eigen::Matrix2d monodromy = Eigen::Matrix2d::Identity();
  SolutionTrajectory y1;
  SolutionTrajectory y2;
  std::optional<SolutionTrajectory> y;  // second Floquet solution, absent at Jordan points
  std::string note;
};

struct AuxiliarySpectrum {
  std::vector<AuxiliaryPoint> points;
  bool truncated = false;
  std::vector<std::string> warnings;
};

AuxiliarySpectrum auxiliary_spectrum(const PeriodicCoefficient& m, const Window& window,
                                     int max_count, const SpectralOptions& options = {});
AuxiliarySpectrum auxiliary_spectrum(const PeriodicCoefficient& m, const SpectralScan& scan,
                                     int max_count, const SpectralOptions& options = {});

/// Polishes y2(1, .) = 0 inside [lo, hi] (a sign change is required).
double polish_auxiliary_root(const Propagator& period_map, double lo, double hi);

/// Builds the auxiliary point data (trajectories, multipliers, second solution) at a root.
AuxiliaryPoint make_auxiliary_point(const PeriodicCoefficient& m, double mu, int index,
                                    const SpectralOptions& options = {});

/// Floquet solution with multiplier 1 / rho normalised by y(0) = 1.
/// Falls back to y1 when U(1, mu) = +-I; throws NumericalError at Jordan points.
SolutionTrajectory second_floquet(const AuxiliaryPoint& aux);

struct BandEdge {
  double lambda = 0.0;
  int level = 1;              // +1: Delta = 1 (periodic), -1: Delta = -1 (antiperiodic)
  bool double_root = false;   // tangential touch (closed gap)
  bool enters_gap = false;    // |Delta| > 1 just above lambda
};

/// Interval (lambda_minus, lambda_plus) where |Delta| > 1.
struct SpectralGap {
  int index = 0;
  double lambda_minus = 0.0;
  double lambda_plus = 0.0;
  bool closed = false;
  bool open_below = false;  // lower edge lies outside the window
  bool open_above = false;  // upper edge lies outside the window
  bool contains_zero = false;
};

struct PeriodicSpectrum {
  std::vector<BandEdge> edges;
  std::vector<SpectralGap> gaps;
};

PeriodicSpectrum periodic_spectrum(const PeriodicCoefficient& m, const Window& window,
                                   const SpectralOptions& options = {});
PeriodicSpectrum periodic_spectrum(const PeriodicCoefficient& m, const SpectralScan& scan,
                                   const SpectralOptions& options = {});

/// Each gap away from lambda = 0 holds exactly one auxiliary eigenvalue
/// (at most one when the gap leaves the window).
VerificationReport gap_check(const PeriodicSpectrum& spectrum,
                             const std::vector<AuxiliaryPoint>& points);

}  // namespace chspec
