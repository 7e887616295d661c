// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "chspec/brackets.hpp"
#include "chspec/corpus.hpp"
#include "chspec/floquet.hpp"
#include "chspec/hamiltonians.hpp"
#include "chspec/product_field.hpp"
#include "chspec/variations.hpp"

using namespace chspec;

namespace {

constexpr double kPi = std::numbers::pi;

struct Member {
  CorpusEntry entry;
  Window window;
  AuxiliarySpectrum aux;
  PeriodicSpectrum spectrum;
};

Member analyse(CorpusEntry entry, Window window, const SpectralOptions& options) {
  const SpectralScan scan = scan_monodromy(entry.m, window, options);
  Member out{std::move(entry), window, {}, {}};
  out.aux = auxiliary_spectrum(out.entry.m, scan, 0, options);
  out.spectrum = periodic_spectrum(out.entry.m, scan, options);
  return out;
}

int failures = 0;

void line(int id, const char* title, bool pass, const std::string& detail) {
  if (!pass) ++failures;
  std::printf("%s C%d %s: %s\n", pass ? "PASS" : "FAIL", id, title, detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// Solutions available at an auxiliary point for product pairs.
std::vector<const SolutionTrajectory*> solutions(const AuxiliaryPoint& p) {
  std::vector<const SolutionTrajectory*> s{&p.y1, &p.y2};
  if (p.y) s.push_back(&*p.y);
  return s;
}

// Closed form of Delta for m = 1.
double constant_delta(double lambda) {
  const double s = lambda - 0.25;
  return s >= 0.0 ? std::cos(std::sqrt(s)) : std::cosh(std::sqrt(-s));
}

// Re-solves an auxiliary point on grid n with n RK4 steps per period.
AuxiliaryPoint refine(const PeriodicCoefficient& m, const AuxiliaryPoint& p, int n) {
  SpectralOptions o;
  o.grid = n;
  o.shooting.steps_per_period = n;
  const Propagator period_map(m, 0.0, 1.0, o.shooting);
  const double mu = polish_auxiliary_root(period_map, p.mu - 0.05, p.mu + 0.05);
  return make_auxiliary_point(m, mu, p.index, o);
}

double weak_lemma_max(const PeriodicCoefficient& m, const std::vector<AuxiliaryPoint>& pts) {
  double worst = 0.0;
  for (const AuxiliaryPoint& p : pts) {
    const auto s = solutions(p);
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = i; j < s.size(); ++j)
        worst = std::max(worst, lemma_weak_residual(m, p.mu, *s[i], *s[j]).relative());
  }
  return worst;
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  SpectralOptions base;

  std::vector<Member> members;
  for (CorpusEntry& e : default_corpus()) {
    Window w{-1.0, 95.0};
    if (e.name == "constant") w = Window{-1.0, 250.0};
    if (!e.smooth) w = Window{-60.0, 400.0};
    members.push_back(analyse(std::move(e), w, base));
  }
  auto member = [&](const std::string& name) -> const Member& {
    for (const Member& m : members)
      if (m.entry.name == name) return m;
    throw std::runtime_error("missing member " + name);
  };
  auto first_three = [](const Member& m) {
    std::vector<AuxiliaryPoint> pts(m.aux.points.begin(),
                                    m.aux.points.begin() + std::min<std::size_t>(3, m.aux.points.size()));
    return pts;
  };
  const std::vector<std::string> nondegenerate{"mixed", "shifted_cos"};

  // 1. det U = 1 along trajectories.
  {
    const double lambdas[] = {-7.5, 0.1, 3.0, 17.0, 42.0};
    double worst = 0.0;
    int pairs = 0;
    for (std::size_t k = 0; k < 20; ++k) {
      const Member& mem = members[k % members.size()];
      const double lambda = lambdas[(k / members.size() + k) % 5];
      const auto [y1, y2] = solve_fundamental(mem.entry.m, lambda, 256, base.shooting);
      worst = std::max({worst, std::abs(wronskian(y1, y2) - 1.0), wronskian_drift(y1, y2)});
      for (double x : {0.37, 1.0, 1.81})
        worst = std::max(worst, std::abs(fundamental_matrix(mem.entry.m, lambda, x, base.shooting).determinant() - 1.0));
      ++pairs;
    }
    line(1, "Wronskian", worst <= 1e-9, fmt("max |det U - 1| = %.3e over %g (m, lambda) pairs (tol 1e-9)", worst, pairs));
  }

  // 2. Constant coefficient closed forms.
  {
    const Member& c = member("constant");
    double mu_err = 0.0;
    bool count_ok = c.aux.points.size() == 5;
    for (int n = 1; n <= 5 && n <= int(c.aux.points.size()); ++n) {
      const double exact = 0.25 + n * n * kPi * kPi;
      mu_err = std::max(mu_err, std::abs(c.aux.points[std::size_t(n - 1)].mu - exact) / exact);
    }
    double delta_err = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double lambda = -60.0 + 310.0 * i / 199.0;
      const double exact = constant_delta(lambda);
      delta_err = std::max(delta_err, std::abs(discriminant(c.entry.m, lambda, base.shooting) - exact) /
                                          std::max(1.0, std::abs(exact)));
    }
    line(2, "constant-coefficient oracle", count_ok && mu_err <= 1e-8 && delta_err <= 1e-8,
         fmt("%g points, max rel mu_n error %.3e, max rel Delta error %.3e (tol 1e-8)",
             double(c.aux.points.size()), mu_err, delta_err));
  }

  // 3. Single peakon.
  {
    const Member& a = member("peakon_q03");
    const Member& b = member("peakon_q05");
    const double exact = std::sinh(0.5) / (2.0 * std::sinh(0.15) * std::sinh(0.35));
    const double err = a.aux.points.size() == 1 ? std::abs(a.aux.points[0].mu - exact) : INFINITY;
    const bool sym = b.aux.points.size() == 1 && std::abs(b.aux.points[0].rho + 1.0) <= 1e-10 &&
                     b.aux.points[0].degenerate;
    line(3, "peakon oracle", err <= 1e-10 && sym,
         fmt("q=0.3: |mu - exact| = %.3e (tol 1e-10); q=0.5: rho = %.12g, degenerate = %g", err,
             b.aux.points.empty() ? NAN : b.aux.points[0].rho,
             b.aux.points.empty() ? 0.0 : double(b.aux.points[0].degenerate)));
  }

  // 4. lambda J(ab) = K(ab) on solution products.
  {
    double pointwise = 0.0;
    double weak = 0.0;
    int pairs = 0;
    for (const Member& mem : members) {
      if (!mem.entry.smooth) continue;
      for (const AuxiliaryPoint& p : first_three(mem)) {
        const auto s = solutions(p);
        for (std::size_t i = 0; i < s.size(); ++i)
          for (std::size_t j = i; j < s.size(); ++j) {
            pointwise = std::max(pointwise, lemma_residual(mem.entry.m, p.mu, *s[i], *s[j]).relative());
            weak = std::max(weak, lemma_weak_residual(mem.entry.m, p.mu, *s[i], *s[j]).relative());
            ++pairs;
          }
      }
    }
    line(4, "product identity lambda J(ab) = K(ab)", pointwise <= 1e-7 && weak <= 1e-7,
         fmt("%g pairs, max pointwise %.3e, max weak-form %.3e (tol 1e-7 relative)", pairs, pointwise, weak));
  }

  // 5. Gradients against finite differences.
  {
    FiniteDifferenceOptions fd;
    double worst = 0.0;
    int fields = 0;
    for (const std::string& name : nondegenerate) {
      const Member& mem = member(name);
      for (const AuxiliaryPoint& p : first_three(mem)) {
        const VerificationReport r = verify_gradients(mem.entry.m, p, fd, base);
        worst = std::max(worst, r.max_residual());
        fields += int(r.residuals.size());
      }
    }
    line(5, "gradient FD oracle", worst <= 5e-4 && fields > 0,
         fmt("%g fields, max rel error %.3e at eps 1e-5, n 256 (tol 5e-4)", fields, worst));
  }

  // 6. Positivity identity.
  {
    double worst = 0.0;
    int count = 0;
    for (const Member& mem : members)
      for (const AuxiliaryPoint& p : mem.aux.points) {
        worst = std::max(worst, positivity_identity(mem.entry.m, p).relative_residual());
        ++count;
      }
    line(6, "positivity identity", worst <= 1e-7 && count > 0,
         fmt("%g points, max rel residual %.3e (tol 1e-7)", count, worst));
  }

  // 7, 8. Conjugacy at n = 4096.
  {
    double t1 = 0.0, rel = 0.0, t2 = 0.0;
    for (const std::string& name : nondegenerate) {
      const Member& mem = member(name);
      SpectralOptions fine;
      fine.grid = 4096;
      std::vector<AuxiliaryPoint> pts;
      for (const AuxiliaryPoint& p : first_three(mem)) pts.push_back(make_auxiliary_point(mem.entry.m, p.mu, p.index, fine));
      t1 = std::max(t1, conjugacy_matrix(mem.entry.m, pts, Theorem::kFirst).max_residual());
      rel = std::max(rel, mu_log_rho_relation(mem.entry.m, pts).max_residual());
      t2 = std::max(t2, conjugacy_matrix(mem.entry.m, pts, Theorem::kSecond).max_residual());
    }
    line(7, "(mu, f) conjugacy under {,}_1", t1 <= 1e-5 && rel <= 1e-5,
         fmt("max |{,}_1 - canonical| = %.3e, max scaled {mu, log|rho|}_1 residual %.3e (tol 1e-5)", t1, rel));
    line(8, "(mu, g) conjugacy under {,}_2", t2 <= 1e-5, fmt("max |{,}_2 - canonical| = %.3e (tol 1e-5)", t2));
  }

  // 9. Convergence when grid and RK4 steps double.
  {
    double worst_ratio = INFINITY;
    std::string detail;
    for (const std::string& name : nondegenerate) {
      const Member& mem = member(name);
      double r[3][2];
      for (int level = 0; level < 2; ++level) {
        const int n = 256 << level;
        std::vector<AuxiliaryPoint> pts;
        for (const AuxiliaryPoint& p : first_three(mem)) pts.push_back(refine(mem.entry.m, p, n));
        r[0][level] = weak_lemma_max(mem.entry.m, pts);
        r[1][level] = conjugacy_matrix(mem.entry.m, pts, Theorem::kFirst).max_residual();
        r[2][level] = conjugacy_matrix(mem.entry.m, pts, Theorem::kSecond).max_residual();
      }
      for (int c = 0; c < 3; ++c) worst_ratio = std::min(worst_ratio, r[c][0] / r[c][1]);
      detail += name + fmt(": product identity %.1fx, {,}_1 matrix %.1fx, {,}_2 matrix %.1fx; ", r[0][0] / r[0][1],
                           r[1][0] / r[1][1], r[2][0] / r[2][1]);
    }
    line(9, "convergence order", worst_ratio >= 8.0, detail + fmt("min ratio %.1f (n 256 -> 512, need >= 8)", worst_ratio));
  }

  // 10. Bi-Hamiltonian identity.
  {
    double worst = 0.0;
    for (const Member& mem : members)
      if (mem.entry.smooth) worst = std::max(worst, bihamiltonian_residual(mem.entry.m, 256).max_residual());
    line(10, "bi-Hamiltonian identity", worst <= 1e-6, fmt("max scaled |J dH2/dm - K dH3/dm| = %.3e (tol 1e-6)", worst));
  }

  // 11. One auxiliary eigenvalue per gap.
  {
    bool pass = true;
    int gaps = 0;
    int bounded = 0;
    for (const Member& mem : members) {
      const VerificationReport r = gap_check(mem.spectrum, mem.aux.points);
      pass = pass && r.pass;
      gaps += int(mem.spectrum.gaps.size());
      bounded += std::stoi(r.metadata.at("bounded_gaps_checked"));
    }
    line(11, "gap interlacing", pass, fmt("%g gaps over %g members, %g bounded gaps hold exactly one mu", gaps,
                                           double(members.size()), bounded));
  }

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d of 11 criteria failed (%.1f s)\n", failures, seconds);
  return failures == 0 ? 0 : 1;
}
