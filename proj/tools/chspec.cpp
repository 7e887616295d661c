// chspec: spectra, discriminant sweeps and verification suites for psi'' = psi / 4 - lambda m psi.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chspec/brackets.hpp"
#include "chspec/corpus.hpp"
#include "chspec/errors.hpp"
#include "chspec/floquet.hpp"
#include "chspec/hamiltonians.hpp"
#include "chspec/io.hpp"
#include "chspec/variations.hpp"

namespace fs = std::filesystem;
using namespace chspec;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct RunConfig {
  std::string config;
  int n = 0;      // 0: suite default
  int steps = 0;  // 0: max(4096, n)
  double lambda_min = -60.0;
  double lambda_max = 60.0;
  int count = 0;  // 0: command default
  double eps = 1e-5;
  std::string out = ".";
};

struct Member {
  std::string name;
  PeriodicCoefficient m;
};

std::vector<Member> members(const RunConfig& cfg) {
  if (!cfg.config.empty()) return {Member{fs::path(cfg.config).stem().string(), load_coefficient(cfg.config)}};
  std::vector<Member> out;
  for (CorpusEntry& e : default_corpus()) out.push_back(Member{e.name, std::move(e.m)});
  return out;
}

SpectralOptions spectral_options(const RunConfig& cfg, int default_n) {
  SpectralOptions o;
  o.grid = cfg.n > 0 ? cfg.n : default_n;
  require_grid_size(o.grid, "--n");
  o.shooting.steps_per_period = cfg.steps > 0 ? cfg.steps : std::max(4096, o.grid);
  if (!is_power_of_two(o.shooting.steps_per_period)) throw ValidationError("--steps must be a power of two");
  if (o.shooting.steps_per_period < o.grid) throw ValidationError("--steps must be at least --n");
  return o;
}

Window window(const RunConfig& cfg) {
  if (!std::isfinite(cfg.lambda_min) || !std::isfinite(cfg.lambda_max))
    throw ValidationError("lambda window must be finite");
  return Window{cfg.lambda_min, cfg.lambda_max};
}

std::ofstream open_output(const fs::path& path) {
  fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  return out;
}

fs::path output_path(const RunConfig& cfg, const std::vector<Member>& all, const Member& m,
                     const std::string& file) {
  return all.size() == 1 ? fs::path(cfg.out) / file : fs::path(cfg.out) / m.name / file;
}

int cmd_discriminant(const RunConfig& cfg) {
  const auto all = members(cfg);
  const SpectralOptions o = spectral_options(cfg, 256);
  for (const Member& m : all) {
    std::ofstream out = open_output(output_path(cfg, all, m, "discriminant.csv"));
    write_discriminant_csv(out, scan_monodromy(m.m, window(cfg), o));
  }
  return kPass;
}

int cmd_spectrum(const RunConfig& cfg) {
  const auto all = members(cfg);
  const SpectralOptions o = spectral_options(cfg, 256);
  for (const Member& m : all) {
    const SpectralScan scan = scan_monodromy(m.m, window(cfg), o);
    const AuxiliarySpectrum aux = auxiliary_spectrum(m.m, scan, cfg.count, o);
    for (const std::string& w : aux.warnings) std::cerr << "warning [" << m.name << "]: " << w << '\n';
    std::ofstream out = open_output(output_path(cfg, all, m, "spectrum.csv"));
    write_spectrum_csv(out, aux, periodic_spectrum(m.m, scan, o));
  }
  return kPass;
}

// Runs `body`, turning library errors into a failed report.
template <class Body>
VerificationReport guarded(const std::string& identity, int n, Body&& body) {
  try {
    return body();
  } catch (const ValidationError& e) {
    return failed_report(identity, e.what(), n);
  } catch (const NumericalError& e) {
    return failed_report(identity, e.what(), n);
  }
}

VerificationReport lemma_suite(const PeriodicCoefficient& m, const std::vector<AuxiliaryPoint>& points,
                               int max_points) {
  VerificationReport r;
  r.identity = "lemma";
  r.tolerance = 1e-7;
  if (m.has_atoms()) throw ValidationError("J on distributional m not supported for grid fields");
  std::vector<std::pair<double, double>> rows;
  for (std::size_t k = 0; k < points.size() && int(k) < max_points; ++k) {
    const AuxiliaryPoint& p = points[k];
    r.n = p.y2.n;
    std::vector<const SolutionTrajectory*> s{&p.y1, &p.y2};
    if (p.y) s.push_back(&*p.y);
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = i; j < s.size(); ++j)
        rows.emplace_back(lemma_residual(m, p.mu, *s[i], *s[j]).relative(),
                          lemma_weak_residual(m, p.mu, *s[i], *s[j]).relative());
  }
  if (rows.empty()) throw NumericalError("no auxiliary points in the window");
  r.residuals.resize(Eigen::Index(rows.size()), 2);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    r.residuals(Eigen::Index(i), 0) = rows[i].first;
    r.residuals(Eigen::Index(i), 1) = rows[i].second;
  }
  r.metadata["columns"] = "pointwise,weak_form";
  r.finalize();
  return r;
}

int cmd_verify(const RunConfig& cfg, const std::string& suite) {
  const bool all_suites = suite == "all";
  auto want = [&](const char* s) { return all_suites || suite == s; };
  const auto all = members(cfg);
  const bool corpus_mode = cfg.config.empty();
  const int count = cfg.count > 0 ? cfg.count : 3;

  std::vector<VerificationReport> reports;
  auto add = [&](VerificationReport r, const Member& m) {
    r.metadata["member"] = m.name;
    reports.push_back(std::move(r));
  };

  for (const Member& mem : all) {
    const PeriodicCoefficient& m = mem.m;
    // Bracket suites live on smooth coefficients; the built-in corpus skips the others.
    const bool bracket_ok = !m.has_atoms();
    std::map<int, AuxiliarySpectrum> spectra;  // by grid size
    auto spectrum_at = [&](const SpectralOptions& o) -> const AuxiliarySpectrum& {
      auto it = spectra.find(o.grid);
      if (it == spectra.end()) it = spectra.emplace(o.grid, auxiliary_spectrum(m, window(cfg), 0, o)).first;
      return it->second;
    };

    if (want("lemma") && (bracket_ok || !corpus_mode)) {
      const SpectralOptions o = spectral_options(cfg, 256);
      add(guarded("lemma", o.grid, [&] {
            return lemma_suite(m, spectrum_at(o).points, count);
          }), mem);
    }
    if (want("gradients")) {
      const SpectralOptions o = spectral_options(cfg, 256);
      FiniteDifferenceOptions fd;
      fd.eps = cfg.eps;
      fd.n = o.grid;
      const AuxiliarySpectrum& aux = spectrum_at(o);
      const auto chosen = conjugacy_points(aux.points, count);
      if (chosen.empty()) {
        if (!corpus_mode) add(failed_report("gradient_fd_oracle", "no non-degenerate points", fd.n), mem);
      }
      for (const AuxiliaryPoint* p : chosen) {
        add(guarded("gradient_fd_oracle", fd.n, [&] { return verify_gradients(m, *p, fd, o); }), mem);
        std::ofstream out = open_output(
            output_path(cfg, all, mem, "gradients_" + std::to_string(p->index) + ".csv"));
        write_gradient_csv(out, grad_mu(m, *p), grad_log_rho(m, *p), grad_conjugate(m, *p, Conjugate::kF),
                           grad_conjugate(m, *p, Conjugate::kG));
      }
    }
    for (const auto& [name, which] : {std::pair{"theorem1", Theorem::kFirst}, std::pair{"theorem2", Theorem::kSecond}}) {
      if (!want(name) || !(bracket_ok || !corpus_mode)) continue;
      const SpectralOptions o = spectral_options(cfg, 4096);
      const std::string identity = which == Theorem::kFirst ? "theorem1_conjugacy" : "theorem2_conjugacy";
      const AuxiliarySpectrum& aux = spectrum_at(o);
      if (corpus_mode && conjugacy_points(aux.points, count).empty()) continue;
      add(guarded(identity, o.grid, [&] { return conjugacy_matrix(m, aux.points, which, count); }), mem);
      if (which == Theorem::kFirst)
        add(guarded("theorem1_mu_log_rho", o.grid, [&] { return mu_log_rho_relation(m, aux.points, count); }), mem);
    }
    if (want("hamiltonian") && (bracket_ok || !corpus_mode)) {
      const SpectralOptions o = spectral_options(cfg, 256);
      add(guarded("bihamiltonian", o.grid, [&] { return bihamiltonian_residual(m, o.grid); }), mem);
      if (bracket_ok) {
        std::ofstream out = open_output(output_path(cfg, all, mem, "hamiltonian.csv"));
        write_bihamiltonian_csv(out, bihamiltonian_fields(m, o.grid));
      }
    }
  }

  nlohmann::json doc = nlohmann::json::array();
  bool pass = true;
  for (const VerificationReport& r : reports) {
    doc.push_back(to_json(r));
    pass = pass && r.pass;
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.identity << " [" << r.metadata.at("member")
              << "] max residual " << format_double(r.max_residual()) << " tolerance "
              << format_double(r.tolerance);
    if (r.metadata.count("error")) std::cout << " (" << r.metadata.at("error") << ')';
    std::cout << '\n';
  }
  if (reports.empty()) {
    std::cout << "no applicable reports for suite " << suite << '\n';
    pass = false;
  }
  std::ofstream out = open_output(fs::path(cfg.out) / ("verify_" + suite + ".json"));
  out << doc.dump(2) << '\n';
  return pass ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral problem psi'' = psi/4 - lambda m psi with periodic momentum m"};
  app.require_subcommand(1);
  RunConfig cfg;
  auto common = [&cfg](CLI::App* cmd) {
    cmd->add_option("--config", cfg.config, "coefficient JSON (default: built-in corpus)")->check(CLI::ExistingFile);
    cmd->add_option("--n", cfg.n, "grid size, power of two");
    cmd->add_option("--steps", cfg.steps, "RK4 steps per period, power of two");
    cmd->add_option("--lambda-min", cfg.lambda_min, "window lower end");
    cmd->add_option("--lambda-max", cfg.lambda_max, "window upper end");
    cmd->add_option("--count", cfg.count, "maximum number of auxiliary eigenvalues");
    cmd->add_option("--eps", cfg.eps, "finite-difference amplitude");
    cmd->add_option("--out", cfg.out, "output directory");
  };
  CLI::App* disc = app.add_subcommand("discriminant", "write lambda,delta over the window");
  CLI::App* spec = app.add_subcommand("spectrum", "write auxiliary and periodic spectra");
  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  common(disc);
  common(spec);
  common(verify);
  std::string suite;
  verify->add_option("suite", suite, "lemma|gradients|theorem1|theorem2|hamiltonian|all")
      ->required()
      ->check(CLI::IsMember({"lemma", "gradients", "theorem1", "theorem2", "hamiltonian", "all"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (cfg.count < 0) throw ValidationError("--count must be non-negative");
    if (!(cfg.eps > 0.0)) throw ValidationError("--eps must be positive");
    if (*disc) return cmd_discriminant(cfg);
    if (*spec) return cmd_spectrum(cfg);
    return cmd_verify(cfg, suite);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kFail;
  }
}
