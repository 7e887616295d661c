#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "chspec/coefficient.hpp"
#include "chspec/floquet.hpp"
#include "chspec/hamiltonians.hpp"
#include "chspec/report.hpp"
#include "chspec/variations.hpp"

namespace chspec {

/// Coefficient configuration:
///   {"smooth": {"kind": "const", "value": c}
///            | {"kind": "fourier", "mean": a0, "cos": [...], "sin": [...]}
///            | {"kind": "samples", "values": [...]},
///    "atoms": [{"q": 0.3, "p": 1.0}, ...]}
PeriodicCoefficient parse_coefficient(const nlohmann::json& spec);
PeriodicCoefficient load_coefficient(const std::filesystem::path& path);

nlohmann::json to_json(const VerificationReport& report);

/// lambda,delta
void write_discriminant_csv(std::ostream& out, const SpectralScan& scan);
/// kind,index,lambda,rho,degenerate
void write_spectrum_csv(std::ostream& out, const AuxiliarySpectrum& aux, const PeriodicSpectrum& periodic);
/// x,d_mu,d_logrho,d_f,d_g on the periodic grid k / n, k < n
void write_gradient_csv(std::ostream& out, const GradientField& mu, const GradientField& log_rho,
                        const GradientField& f, const GradientField& g);
/// x,j_gradh2,k_gradh3,residual
void write_bihamiltonian_csv(std::ostream& out, const BihamiltonianFields& fields);

}  // namespace chspec
