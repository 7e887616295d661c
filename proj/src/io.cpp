#include "chspec/io.hpp"

#include <fstream>
#include <ostream>
#include <string>

#include "chspec/errors.hpp"

namespace chspec {
namespace {

using nlohmann::json;

double number(const json& obj, const char* key) {
  if (!obj.contains(key)) throw ValidationError(std::string("missing field \"") + key + "\"");
  if (!obj.at(key).is_number()) throw ValidationError(std::string("field \"") + key + "\" must be a number");
  return obj.at(key).get<double>();
}

std::vector<double> number_list(const json& obj, const char* key) {
  if (!obj.contains(key)) return {};
  const json& arr = obj.at(key);
  if (!arr.is_array()) throw ValidationError(std::string("field \"") + key + "\" must be an array");
  std::vector<double> out;
  for (const json& v : arr) {
    if (!v.is_number()) throw ValidationError(std::string("field \"") + key + "\" must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

SmoothPart parse_smooth(const json& s) {
  if (!s.is_object()) throw ValidationError("\"smooth\" must be an object");
  if (!s.contains("kind") || !s.at("kind").is_string()) throw ValidationError("\"smooth.kind\" must be a string");
  const std::string kind = s.at("kind").get<std::string>();
  if (kind == "const") return SmoothPart::constant(number(s, "value"));
  if (kind == "fourier")
    return SmoothPart::fourier(s.contains("mean") ? number(s, "mean") : 0.0, number_list(s, "cos"),
                               number_list(s, "sin"));
  if (kind == "samples") {
    const std::vector<double> v = number_list(s, "values");
    return SmoothPart::samples(Eigen::Map<const Eigen::VectorXd>(v.data(), Eigen::Index(v.size())));
  }
  throw ValidationError("unknown smooth kind \"" + kind + "\"");
}

}  // namespace

PeriodicCoefficient parse_coefficient(const json& spec) {
  if (!spec.is_object()) throw ValidationError("coefficient configuration must be a JSON object");
  if (!spec.contains("smooth")) throw ValidationError("missing field \"smooth\"");
  SmoothPart smooth = parse_smooth(spec.at("smooth"));
  std::vector<Atom> atoms;
  if (spec.contains("atoms")) {
    if (!spec.at("atoms").is_array()) throw ValidationError("\"atoms\" must be an array");
    for (const json& a : spec.at("atoms")) {
      if (!a.is_object()) throw ValidationError("each atom must be an object");
      atoms.push_back(Atom{number(a, "q"), number(a, "p")});
    }
  }
  return PeriodicCoefficient(std::move(smooth), std::move(atoms));
}

PeriodicCoefficient load_coefficient(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open coefficient file " + path.string());
  json spec;
  try {
    in >> spec;
  } catch (const json::parse_error& e) {
    throw ValidationError("invalid JSON in " + path.string() + ": " + e.what());
  }
  return parse_coefficient(spec);
}

json to_json(const VerificationReport& report) {
  json residuals = json::array();
  for (Eigen::Index i = 0; i < report.residuals.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < report.residuals.cols(); ++j) row.push_back(report.residuals(i, j));
    residuals.push_back(std::move(row));
  }
  json meta = json::object();
  for (const auto& [k, v] : report.metadata) meta[k] = v;
  return json{{"identity", report.identity}, {"n", report.n},       {"residuals", residuals},
              {"tolerance", report.tolerance}, {"pass", report.pass}, {"metadata", meta}};
}

void write_discriminant_csv(std::ostream& out, const SpectralScan& scan) {
  out << "lambda,delta\n";
  for (Eigen::Index i = 0; i < scan.lambda.size(); ++i)
    out << format_double(scan.lambda[i]) << ',' << format_double(scan.delta[i]) << '\n';
}

void write_spectrum_csv(std::ostream& out, const AuxiliarySpectrum& aux, const PeriodicSpectrum& periodic) {
  out << "kind,index,lambda,rho,degenerate\n";
  for (const AuxiliaryPoint& p : aux.points)
    out << "aux," << p.index << ',' << format_double(p.mu) << ',' << format_double(p.rho) << ','
        << (p.degenerate ? 1 : 0) << '\n';
  int periodic_index = 0;
  int antiperiodic_index = 0;
  for (const BandEdge& e : periodic.edges) {
    const bool per = e.level > 0;
    out << (per ? "periodic," : "antiperiodic,") << (per ? periodic_index++ : antiperiodic_index++) << ','
        << format_double(e.lambda) << ',' << (per ? "1" : "-1") << ',' << (e.double_root ? 1 : 0) << '\n';
  }
}

void write_gradient_csv(std::ostream& out, const GradientField& mu, const GradientField& log_rho,
                        const GradientField& f, const GradientField& g) {
  out << "x,d_mu,d_logrho,d_f,d_g\n";
  const int n = mu.jet.n();
  for (int k = 0; k < n; ++k)
    out << format_double(double(k) / n) << ',' << format_double(mu.jet.value[k]) << ','
        << format_double(log_rho.jet.value[k]) << ',' << format_double(f.jet.value[k]) << ','
        << format_double(g.jet.value[k]) << '\n';
}

void write_bihamiltonian_csv(std::ostream& out, const BihamiltonianFields& fields) {
  out << "x,j_gradh2,k_gradh3,residual\n";
  for (Eigen::Index k = 0; k < fields.x.size(); ++k)
    out << format_double(fields.x[k]) << ',' << format_double(fields.j_grad_h2[k]) << ','
        << format_double(fields.k_grad_h3[k]) << ',' << format_double(fields.residual[k]) << '\n';
}

}  // namespace chspec
