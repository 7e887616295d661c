#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "chspec/errors.hpp"
#include "chspec/io.hpp"

using namespace chspec;
using nlohmann::json;

TEST_CASE("coefficient configurations parse") {
  const PeriodicCoefficient c = parse_coefficient(json::parse(R"({"smooth": {"kind": "const", "value": 2.5}})"));
  CHECK(c.smooth_value(0.3) == 2.5);
  CHECK_FALSE(c.has_atoms());

  const PeriodicCoefficient f = parse_coefficient(json::parse(
      R"({"smooth": {"kind": "fourier", "mean": 1.0, "cos": [0.25, 0.0], "sin": [0.0, 0.1]},
          "atoms": [{"q": 0.7, "p": -0.5}, {"q": 0.3, "p": 1.0}]})"));
  CHECK(f.smooth_value(0.0) == doctest::Approx(1.25));
  REQUIRE(f.atoms().size() == 2);
  CHECK(f.atoms()[0].q == 0.3);
  CHECK(f.atoms()[1].p == -0.5);

  const PeriodicCoefficient s =
      parse_coefficient(json::parse(R"({"smooth": {"kind": "samples", "values": [1, 2, 3, 4, 5, 6, 7, 8]}})"));
  CHECK(s.smooth_value(0.25) == doctest::Approx(3.0));
}

TEST_CASE("malformed configurations are rejected") {
  for (const char* text : {R"({})", R"([])", R"({"smooth": {"kind": "spline"}})", R"({"smooth": {"kind": "const"}})",
                           R"({"smooth": {"kind": "const", "value": "1"}})",
                           R"({"smooth": {"kind": "const", "value": 1}, "atoms": [{"q": 1.2, "p": 1}]})",
                           R"({"smooth": {"kind": "const", "value": 1}, "atoms": {"q": 0.2}})",
                           R"({"smooth": {"kind": "fourier", "cos": [1, "a"]}})"}) {
    CAPTURE(text);
    CHECK_THROWS_AS(parse_coefficient(json::parse(text)), ValidationError);
  }
  CHECK_THROWS_AS(load_coefficient("/nonexistent/coefficient.json"), ValidationError);
}

TEST_CASE("coefficient files load") {
  const auto path = std::filesystem::temp_directory_path() / "chspec_io_test.json";
  std::ofstream(path) << R"({"smooth": {"kind": "const", "value": 0.0}, "atoms": [{"q": 0.3, "p": 1.0}]})";
  CHECK(load_coefficient(path).atoms()[0].q == 0.3);
  std::ofstream(path) << "{not json";
  CHECK_THROWS_AS(load_coefficient(path), ValidationError);
  std::filesystem::remove(path);
}

TEST_CASE("reports serialise with the documented keys") {
  VerificationReport r;
  r.identity = "demo";
  r.n = 64;
  r.residuals = Eigen::MatrixXd::Constant(1, 2, 0.1);
  r.tolerance = 1.0;
  r.metadata["note"] = "x";
  r.finalize();
  const json j = to_json(r);
  CHECK(j.at("identity") == "demo");
  CHECK(j.at("n") == 64);
  CHECK(j.at("residuals").size() == 1);
  CHECK(j.at("residuals")[0][1].get<double>() == 0.1);
  CHECK(j.at("pass") == true);
  CHECK(j.at("metadata").at("note") == "x");

  const VerificationReport f = failed_report("demo", "broken", 8);
  CHECK_FALSE(f.pass);
  CHECK(f.metadata.at("error") == "broken");
}

TEST_CASE("floats are written with 17 significant digits") {
  const double v = 0.1 + 0.2;
  CHECK(format_double(v) == "0.30000000000000004");
  CHECK(std::strtod(format_double(1.0 / 3.0).c_str(), nullptr) == 1.0 / 3.0);
}

TEST_CASE("CSV writers") {
  SpectralScan scan;
  std::ostringstream empty;
  write_discriminant_csv(empty, scan);
  CHECK(empty.str() == "lambda,delta\n");

  scan.lambda = Eigen::Vector2d(0.0, 0.5);
  scan.delta = Eigen::Vector2d(1.5, 0.25);
  std::ostringstream two;
  write_discriminant_csv(two, scan);
  CHECK(two.str() == "lambda,delta\n0,1.5\n0.5,0.25\n");

  AuxiliarySpectrum aux;
  AuxiliaryPoint p;
  p.index = 1;
  p.mu = 4.5;
  p.rho = -1.0;
  p.degenerate = true;
  aux.points.push_back(p);
  PeriodicSpectrum spec;
  spec.edges.push_back(BandEdge{0.25, 1, false, false});
  spec.edges.push_back(BandEdge{4.0, -1, false, true});
  std::ostringstream table;
  write_spectrum_csv(table, aux, spec);
  CHECK(table.str() ==
        "kind,index,lambda,rho,degenerate\naux,1,4.5,-1,1\nperiodic,0,0.25,1,0\nantiperiodic,0,4,-1,0\n");
}
