#include "chspec/corpus.hpp"

#include <cmath>
#include <numbers>

#include "chspec/errors.hpp"

namespace chspec {

std::vector<CorpusEntry> default_corpus() {
  const double shift = 2.0 * std::numbers::pi * 0.15;
  std::vector<CorpusEntry> out;
  out.push_back({"constant", PeriodicCoefficient(SmoothPart::constant(1.0), {}), true});
  out.push_back({"cos03", PeriodicCoefficient(SmoothPart::fourier(1.0, {0.3}, {}), {}), true});
  out.push_back({"mixed", PeriodicCoefficient(SmoothPart::fourier(1.0, {0.25, 0.0}, {0.0, 0.1}), {}), true});
  // 1 + 0.3 cos(2 pi (x - 0.15)): breaks the reflection symmetry of cos03.
  out.push_back({"shifted_cos",
                 PeriodicCoefficient(SmoothPart::fourier(1.0, {0.3 * std::cos(shift)}, {0.3 * std::sin(shift)}), {}),
                 true});
  out.push_back({"peakon_q03", PeriodicCoefficient(SmoothPart::constant(0.0), {Atom{0.3, 1.0}}), false});
  out.push_back({"peakon_q05", PeriodicCoefficient(SmoothPart::constant(0.0), {Atom{0.5, 1.0}}), false});
  return out;
}

CorpusEntry corpus_entry(const std::string& name) {
  for (CorpusEntry& e : default_corpus())
    if (e.name == name) return std::move(e);
  throw ValidationError("unknown corpus entry \"" + name + "\"");
}

}  // namespace chspec
