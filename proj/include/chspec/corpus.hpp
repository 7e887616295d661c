#pragma once

#include <string>
#include <vector>

#include "chspec/coefficient.hpp"

namespace chspec {

struct CorpusEntry {
  std::string name;
  PeriodicCoefficient m;
  bool smooth = true;  // no atoms
};

/// Built-in test coefficients.
std::vector<CorpusEntry> default_corpus();

/// Looks up an entry by name; throws ValidationError when unknown.
CorpusEntry corpus_entry(const std::string& name);

}  // namespace chspec
