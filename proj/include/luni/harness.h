#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "luni/denot.h"
#include "luni/syntax.h"
#include "luni/types.h"

namespace luni {

struct SuiteOptions {
  std::uint64_t seed = 7;
  std::size_t samples = 500;
  std::size_t fuel = 200;
  std::size_t max_states = 10000;
  int depth = 4;
  std::size_t cap = kDefaultCap;
  /// Samples are checked on this many threads; the report does not depend
  /// on it.
  unsigned workers = 1;
};

struct SuiteReport {
  std::string name;
  bool pass = true;
  std::size_t checked = 0;
  std::size_t skipped = 0;
  std::size_t failures = 0;
  /// Header, one line per sample in sample order, and a summary line.
  std::string text;
  std::string summary;
  /// Loadable source of the first failing sample.
  std::optional<std::string> counterexample;
};

/// Untyped samples: every reachable normal form is ≡ to every other, and
/// the leftmost evaluator and the maximal parallel evaluator agree.
SuiteReport confluence_suite(const SuiteOptions& opts);
/// Typed, denotable samples: the toplevel denotation never grows along a
/// reduction and stays equal except on fail steps.
SuiteReport soundness_suite(const SuiteOptions& opts);
/// Typed samples keep their type after every step.
SuiteReport subject_reduction_suite(const SuiteOptions& opts);

/// A self-contained source file holding `p`, preceded by `--` comment lines.
std::string counterexample_source(const Program& p, const ConsSignature& sigma,
                                  const std::vector<std::pair<std::string, std::size_t>>& bases,
                                  const std::vector<std::string>& comments);

}  // namespace luni
