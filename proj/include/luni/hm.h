#pragma once

#include <cstddef>
#include <optional>

#include "luni/syntax.h"

namespace luni {

/// The constructor encoding arrow types: `A -> B` is `F A B`.
ConsName arrow_cons();

/// Translates a pure λ-term (variables, application and single-threaded
/// abstraction) into a program computing its principal type, encoded with
/// `F`. Each λ-variable `x` becomes the type variable `a_x`; application
/// results get `r1`, `r2`, ... Throws std::invalid_argument on other forms.
Term hm_translate(const Term& lambda);

struct HmResult {
  /// Normal form of the translation: one thread holding the type, or fail.
  Program normal;
  /// Set when the term is typable.
  std::optional<Term> type;
  bool out_of_fuel = false;
};

HmResult hm_infer(const Term& lambda, std::size_t fuel = 10000);

}  // namespace luni
