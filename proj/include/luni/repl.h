#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>

namespace luni {

struct ReplOptions {
  std::size_t fuel = 10000;
  std::size_t cap = 4096;
  /// Printed before each line is read; empty for scripted input.
  std::string prompt;
};

/// Reads one declaration, meta-command or program per line. Declarations
/// accumulate; a program line is evaluated and its normal form printed.
/// Meta-commands: `:trace P`, `:type P`, `:denote P`, `:quit`.
/// Returns the number of lines that produced an error.
std::size_t run_repl(std::istream& in, std::ostream& out, const ReplOptions& opts = {});

}  // namespace luni
