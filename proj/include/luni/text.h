#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "luni/eval.h"
#include "luni/syntax.h"
#include "luni/type.h"
#include "luni/types.h"

namespace luni {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct SourceFile {
  ConsSignature signature;
  /// Declared atom counts per base type, in declaration order.
  std::vector<std::pair<std::string, std::size_t>> bases;
  /// Definitions as written (already inlined into later definitions).
  std::vector<std::pair<std::string, Term>> defs;
  Program main;
};

/// Declarations followed by exactly one main program.
SourceFile parse_source(std::string_view text);
/// Declarations only; the main program is left empty.
SourceFile parse_declarations(std::string_view text);
Program parse_program(std::string_view text);
Term parse_term(std::string_view text);
Type parse_type(std::string_view text);

/// Parses one program against the declarations of `env` (definitions are
/// inlined).
Program parse_program(std::string_view text, const SourceFile& env);

std::string pretty(const Term& t);
std::string pretty(const Program& p);
std::string pretty(const Type& a);
std::string pretty(const Substitution& s);
std::string print_source(const SourceFile& f);

/// `#0 [init]` followed by the initial program, then one
/// `#n [rule] thread=i` header per step followed by the resulting program.
std::string format_trace(const Program& initial, const std::vector<TraceStep>& trace);

struct TraceCheck {
  bool ok = true;
  std::size_t steps = 0;
  std::string error;
};

/// Replays a printed trace: each step must be reproducible from the previous
/// program by a redex of the named rule in the named thread, up to ≡.
TraceCheck validate_trace(std::string_view text, const SourceFile& env = {});

}  // namespace luni
