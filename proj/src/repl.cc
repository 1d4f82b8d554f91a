#include "luni/repl.h"

#include <istream>
#include <ostream>

#include "luni/denot.h"
#include "luni/eval.h"
#include "luni/text.h"
#include "luni/types.h"

namespace luni {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool starts_with_word(const std::string& line, std::string_view word) {
  return line.size() > word.size() && line.starts_with(word) && (line[word.size()] == ' ' || line[word.size()] == '\t');
}

}  // namespace

std::size_t run_repl(std::istream& in, std::ostream& out, const ReplOptions& opts) {
  std::string decls;
  SourceFile env;
  std::size_t errors = 0;
  std::string raw;
  for (;;) {
    if (!opts.prompt.empty()) out << opts.prompt << std::flush;
    if (!std::getline(in, raw)) break;
    std::string line = trim(raw);
    if (line.empty() || line.starts_with("--")) continue;
    try {
      if (line == ":quit" || line == ":q") break;
      if (starts_with_word(line, "cons") || starts_with_word(line, "base") || starts_with_word(line, "def")) {
        std::string next = decls + line + "\n";
        env = parse_declarations(next);
        decls = std::move(next);
        continue;
      }
      if (line.starts_with(":trace ")) {
        Program p = parse_program(line.substr(7), env);
        EvalResult r = evaluate(p, opts.fuel);
        out << format_trace(p, r.trace);
        if (!r.normal()) out << "out of fuel\n";
        continue;
      }
      if (line.starts_with(":type ")) {
        Program p = parse_program(line.substr(6), env);
        Inference inf = infer({}, env.signature, p, true);
        out << pretty(inf.type) << "\n";
        continue;
      }
      if (line.starts_with(":denote ")) {
        Program p = parse_program(line.substr(8), env);
        Inference inf = infer({}, env.signature, p, true);
        Model model(env.signature, BaseInterp{{env.bases.begin(), env.bases.end()}}, opts.cap);
        out << to_string(model.denote_toplevel(inf.annotated, inf.context)) << "\n";
        continue;
      }
      if (line.starts_with(":")) {
        ++errors;
        out << "error: unknown command " << line.substr(0, line.find(' ')) << "\n";
        continue;
      }
      EvalOptions eo;
      eo.record_trace = false;
      EvalResult r = evaluate(parse_program(line, env), opts.fuel, Strategy::leftmost(), eo);
      out << pretty(r.program) << "\n";
      if (!r.normal()) out << "out of fuel after " << r.steps << " steps\n";
    } catch (const std::exception& e) {
      ++errors;
      out << "error: " << e.what() << "\n";
    }
  }
  return errors;
}

}  // namespace luni
