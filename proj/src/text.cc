#include "luni/text.h"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <sstream>

#include "luni/equiv.h"

namespace luni {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error(fmt::format("{}:{}: {}", line, column, message)), line_(line), column_(column) {}

namespace {

enum class Tok : std::uint8_t {
  LIdent,
  UIdent,
  QIdent,
  Num,
  Loc,
  Backslash,
  Dot,
  Colon,
  Semi,
  Unif,
  Bar,
  LParen,
  RParen,
  Arrow,
  Equals,
  Fail,
  Fresh,
  Cons,
  Base,
  Def,
  End,
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::LIdent: return "variable";
    case Tok::UIdent: return "constructor";
    case Tok::QIdent: return "type variable";
    case Tok::Num: return "number";
    case Tok::Loc: return "location";
    case Tok::Backslash: return "`\\`";
    case Tok::Dot: return "`.`";
    case Tok::Colon: return "`:`";
    case Tok::Semi: return "`;`";
    case Tok::Unif: return "`=:=`";
    case Tok::Bar: return "`|`";
    case Tok::LParen: return "`(`";
    case Tok::RParen: return "`)`";
    case Tok::Arrow: return "`->`";
    case Tok::Equals: return "`=`";
    case Tok::Fail: return "`fail`";
    case Tok::Fresh: return "`fresh`";
    case Tok::Cons: return "`cons`";
    case Tok::Base: return "`base`";
    case Tok::Def: return "`def`";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (src.substr(i, 2) == "--") {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    const std::size_t l = line, cl = col;
    auto push = [&](Tok k, std::size_t n, std::string text = {}) {
      out.push_back({k, std::move(text), l, cl});
      advance(n);
    };
    if (src.substr(i, 3) == "=:=") {
      push(Tok::Unif, 3);
    } else if (src.substr(i, 2) == "->") {
      push(Tok::Arrow, 2);
    } else if (c == '\\') {
      push(Tok::Backslash, 1);
    } else if (c == '.') {
      push(Tok::Dot, 1);
    } else if (c == ':') {
      push(Tok::Colon, 1);
    } else if (c == ';') {
      push(Tok::Semi, 1);
    } else if (c == '|') {
      push(Tok::Bar, 1);
    } else if (c == '(') {
      push(Tok::LParen, 1);
    } else if (c == ')') {
      push(Tok::RParen, 1);
    } else if (c == '=') {
      push(Tok::Equals, 1);
    } else if (c == '@') {
      std::size_t j = i + 1;
      if (j >= src.size() || src[j] != 'L') throw ParseError(l, cl, "expected `@L<n>`");
      std::size_t k = j + 1;
      while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
      if (k == j + 1) throw ParseError(l, cl, "expected digits after `@L`");
      push(Tok::Loc, k - i, std::string(src.substr(j + 1, k - j - 1)));
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t k = i;
      while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
      push(Tok::Num, k - i, std::string(src.substr(i, k - i)));
    } else if (c == '\'' || std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t k = i + 1;
      while (k < src.size() && ident_char(src[k])) ++k;
      std::string word(src.substr(i, k - i));
      Tok kind = c == '\'' ? Tok::QIdent : std::isupper(static_cast<unsigned char>(c)) ? Tok::UIdent : Tok::LIdent;
      if (word == "fail") kind = Tok::Fail;
      if (word == "fresh") kind = Tok::Fresh;
      if (word == "cons") kind = Tok::Cons;
      if (word == "base") kind = Tok::Base;
      if (word == "def") kind = Tok::Def;
      if (kind == Tok::QIdent && word.size() < 2) throw ParseError(l, cl, "empty type variable name");
      push(kind, k - i, std::move(word));
    } else {
      throw ParseError(l, cl, fmt::format("unexpected character `{}`", c));
    }
  }
  out.push_back({Tok::End, {}, line, col});
  return out;
}

class Parser {
 public:
  Parser(std::string_view src, SourceFile& env) : toks_(lex(src)), env_(env) {}

  void declarations() {
    for (;;) {
      switch (peek().kind) {
        case Tok::Cons: {
          next();
          Token name = expect(Tok::UIdent);
          expect(Tok::Colon);
          Type a = type();
          expect(Tok::Dot);
          env_.signature.declare(ConsName(name.text), a);
          break;
        }
        case Tok::Base: {
          next();
          Token name = peek();
          if (name.kind != Tok::LIdent && name.kind != Tok::UIdent && name.kind != Tok::QIdent)
            fail_here("expected a base type name");
          next();
          expect(Tok::Equals);
          Token n = expect(Tok::Num);
          expect(Tok::Dot);
          auto& bases = env_.bases;
          auto it = std::find_if(bases.begin(), bases.end(), [&](const auto& b) { return b.first == name.text; });
          std::size_t count = std::stoul(n.text);
          if (it == bases.end()) {
            bases.emplace_back(name.text, count);
          } else {
            it->second = count;
          }
          break;
        }
        case Tok::Def: {
          next();
          Token name = expect(Tok::LIdent);
          expect(Tok::Equals);
          Term body = seq();
          expect(Tok::Dot);
          env_.defs.emplace_back(name.text, body);
          break;
        }
        default:
          return;
      }
    }
  }

  Program whole_program() {
    Program p = body();
    expect(Tok::End);
    return p;
  }

  Term whole_term() {
    Term t = seq();
    expect(Tok::End);
    return t;
  }

  Type whole_type() {
    Type a = type();
    expect(Tok::End);
    return a;
  }

  bool at_end() const { return peek().kind == Tok::End; }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }

  Token expect(Tok k) {
    if (peek().kind != k) fail_here(fmt::format("expected {}, found {}", describe(k), describe(peek().kind)));
    return next();
  }

  [[noreturn]] void fail_here(const std::string& msg) const { throw ParseError(peek().line, peek().column, msg); }

  static bool terminator(Tok k) { return k == Tok::RParen || k == Tok::Dot || k == Tok::End; }

  /// An abstraction body or the toplevel: threads, `fail`, or one
  /// parenthesized program spanning the whole body.
  Program body() {
    if (peek().kind == Tok::LParen) {
      const std::size_t save = pos_;
      try {
        next();
        Program p = body();
        expect(Tok::RParen);
        if (p.size() != 1 && terminator(peek().kind)) return p;
      } catch (const ParseError&) {
      }
      pos_ = save;
    }
    return threads();
  }

  Program threads() {
    std::vector<Term> out;
    do {
      if (accept(Tok::Fail)) continue;
      out.push_back(seq());
    } while (accept(Tok::Bar));
    return Program(std::move(out));
  }

  Term seq() {
    Term l = unif();
    if (accept(Tok::Semi)) return Term::guard(std::move(l), seq());
    return l;
  }

  Term unif() {
    Term l = app();
    if (accept(Tok::Unif)) {
      Term r = app();
      if (peek().kind == Tok::Unif) fail_here("`=:=` is not associative; add parentheses");
      return Term::unif(std::move(l), std::move(r));
    }
    return l;
  }

  static bool binder_start(Tok k) { return k == Tok::Backslash || k == Tok::Fresh; }
  static bool atom_start(Tok k) { return k == Tok::LIdent || k == Tok::UIdent || k == Tok::LParen; }

  Term app() {
    if (binder_start(peek().kind)) return binder();
    Term head = atom();
    for (;;) {
      if (binder_start(peek().kind)) return Term::app(std::move(head), binder());
      if (!atom_start(peek().kind)) return head;
      head = Term::app(std::move(head), atom());
    }
  }

  Term atom() {
    const Token& tok = peek();
    switch (tok.kind) {
      case Tok::LIdent: {
        next();
        return variable(tok);
      }
      case Tok::UIdent:
        next();
        return Term::cons(ConsName(tok.text));
      case Tok::LParen: {
        next();
        Program p = threads();
        expect(Tok::RParen);
        if (p.size() != 1)
          throw ParseError(tok.line, tok.column, "a parenthesized program is only allowed as a whole body");
        return p[0];
      }
      default:
        fail_here(fmt::format("expected a term, found {}", describe(tok.kind)));
    }
  }

  Term variable(const Token& tok) {
    Var x(tok.text);
    if (std::find(bound_.begin(), bound_.end(), x) != bound_.end()) return Term::var(x);
    for (auto it = env_.defs.rbegin(); it != env_.defs.rend(); ++it) {
      if (it->first != tok.text) continue;
      for (Var y : it->second.free_vars()) {
        if (std::find(bound_.begin(), bound_.end(), y) != bound_.end()) {
          throw ParseError(tok.line, tok.column,
                           fmt::format("inlining `{}` would capture variable `{}`", tok.text, y.name()));
        }
      }
      return it->second;
    }
    return Term::var(x);
  }

  Term binder() {
    if (accept(Tok::Fresh)) {
      Var x(expect(Tok::LIdent).text);
      std::optional<Type> ann;
      if (accept(Tok::Colon)) ann = type();
      expect(Tok::Dot);
      bound_.push_back(x);
      Term body = seq();
      bound_.pop_back();
      return Term::fresh(x, std::move(body), std::move(ann));
    }
    expect(Tok::Backslash);
    Var x(expect(Tok::LIdent).text);
    std::optional<Location> loc;
    if (peek().kind == Tok::Loc) loc = Location{static_cast<std::uint32_t>(std::stoul(next().text))};
    std::optional<Type> ann;
    if (accept(Tok::Colon)) ann = type();
    expect(Tok::Dot);
    bound_.push_back(x);
    Program p = body();
    bound_.pop_back();
    if (loc) return Term::abs_loc(*loc, x, std::move(p), std::move(ann));
    return Term::abs(x, std::move(p), std::move(ann));
  }

  Type type() {
    Type l = type_atom();
    if (accept(Tok::Arrow)) return Type::arrow(std::move(l), type());
    return l;
  }

  Type type_atom() {
    const Token& tok = peek();
    if (tok.kind == Tok::LIdent || tok.kind == Tok::UIdent || tok.kind == Tok::QIdent) {
      next();
      return Type::base(tok.text);
    }
    if (accept(Tok::LParen)) {
      Type a = type();
      expect(Tok::RParen);
      return a;
    }
    fail_here(fmt::format("expected a type, found {}", describe(tok.kind)));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  SourceFile& env_;
  std::vector<Var> bound_;
};

enum Prec { kSeq = 0, kUnif = 1, kApp = 2, kAtom = 3 };
enum class Tail : std::uint8_t { End, Bar, Other };

class Printer {
 public:
  std::string out;

  void program(const Program& p) {
    if (p.is_fail()) {
      out += "fail";
      return;
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i > 0) out += " | ";
      term(p[i], kSeq, i + 1 == p.size() ? Tail::End : Tail::Bar);
    }
  }

  void term(const Term& t, int prec, Tail tail) {
    switch (t.kind()) {
      case TermKind::Var:
        out += t.var().name();
        return;
      case TermKind::Cons:
        out += t.cons().name();
        return;
      case TermKind::Abs:
      case TermKind::AbsLoc: {
        const bool parens = tail != Tail::End;
        open(parens);
        out += '\\';
        out += t.var().name();
        if (t.is(TermKind::AbsLoc)) out += fmt::format("@L{}", t.location().id);
        annotation(t);
        out += ". ";
        program(t.body());
        close(parens);
        return;
      }
      case TermKind::Fresh: {
        const bool parens = tail == Tail::Other;
        open(parens);
        out += "fresh ";
        out += t.var().name();
        annotation(t);
        out += ". ";
        term(t.scope(), kSeq, parens ? Tail::End : tail);
        close(parens);
        return;
      }
      case TermKind::App:
        binary(t, prec, tail, kApp, kApp, kAtom, " ");
        return;
      case TermKind::Unif:
        binary(t, prec, tail, kUnif, kApp, kApp, " =:= ");
        return;
      case TermKind::Guard:
        binary(t, prec, tail, kSeq, kUnif, kSeq, " ; ");
        return;
    }
  }

 private:
  void binary(const Term& t, int prec, Tail tail, int own, int lprec, int rprec, const char* op) {
    const bool parens = prec > own;
    open(parens);
    term(t.left(), lprec, Tail::Other);
    out += op;
    term(t.right(), rprec, parens ? Tail::End : tail);
    close(parens);
  }

  void annotation(const Term& t) {
    if (t.annotation()) {
      out += " : ";
      out += t.annotation()->str();
    }
  }

  void open(bool parens) {
    if (parens) out += '(';
  }
  void close(bool parens) {
    if (parens) out += ')';
  }
};

}  // namespace

SourceFile parse_source(std::string_view text) {
  SourceFile f;
  Parser p(text, f);
  p.declarations();
  if (p.at_end()) throw ParseError(1, 1, "missing main program");
  f.main = p.whole_program();
  return f;
}

SourceFile parse_declarations(std::string_view text) {
  SourceFile f;
  Parser p(text, f);
  p.declarations();
  if (!p.at_end()) p.whole_program();
  return f;
}

Program parse_program(std::string_view text) {
  SourceFile f;
  return Parser(text, f).whole_program();
}

Program parse_program(std::string_view text, const SourceFile& env) {
  SourceFile copy = env;
  return Parser(text, copy).whole_program();
}

Term parse_term(std::string_view text) {
  SourceFile f;
  return Parser(text, f).whole_term();
}

Type parse_type(std::string_view text) {
  SourceFile f;
  return Parser(text, f).whole_type();
}

std::string pretty(const Term& t) {
  Printer p;
  p.term(t, kSeq, Tail::End);
  return std::move(p.out);
}

std::string pretty(const Program& p) {
  Printer pr;
  pr.program(p);
  return std::move(pr.out);
}

std::string pretty(const Type& a) { return a.str(); }

std::string pretty(const Substitution& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& [x, v] : s.sorted_by_name()) {
    if (!first) out += ", ";
    first = false;
    out += x.name();
    out += " := ";
    out += pretty(v);
  }
  out += "}";
  return out;
}

std::string print_source(const SourceFile& f) {
  std::string out;
  for (const auto& [c, a] : f.signature.declared()) out += fmt::format("cons {} : {}.\n", c.name(), a.str());
  for (const auto& [name, n] : f.bases) out += fmt::format("base {} = {}.\n", name, n);
  for (const auto& [name, t] : f.defs) out += fmt::format("def {} = {}.\n", name, pretty(t));
  out += pretty(f.main);
  out += '\n';
  return out;
}

std::string format_trace(const Program& initial, const std::vector<TraceStep>& trace) {
  std::string out = "#0 [init]\n" + pretty(initial) + "\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out += fmt::format("#{} [{}] thread={}\n", i + 1, to_string(trace[i].rule), trace[i].thread);
    out += pretty(trace[i].after);
    out += '\n';
  }
  return out;
}

TraceCheck validate_trace(std::string_view text, const SourceFile& env) {
  TraceCheck check;
  std::istringstream in{std::string(text)};
  std::string header, body;
  std::optional<Program> previous;
  std::size_t expected_index = 0;
  auto failure = [&](std::string msg) {
    check.ok = false;
    check.error = std::move(msg);
    return check;
  };
  while (std::getline(in, header)) {
    if (header.empty()) continue;
    if (!std::getline(in, body)) return failure(fmt::format("step {} has no program line", expected_index));
    std::size_t index = 0, thread = 0;
    char rule_buf[16] = {};
    if (expected_index == 0) {
      if (header != "#0 [init]") return failure("trace must start with `#0 [init]`");
    } else if (std::sscanf(header.c_str(), "#%zu [%15[a-z]] thread=%zu", &index, rule_buf, &thread) != 3 ||
               index != expected_index) {
      return failure(fmt::format("malformed step header `{}`", header));
    }
    Program current;
    try {
      current = parse_program(body, env);
    } catch (const ParseError& e) {
      return failure(fmt::format("step {}: {}", expected_index, e.what()));
    }
    if (previous) {
      auto rule = parse_rule_tag(rule_buf);
      if (!rule) return failure(fmt::format("step {}: unknown rule `{}`", index, rule_buf));
      if (thread >= previous->size()) return failure(fmt::format("step {}: no thread {}", index, thread));
      bool matched = false;
      LocationSupply supply = LocationSupply::after(*previous);
      for (const Redex& r : thread_redexes((*previous)[thread], thread)) {
        if (r.rule != *rule) continue;
        if (struct_equiv(fire(*previous, r, supply).after, current)) {
          matched = true;
          break;
        }
      }
      if (!matched) return failure(fmt::format("step {}: no {} redex in thread {} yields this program", index,
                                               rule_buf, thread));
      ++check.steps;
    }
    previous = std::move(current);
    ++expected_index;
  }
  if (!previous) return failure("empty trace");
  return check;
}

}  // namespace luni
