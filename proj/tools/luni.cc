#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "luni/denot.h"
#include "luni/eval.h"
#include "luni/harness.h"
#include "luni/hm.h"
#include "luni/repl.h"
#include "luni/text.h"
#include "luni/types.h"

namespace {

constexpr int kOk = 0;
constexpr int kProgramFailed = 1;
constexpr int kUsage = 2;
constexpr int kCounterexample = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t default_seed() {
  if (const char* s = std::getenv("LUNI_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring LUNI_SEED=" << s << "\n";
    }
  }
  return 7;
}

struct SuiteArgs {
  luni::SuiteOptions opts;
  bool verbose = false;
  std::string out;
};

void add_suite_options(CLI::App* cmd, SuiteArgs& a) {
  cmd->add_option("--samples", a.opts.samples, "Number of checked samples");
  cmd->add_option("--seed", a.opts.seed, "Generator seed (default: $LUNI_SEED or 7)");
  cmd->add_option("--fuel", a.opts.fuel, "Step bound per evaluation");
  cmd->add_option("--depth", a.opts.depth, "Maximum term depth");
  cmd->add_option("--bound", a.opts.max_states, "State bound for exhaustive exploration");
  cmd->add_option("--cap", a.opts.cap, "Largest type interpretation to enumerate");
  cmd->add_option("--workers", a.opts.workers, "Worker threads");
  cmd->add_flag("--verbose,-v", a.verbose, "Print one line per sample");
  cmd->add_option("--out", a.out, "Also write the counterexample to this file");
}

int report(const luni::SuiteReport& r, const SuiteArgs& a) {
  if (a.verbose)
    std::cout << r.text;
  else
    std::cout << r.summary << "\n";
  if (r.counterexample) {
    std::cout << r.counterexample.value();
    if (!a.out.empty()) std::ofstream(a.out) << r.counterexample.value();
  }
  return r.pass ? kOk : kCounterexample;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"luni: an interpreter and test bench for a lambda calculus with unification"};
  app.require_subcommand(1);

  std::string file;
  std::size_t fuel = 10000;
  std::string strategy_text = "leftmost";
  bool trace = false;
  auto* run = app.add_subcommand("run", "Evaluate the main program of a file");
  run->add_option("file", file, "Source file")->required();
  run->add_option("--fuel", fuel, "Step bound");
  run->add_option("--strategy", strategy_text, "leftmost, rightmost, random or random:<seed>");
  run->add_flag("--trace", trace, "Print every step");

  auto* check = app.add_subcommand("check", "Type-check the main program of a file");
  check->add_option("file", file, "Source file")->required();

  std::size_t cap = luni::kDefaultCap;
  auto* denote = app.add_subcommand("denote", "Print the toplevel denotation of the main program");
  denote->add_option("file", file, "Source file")->required();
  denote->add_option("--cap", cap, "Largest type interpretation to enumerate");

  auto* validate = app.add_subcommand("validate-trace", "Replay a trace printed by `run --trace`");
  validate->add_option("file", file, "Trace file")->required();
  std::string env_file;
  validate->add_option("--env", env_file, "Source file supplying declarations");

  std::string lambda;
  auto* hm = app.add_subcommand("hm", "Infer the principal type of a pure lambda term by translation");
  hm->add_option("term", lambda, "Lambda term, e.g. \"\\x. \\y. y x\"")->required();

  SuiteArgs conf, sound, subj;
  for (SuiteArgs* a : {&conf, &sound, &subj}) {
    a->opts.seed = default_seed();
    a->opts.workers = std::max(1u, std::thread::hardware_concurrency());
  }
  sound.opts.samples = 200;
  sound.opts.fuel = 50;
  sound.opts.depth = 3;
  subj.opts.samples = 300;
  subj.opts.fuel = 100;
  auto* tc = app.add_subcommand("test-confluence", "Property suite: confluence and evaluator agreement");
  add_suite_options(tc, conf);
  auto* ts = app.add_subcommand("test-soundness", "Property suite: denotational soundness");
  add_suite_options(ts, sound);
  auto* tsr = app.add_subcommand("test-subject-reduction", "Property suite: subject reduction");
  add_suite_options(tsr, subj);

  auto* repl = app.add_subcommand("repl", "Interactive read-eval-print loop");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*run) {
      luni::SourceFile src = luni::parse_source(read_file(file));
      auto strategy = luni::Strategy::parse(strategy_text);
      if (!strategy) {
        std::cerr << "error: unknown strategy " << strategy_text << "\n";
        return kUsage;
      }
      luni::EvalOptions opts;
      opts.record_trace = trace;
      luni::EvalResult r = luni::evaluate(src.main, fuel, *strategy, opts);
      if (trace)
        std::cout << luni::format_trace(src.main, r.trace);
      else
        std::cout << luni::pretty(r.program) << "\n";
      if (!r.normal()) {
        std::cerr << "out of fuel after " << r.steps << " steps\n";
        return kProgramFailed;
      }
      return r.program.is_fail() ? kProgramFailed : kOk;
    }
    if (*check) {
      luni::SourceFile src = luni::parse_source(read_file(file));
      luni::Inference inf = luni::infer({}, src.signature, src.main);
      std::cout << "main : " << luni::pretty(inf.type) << "\n";
      return kOk;
    }
    if (*denote) {
      luni::SourceFile src = luni::parse_source(read_file(file));
      luni::Inference inf = luni::infer({}, src.signature, src.main, true);
      luni::Model model(src.signature, luni::BaseInterp{{src.bases.begin(), src.bases.end()}}, cap);
      std::cout << luni::to_string(model.denote_toplevel(inf.annotated, inf.context)) << "\n";
      return kOk;
    }
    if (*validate) {
      luni::SourceFile env;
      if (!env_file.empty()) env = luni::parse_declarations(read_file(env_file));
      luni::TraceCheck c = luni::validate_trace(read_file(file), env);
      if (!c.ok) {
        std::cout << "invalid trace: " << c.error << "\n";
        return kProgramFailed;
      }
      std::cout << "valid trace, " << c.steps << " steps\n";
      return kOk;
    }
    if (*hm) {
      luni::Term t = luni::parse_term(lambda);
      luni::Term w = luni::hm_translate(t);
      std::cout << luni::pretty(w) << "\n";
      luni::HmResult r = luni::hm_infer(t);
      std::cout << luni::pretty(r.normal) << "\n";
      return r.type ? kOk : kProgramFailed;
    }
    if (*tc) return report(luni::confluence_suite(conf.opts), conf);
    if (*ts) return report(luni::soundness_suite(sound.opts), sound);
    if (*tsr) return report(luni::subject_reduction_suite(subj.opts), subj);
    if (*repl) {
      luni::ReplOptions opts;
      opts.prompt = "luni> ";
      luni::run_repl(std::cin, std::cout, opts);
      return kOk;
    }
  } catch (const luni::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const luni::TypeError& e) {
    std::cerr << "type error: " << e.what() << "\n";
    return kUsage;
  } catch (const luni::DenotError& e) {
    std::cerr << "denotation error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kOk;
}
