#include "luni/harness.h"

#include <fmt/format.h>

#include <atomic>
#include <functional>
#include <thread>

#include "luni/equiv.h"
#include "luni/eval.h"
#include "luni/generate.h"
#include "luni/parallel.h"
#include "luni/text.h"

namespace luni {

namespace {

struct SampleResult {
  enum class Status : std::uint8_t { Ok, Skipped, Failed };
  Status status = Status::Ok;
  std::string line;
  std::vector<std::string> why;
};

void run_parallel(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    });
  for (auto& t : pool) t.join();
}

/// Draws batches until `want` samples were checked (skips do not count) or
/// the draw budget runs out. Results are reported in draw order.
SuiteReport run_suite(const std::string& name, const SuiteOptions& opts, const std::string& header,
                      const std::function<Program()>& draw,
                      const std::function<SampleResult(const Program&)>& check,
                      const std::function<std::string(const Program&, const std::vector<std::string>&)>& source) {
  SuiteReport rep;
  rep.name = name;
  std::string text = header + "\n";
  std::size_t drawn = 0;
  const std::size_t budget = opts.samples * 20 + 20;
  while (rep.checked < opts.samples && drawn < budget) {
    std::size_t want = std::min(opts.samples - rep.checked, budget - drawn);
    std::vector<Program> batch;
    for (std::size_t i = 0; i < want; ++i) batch.push_back(draw());
    std::vector<SampleResult> results(batch.size());
    run_parallel(batch.size(), opts.workers, [&](std::size_t i) {
      try {
        results[i] = check(batch[i]);
      } catch (const std::exception& e) {
        results[i] = {SampleResult::Status::Failed, fmt::format("error: {}", e.what()), {e.what()}};
      }
    });
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const SampleResult& r = results[i];
      text += fmt::format("#{} {}\n", drawn + i, r.line);
      switch (r.status) {
        case SampleResult::Status::Ok:
          ++rep.checked;
          break;
        case SampleResult::Status::Skipped:
          ++rep.skipped;
          break;
        case SampleResult::Status::Failed:
          ++rep.checked;
          ++rep.failures;
          if (!rep.counterexample) {
            std::vector<std::string> comments{fmt::format("{} counterexample: seed {}, sample {}", name, opts.seed, drawn + i)};
            comments.insert(comments.end(), r.why.begin(), r.why.end());
            rep.counterexample = source(batch[i], comments);
          }
          break;
      }
    }
    drawn += batch.size();
  }
  rep.pass = rep.failures == 0 && rep.checked >= opts.samples;
  rep.summary = fmt::format("{}: {} checked, {} skipped, {} failures: {}", name, rep.checked, rep.skipped, rep.failures,
                            rep.pass ? "PASS" : "FAIL");
  rep.text = text + rep.summary + "\n";
  return rep;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

}  // namespace

std::string counterexample_source(const Program& p, const ConsSignature& sigma,
                                  const std::vector<std::pair<std::string, std::size_t>>& bases,
                                  const std::vector<std::string>& comments) {
  std::string out;
  for (const std::string& c : comments) {
    std::size_t start = 0;
    for (;;) {
      std::size_t nl = c.find('\n', start);
      out += "-- " + c.substr(start, nl == std::string::npos ? std::string::npos : nl - start) + "\n";
      if (nl == std::string::npos) break;
      start = nl + 1;
    }
  }
  SourceFile f;
  f.signature = sigma;
  f.bases = bases;
  f.main = p;
  return out + print_source(f);
}

SuiteReport confluence_suite(const SuiteOptions& opts) {
  Generator gen(GeneratorConfig::untyped(opts.seed, opts.depth));
  std::string header = fmt::format("confluence seed={} samples={} depth={} fuel={} bound={}", opts.seed, opts.samples,
                                   opts.depth, opts.fuel, opts.max_states);
  auto check = [&](const Program& p) {
    SampleResult r;
    Reachable reach = reachable_normal_forms(p, opts.fuel, opts.max_states);
    bool confluent = true;
    for (std::size_t i = 1; i < reach.normal_forms.size(); ++i)
      if (!struct_equiv(reach.normal_forms[0], reach.normal_forms[i])) {
        confluent = false;
        r.why.push_back("normal forms " + pretty(reach.normal_forms[0]) + " and " + pretty(reach.normal_forms[i]) +
                        " differ");
        break;
      }

    EvalOptions eo;
    eo.record_trace = false;
    eo.check_every_step = false;
    EvalResult seq = evaluate(p, opts.fuel, Strategy::leftmost(), eo);
    ParNormalizeResult par = par_normalize(p, opts.fuel);
    // Both evaluators must agree whenever both finish; if only one finishes,
    // its result must match an exhaustively found normal form.
    bool agree = true;
    if (seq.normal() && par.normal) {
      agree = struct_equiv(seq.program, par.program);
    } else if (reach.status == Reachable::Status::Complete && !reach.normal_forms.empty()) {
      if (seq.normal()) agree = struct_equiv(seq.program, reach.normal_forms[0]);
      if (par.normal) agree = agree && struct_equiv(par.program, reach.normal_forms[0]);
    }
    if (!agree)
      r.why.push_back("sequential " + (seq.normal() ? pretty(seq.program) : std::string("out of fuel")) +
                      " vs parallel " + (par.normal ? pretty(par.program) : std::string("out of fuel")));

    r.status = confluent && agree ? SampleResult::Status::Ok : SampleResult::Status::Failed;
    r.line = fmt::format("{} states={} normal_forms={} sequential={} parallel={} {}", to_string(reach.status),
                         reach.states, reach.normal_forms.size(), seq.normal() ? "normal" : "fuel",
                         par.normal ? "normal" : "fuel", r.status == SampleResult::Status::Ok ? "ok" : "FAIL");
    return r;
  };
  auto source = [&](const Program& p, const std::vector<std::string>& comments) {
    return counterexample_source(p, {}, {}, comments);
  };
  return run_suite("confluence", opts, header, [&] { return gen.next(); }, check, source);
}

SuiteReport soundness_suite(const SuiteOptions& opts) {
  GeneratorConfig cfg = GeneratorConfig::typed(opts.seed, opts.depth);
  Generator gen(cfg);
  const std::vector<std::pair<std::string, std::size_t>> bases{{"iota", 1}};
  std::string header = fmt::format("soundness seed={} samples={} depth={} fuel={} cap={}", opts.seed, opts.samples,
                                   opts.depth, opts.fuel, opts.cap);
  auto check = [&](const Program& p) {
    SampleResult r;
    Model model(cfg.signature, BaseInterp{{bases.begin(), bases.end()}}, opts.cap);
    SoundnessReport s;
    try {
      s = soundness_check(model, cfg.gamma, p, opts.fuel);
    } catch (const DenotError& e) {
      r.status = SampleResult::Status::Skipped;
      r.line = fmt::format("skipped ({})", e.kind() == DenotError::Kind::TooLarge ? "too large" : "not denotable");
      return r;
    }
    std::size_t strict = 0;
    for (const std::string& l : s.lines)
      if (l.find(" strict ") != std::string::npos) ++strict;
    r.status = s.pass ? SampleResult::Status::Ok : SampleResult::Status::Failed;
    r.line = fmt::format("steps={} strict={} normal={} size={} {}", s.steps, strict, yes_no(s.normal),
                         s.initial.size(), s.pass ? "ok" : "FAIL");
    if (!s.pass) {
      r.why = s.lines;
      if (!s.error.empty()) r.why.push_back(s.error);
    }
    return r;
  };
  auto source = [&](const Program& p, const std::vector<std::string>& comments) {
    return counterexample_source(p, cfg.signature, bases, comments);
  };
  return run_suite("soundness", opts, header, [&] { return gen.next(); }, check, source);
}

SuiteReport subject_reduction_suite(const SuiteOptions& opts) {
  GeneratorConfig cfg = GeneratorConfig::typed(opts.seed, opts.depth);
  Generator gen(cfg);
  std::string header =
      fmt::format("subject-reduction seed={} samples={} depth={} fuel={}", opts.seed, opts.samples, opts.depth, opts.fuel);
  auto check = [&](const Program& p) {
    SampleResult r;
    SubjectReductionReport s = subject_reduction_check(cfg.gamma, cfg.signature, p, opts.fuel);
    r.status = s.pass ? SampleResult::Status::Ok : SampleResult::Status::Failed;
    r.line = fmt::format("type={} steps={} normal={} {}", s.type.str(), s.steps, yes_no(s.normal),
                         s.pass ? "ok" : "FAIL");
    if (!s.pass) {
      r.why = s.lines;
      if (!s.error.empty()) r.why.push_back(s.error);
    }
    return r;
  };
  auto source = [&](const Program& p, const std::vector<std::string>& comments) {
    return counterexample_source(p, cfg.signature, {}, comments);
  };
  return run_suite("subject-reduction", opts, header, [&] { return gen.next(); }, check, source);
}

}  // namespace luni
