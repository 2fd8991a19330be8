// numloop CLI: analyze | adorn | check | explain over a single program file.
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "numloop/driver.hpp"
#include "numloop/oracle.hpp"
#include "numloop/parse.hpp"
#include "numloop/prep.hpp"
#include "numloop/print.hpp"
#include "numloop/report.hpp"
#include "json.hpp"

namespace {

using namespace numloop;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// "p/2" -> PredRef. Used by --query.
PredRef parse_pred_ref(const std::string& s) {
  auto slash = s.rfind('/');
  if (slash == std::string::npos || slash == 0 || slash + 1 >= s.size())
    throw InputError("expected predicate reference name/arity, got: " + s);
  PredRef r;
  r.name = s.substr(0, slash);
  try {
    r.arity = std::stoi(s.substr(slash + 1));
  } catch (const std::exception&) {
    throw InputError("bad arity in predicate reference: " + s);
  }
  return r;
}

// "lo..hi" -> pair. Used by --box.
std::pair<long, long> parse_box(const std::string& s) {
  auto dots = s.find("..");
  if (dots == std::string::npos)
    throw InputError("expected box as lo..hi, got: " + s);
  try {
    long lo = std::stol(s.substr(0, dots));
    long hi = std::stol(s.substr(dots + 2));
    if (lo > hi) throw InputError("empty box: " + s);
    return {lo, hi};
  } catch (const InputError&) {
    throw;
  } catch (const std::exception&) {
    throw InputError("expected box as lo..hi, got: " + s);
  }
}

PredRef resolve_query(const Program& p, const std::string& query_flag) {
  if (!query_flag.empty()) return parse_pred_ref(query_flag);
  auto target = p.analyze_target();
  if (!target)
    throw InputError("no analyze directive in program and no --query given");
  return *target;
}

int run_analyze(const Program& p, const PredRef& q, const InferOpts& opts,
                const std::string& format, const RenderOpts& ropts) {
  TerminationReport rep = infer(p, q, opts);
  if (format == "json")
    std::cout << report_json(rep, ropts) << "\n";
  else
    std::cout << report_text(rep, ropts);
  return 0;
}

int run_adorn(const Program& p, const PredRef& q, bool extend,
              const std::string& format) {
  AdornedProgram pa = adorn_once(p, q, extend);
  if (format == "json") {
    nlohmann::json j;
    j["clauses"] = nlohmann::json::array();
    for (const Clause& c : pa.program.clauses) j["clauses"].push_back(render_clause(c));
    j["bridges"] = nlohmann::json::array();
    for (const Clause& c : pa.bridges) j["bridges"].push_back(render_clause(c));
    std::cout << j.dump(2) << "\n";
  } else {
    for (const Clause& c : pa.program.clauses) std::cout << render_clause(c) << "\n";
    if (!pa.bridges.empty()) std::cout << "% bridges\n";
    for (const Clause& c : pa.bridges) std::cout << render_clause(c) << "\n";
  }
  return 0;
}

// All ground queries q(v1..vk) with each vi in [lo,hi]. The sweep that
// `check` uses both for condition validation and semantics preservation.
std::vector<std::vector<Atom>> box_queries(const PredRef& q, long lo, long hi) {
  std::vector<std::vector<Atom>> out;
  std::vector<long> tuple(static_cast<size_t>(q.arity), lo);
  if (q.arity == 0) {
    Atom a;
    a.pred = q.name;
    out.push_back({a});
    return out;
  }
  for (;;) {
    Atom a;
    a.pred = q.name;
    for (long v : tuple) a.args.push_back(Term::integer(Int(v)));
    out.push_back({a});
    size_t k = 0;
    for (; k < tuple.size(); ++k) {
      if (++tuple[k] <= hi) break;
      tuple[k] = lo;
    }
    if (k == tuple.size()) break;
  }
  return out;
}

int run_check(const Program& p, const PredRef& q, const InferOpts& opts,
              long lo, long hi, long steps, const std::string& format,
              const RenderOpts& ropts) {
  TerminationReport rep = infer(p, q, opts);
  ValidationReport vr = validate_condition(p, q, rep.condition, Int(lo), Int(hi), steps);
  AdornedProgram pa = adorn_once(p, q, opts.extend);
  Program merged = pa.program;
  for (const Clause& b : pa.bridges) merged.clauses.push_back(b);
  merged.reindex();
  ComparisonReport cr = compare_semantics(p, merged, box_queries(q, lo, hi), steps);

  bool ok = vr.passed() && cr.passed();
  if (format == "json") {
    nlohmann::json j;
    j["query"] = q.key();
    j["condition"] = render_cond(rep.condition, ropts);
    j["validation"] = {{"checked", vr.checked},
                       {"skipped", vr.skipped},
                       {"violations", vr.violations}};
    j["preservation"] = {{"queries", cr.queries}, {"mismatches", cr.mismatches}};
    j["passed"] = ok;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << q.key() << " terminates if: " << render_cond(rep.condition, ropts)
              << "\n";
    std::cout << "condition check: " << vr.checked << " tuples in condition, "
              << vr.skipped << " outside, " << vr.violations.size()
              << " violations\n";
    for (const auto& v : vr.violations) std::cout << "  violation: " << v << "\n";
    std::cout << "semantics check: " << cr.queries << " queries, "
              << cr.mismatches.size() << " mismatches\n";
    for (const auto& m : cr.mismatches) std::cout << "  mismatch: " << m << "\n";
    std::cout << (ok ? "check passed\n" : "check FAILED\n");
  }
  return ok ? 0 : 1;
}

int run_explain(const Program& p, const PredRef& q, InferOpts opts,
                const std::string& format, const RenderOpts& ropts) {
  opts.emit_constraints = true;
  TerminationReport rep = infer(p, q, opts);
  if (format == "json") {
    std::cout << report_json(rep, ropts) << "\n";
    return 0;
  }
  for (const RoundTrace& t : rep.trace) {
    std::cout << "round " << t.round << ":\n";
    for (const auto& [pred, conds] : t.adornment_sets) {
      std::cout << "  adornments of " << pred << ":\n";
      for (const Cond& c : conds) std::cout << "    " << render_cond(c, ropts) << "\n";
    }
    std::cout << "  adorned clauses: " << t.adorned_clauses
              << ", bridges: " << t.bridges << ", obligations: " << t.obligations
              << "\n";
    for (const auto& e : t.events) std::cout << "  " << e << "\n";
    if (!t.system_dump.empty()) {
      std::istringstream lines(t.system_dump);
      for (std::string line; std::getline(lines, line);)
        std::cout << "    " << line << "\n";
    }
  }
  std::cout << report_text(rep, ropts);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"termination condition inference for numerical logic programs"};
  app.require_subcommand(1);

  std::string file, query_flag, format = "text", box = "-10..10";
  std::optional<int> max_iter;
  bool no_extend = false, emit_constraints = false, pretty_strict = false;
  long steps = 100000;

  auto add_common = [&](CLI::App* sub, bool with_box) {
    sub->add_option("file", file, "program file")->required();
    sub->add_option("--query", query_flag, "query predicate as name/arity");
    sub->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
    sub->add_flag("--pretty-strict", pretty_strict,
                  "render x >= c+1 as x > c (and the =< counterpart)");
    sub->add_option("--max-iter", max_iter, "inference round limit");
    sub->add_flag("--no-extend", no_extend,
                  "disable adornment extension between rounds");
    if (with_box) {
      sub->add_option("--box", box, "value range lo..hi for ground sweeps");
      sub->add_option("--steps", steps, "step budget per query");
    }
  };

  CLI::App* analyze = app.add_subcommand("analyze", "infer a termination condition");
  analyze->add_flag("--emit-constraints", emit_constraints,
                    "include constraint systems in the trace");
  add_common(analyze, false);
  CLI::App* adorn = app.add_subcommand("adorn", "print the adorned program");
  add_common(adorn, false);
  CLI::App* check = app.add_subcommand(
      "check", "validate the inferred condition against bounded execution");
  add_common(check, true);
  CLI::App* explain =
      app.add_subcommand("explain", "show per-round inference details");
  add_common(explain, false);

  CLI11_PARSE(app, argc, argv);

  try {
    numloop::Program p = numloop::parse_program(slurp(file));
    numloop::PredRef q = resolve_query(p, query_flag);
    numloop::InferOpts opts;
    opts.extend = !no_extend;
    opts.max_iter = max_iter;
    opts.emit_constraints = emit_constraints;
    numloop::RenderOpts ropts;
    ropts.pretty_strict = pretty_strict;
    if (app.got_subcommand(analyze)) return run_analyze(p, q, opts, format, ropts);
    if (app.got_subcommand(adorn)) return run_adorn(p, q, opts.extend, format);
    if (app.got_subcommand(check)) {
      auto [lo, hi] = parse_box(box);
      return run_check(p, q, opts, lo, hi, steps, format, ropts);
    }
    return run_explain(p, q, opts, format, ropts);
  } catch (const numloop::InputError& e) {
    std::cerr << "error";
    if (e.line > 0) std::cerr << " at " << e.line << ":" << e.column;
    std::cerr << ": " << e.what() << "\n";
    return 1;
  } catch (const numloop::CapacityError& e) {
    std::cerr << "capacity exceeded: " << e.what() << "\n";
    return 2;
  }
}
