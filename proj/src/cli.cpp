#include "painleve/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "painleve/report.hpp"

namespace painleve {

namespace {

struct RunConfig {
  std::string command;
  std::string builtin;
  std::string file;
  std::string square;
  std::optional<std::string> lambda;
  std::optional<std::string> C;
  std::optional<int> order;
  std::string mode;
  std::string params;
  std::optional<int> precision;
  std::string format = "text";
  std::optional<int> candidate;
  std::optional<int> branch;
  std::string grid;
  int power = 50;
  int denominator_bound = 2;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

QuadExt exact_value(const std::string& text, const std::string& what) {
  try {
    return QuadExt::parse(text);
  } catch (const std::exception& e) {
    throw UsageError("invalid " + what + " '" + text + "': " + e.what());
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::map<std::string, QuadExt> parse_params(const std::string& text) {
  std::map<std::string, QuadExt> out;
  if (text.empty()) return out;
  for (const auto& item : split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("parameter '" + item + "' is not name=value");
    const std::string name = item.substr(0, eq);
    if (out.count(name)) throw UsageError("parameter " + name + " given twice");
    out.emplace(name, exact_value(item.substr(eq + 1), "value of " + name));
  }
  return out;
}

std::vector<std::vector<QuadExt>> parse_grid(const std::string& text) {
  std::vector<std::vector<QuadExt>> out;
  for (const auto& row : split(text, ';')) {
    if (row.empty()) continue;
    std::vector<QuadExt> vals;
    for (const auto& v : split(row, ':')) vals.push_back(exact_value(v, "grid value"));
    out.push_back(std::move(vals));
  }
  if (out.empty()) throw UsageError("empty grid");
  return out;
}

struct LoadedSystem {
  PolyODESystem system;
  std::string source;
};

LoadedSystem load_system(const RunConfig& cfg, std::istream& in) {
  if (cfg.builtin.empty() == cfg.file.empty()) throw UsageError("give exactly one of --builtin or --file");
  LoadedSystem L;
  if (!cfg.builtin.empty()) {
    const bool z = cfg.builtin == "hh-z";
    const QuadExt lambda = exact_value(cfg.lambda.value_or(z ? "1/9" : "1"), "--lambda");
    const QuadExt C = exact_value(cfg.C.value_or(z ? "-16/5" : "1"), "--C");
    L.system = henon_heiles(lambda, C);
    if (z) L.system = square_substitute(L.system, "x");
    L.source = cfg.builtin;
  } else {
    if (cfg.lambda || cfg.C) throw UsageError("--lambda and --C apply to builtin systems only");
    std::string text;
    if (cfg.file == "-") {
      std::ostringstream ss;
      ss << in.rdbuf();
      text = ss.str();
    } else {
      std::ifstream f(cfg.file);
      if (!f) throw UsageError("cannot read " + cfg.file);
      std::ostringstream ss;
      ss << f.rdbuf();
      text = ss.str();
    }
    try {
      L.system = parse_system(text);
    } catch (const ParseError& e) {
      throw UsageError((cfg.file == "-" ? std::string("<stdin>") : cfg.file) + ":" + std::to_string(e.line()) + ":" +
                       std::to_string(e.column()) + ": " + e.message());
    }
    L.source = "file";
  }
  if (!cfg.square.empty()) {
    try {
      L.system = square_substitute(L.system, cfg.square);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--square: ") + e.what());
    }
  }
  return L;
}

AnalysisOptions analysis_options(const RunConfig& cfg) {
  AnalysisOptions o;
  o.balance.denominator_bound = cfg.denominator_bound;
  o.digits = default_decimal_precision();
  return o;
}

std::size_t pick_candidate(const RunConfig& cfg, const PainleveAnalysis& a, AnalysisReport& rep) {
  if (cfg.candidate) {
    if (*cfg.candidate < 0 || *cfg.candidate >= static_cast<int>(a.candidates.size()))
      throw UsageError("--candidate " + std::to_string(*cfg.candidate) + " out of range (" +
                       std::to_string(a.candidates.size()) + " candidates)");
    return static_cast<std::size_t>(*cfg.candidate);
  }
  auto k = default_series_candidate(a);
  if (!k) {
    rep.notes.push_back("no candidate with integer exponents and integer resonances; choose one with --candidate");
    throw std::runtime_error("no series candidate");
  }
  return *k;
}

struct AnalysisFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int cmd_balance(const RunConfig& cfg, const LoadedSystem& L, AnalysisReport& rep) {
  BalanceOptions bo;
  bo.denominator_bound = cfg.denominator_bound;
  const auto cands = find_balances(L.system, bo);
  for (const auto& c : cands) rep.balances.push_back(balance_record(L.system, c));
  for (const auto& d : exponent_diagnostics(L.system, bo)) rep.notes.push_back(d.text);
  bool bad = cands.empty();
  for (const auto& c : cands) bad = bad || c.unresolved;
  return bad ? kExitAnalysisFailure : kExitOk;
}

int cmd_resonances(const RunConfig& cfg, const LoadedSystem& L, AnalysisReport& rep) {
  const PainleveAnalysis a = resonance_analysis(L.system, analysis_options(cfg));
  add_analysis(rep, a, false);
  bool bad = a.candidates.empty();
  for (const auto& r : a.resonances) bad = bad || r.degenerate || !r.reduced;
  return bad ? kExitAnalysisFailure : kExitOk;
}

int cmd_test(const RunConfig& cfg, const LoadedSystem& L, AnalysisReport& rep) {
  const PainleveAnalysis a = painleve_test(L.system, analysis_options(cfg));
  add_analysis(rep, a, true);
  return a.verdict.conclusive ? kExitOk : kExitAnalysisFailure;
}

void check_param_names(const std::map<std::string, QuadExt>& params, const std::vector<LaurentSolution>& sols) {
  for (const auto& [name, v] : params) {
    bool known = false;
    for (const auto& s : sols)
      for (const auto& e : s.registry) known = known || e.name == name;
    if (!known) throw UsageError("unknown parameter " + name + " (not a free parameter of any branch)");
  }
}

std::vector<std::size_t> selected(const RunConfig& cfg, std::size_t n) {
  if (!cfg.branch) {
    std::vector<std::size_t> all(n);
    for (std::size_t k = 0; k < n; ++k) all[k] = k;
    return all;
  }
  if (*cfg.branch < 0 || *cfg.branch >= static_cast<int>(n))
    throw UsageError("--branch " + std::to_string(*cfg.branch) + " out of range (" + std::to_string(n) + " branches)");
  return {static_cast<std::size_t>(*cfg.branch)};
}

int cmd_series(const RunConfig& cfg, const LoadedSystem& L, AnalysisReport& rep) {
  const PainleveAnalysis a = resonance_analysis(L.system, analysis_options(cfg));
  add_analysis(rep, a, false);
  const std::size_t k = pick_candidate(cfg, a, rep);
  const auto params = parse_params(cfg.params);
  SeriesMode mode = params.empty() ? SeriesMode::SYMBOLIC : SeriesMode::EVALUATED;
  if (cfg.mode == "symbolic") mode = SeriesMode::SYMBOLIC;
  if (cfg.mode == "evaluated") mode = SeriesMode::EVALUATED;
  const int order = cfg.order.value_or(mode == SeriesMode::SYMBOLIC ? kSymbolicDefaultOrder : kEvaluatedDefaultOrder);
  std::vector<LaurentSolution> sols;
  try {
    sols = expand(L.system, a.candidates[k], order, mode, mode == SeriesMode::EVALUATED ? params : std::map<std::string, QuadExt>{});
  } catch (const PreconditionError& e) {
    rep.notes.push_back(e.what());
    return kExitAnalysisFailure;
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  check_param_names(params, sols);
  bool bad = false;
  for (std::size_t b : selected(cfg, sols.size())) {
    const auto& s = sols[b];
    BranchRecord br = branch_record(s, static_cast<int>(k));
    std::map<std::string, QuadExt> checkparams;
    if (mode == SeriesMode::SYMBOLIC)
      for (const auto& [name, v] : params)
        if (s.param_id(name)) checkparams[name] = v;
    br.checks = standard_checks(L.system, s, s.order, checkparams);
    bad = bad || s.status != BranchStatus::OK;
    for (const auto& c : br.checks) bad = bad || !c.passed;
    rep.branches.push_back(std::move(br));
  }
  return bad ? kExitAnalysisFailure : kExitOk;
}

int cmd_table(const RunConfig& cfg, const LoadedSystem& L, AnalysisReport& rep) {
  const PainleveAnalysis a = resonance_analysis(L.system, analysis_options(cfg));
  const std::size_t k = pick_candidate(cfg, a, rep);
  const BalanceCandidate& cand = a.candidates[k];
  const int need = std::max(1, a.resonances[k].max_positive_integer());
  const auto sols = expand(L.system, cand, need, SeriesMode::SYMBOLIC);
  const auto which = selected(cfg, sols.size());
  const LaurentSolution& branch = sols[which.front()];
  if (branch.status != BranchStatus::OK) {
    rep.notes.push_back("branch " + branch.branch_id + " is " + to_string(branch.status) + ": " + branch.diagnostic);
    return kExitAnalysisFailure;
  }
  std::vector<std::vector<QuadExt>> grid;
  if (!cfg.grid.empty()) {
    grid = parse_grid(cfg.grid);
  } else {
    std::vector<std::string> names;
    for (const auto& e : branch.registry) names.push_back(e.name);
    if (names != std::vector<std::string>{"cz1", "cy4"})
      throw UsageError("no default grid for this branch; pass --grid");
    grid = reference_decay_grid();
  }
  if (cfg.power < 0) throw UsageError("--power must be non-negative");
  DecayTable t;
  try {
    t = decay_table(L.system, cand, branch, grid, cfg.power);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  rep.decay_table = decay_records(t);
  rep.notes.push_back("branch " + branch.branch_id + ", coefficients of t^" + std::to_string(cfg.power));
  for (const auto& row : t.rows)
    if (row.status != BranchStatus::OK) return kExitAnalysisFailure;
  return kExitOk;
}

const LaurentSolution* branch_with_lead(const std::vector<LaurentSolution>& sols, int sign) {
  const QuadExt lead = QuadExt(BigRational(25 * sign, 16)) * rational_sqrt(BigRational(2));
  for (const auto& s : sols)
    if (s.coeffs[0][0] == ParamPoly(lead)) return &s;
  return nullptr;
}

int cmd_verify(const RunConfig&, const LoadedSystem& L, AnalysisReport& rep) {
  if (!closed_form_applicable(L.system)) {
    rep.notes.push_back("closed forms are known for the squared system with lambda = 1/9, C = -16/5 only");
    return kExitAnalysisFailure;
  }
  const PainleveAnalysis a = resonance_analysis(L.system, AnalysisOptions{});
  const auto k = default_series_candidate(a);
  if (!k) throw AnalysisFailure("no integer candidate");
  const int digits = default_decimal_precision();
  const int upto = std::min(50, digits / 2 - 10);
  const int order = upto + 3;
  const int tol_exp = digits - 48;
  const BigFloat tol = BigFloat::pow10(-tol_exp, decimal_to_bits(digits));
  bool bad = false;
  for (int sign : {1, -1}) {
    const auto params = closed_form_parameters(sign);
    const auto sols = expand(L.system, a.candidates[*k], order, SeriesMode::EVALUATED, params);
    const LaurentSolution* s = branch_with_lead(sols, sign);
    if (!s) throw AnalysisFailure("branch with leading coefficient " + std::to_string(sign) + "*25/16*sqrt(2) missing");
    BranchRecord br = branch_record(*s, static_cast<int>(*k));
    br.checks = standard_checks(L.system, *s, s->order, {});
    for (auto& c : br.checks)
      if (c.name == "first_order_invariant" || c.name == "trajectory_relation") c.passed = !c.lowest_nonzero;
    const ClosedFormBranch cf{sign, digits};
    const ClosedFormComparison cmp = compare_closed_form(*s, {}, cf, upto);
    CheckRecord c;
    c.name = "closed_form";
    c.passed = cmp.within(tol);
    c.window_end = upto + 1;
    c.detail = std::string(sign > 0 ? "1 - 3 sin" : "1 + 3 sin") + " form, t0 = " + cf.t0().sci(20) +
               ": max relative error " + cmp.max_relative_error.sci(1) + " at " + cmp.worst_var + " t^" +
               std::to_string(cmp.worst_power) + " over " + std::to_string(cmp.powers_compared) +
               " coefficients (tolerance 1e-" + std::to_string(tol_exp) + ")";
    br.checks.push_back(std::move(c));
    // The same relations must fail away from the closed-form parameters.
    const auto generic = expand(L.system, a.candidates[*k], 20, SeriesMode::EVALUATED,
                                {{"cz1", QuadExt(0)}, {"cy4", QuadExt(0)}});
    if (const LaurentSolution* g = branch_with_lead(generic, sign)) {
      const CheckResult inv = first_order_invariant_check(L.system, *g, {}, 20);
      const CheckResult tr = trajectory_relation_check(L.system, *g, {}, 20);
      CheckRecord gc;
      gc.name = "generic_contrast";
      gc.passed = !inv.vanishes() && !tr.vanishes();
      gc.window_end = std::min(inv.window_end, tr.window_end);
      gc.detail = "at cz1 = cy4 = 0 the invariant survives from t^" +
                  (inv.lowest_nonzero ? std::to_string(*inv.lowest_nonzero) : std::string("-")) +
                  " and the trajectory relation from t^" +
                  (tr.lowest_nonzero ? std::to_string(*tr.lowest_nonzero) : std::string("-"));
      br.checks.push_back(std::move(gc));
    }
    bad = bad || s->status != BranchStatus::OK;
    for (const auto& ch : br.checks) bad = bad || !ch.passed;
    rep.branches.push_back(std::move(br));
  }
  return bad ? kExitAnalysisFailure : kExitOk;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--builtin", cfg.builtin, "builtin system: hh or hh-z (squared form)")
      ->check(CLI::IsMember({"hh", "hh-z"}));
  sub->add_option("--file", cfg.file, "system file in the input grammar, - for stdin");
  sub->add_option("--square", cfg.square, "replace this variable by its square before the analysis");
  sub->add_option("--lambda", cfg.lambda, "lambda for builtins (exact, e.g. 1/9)");
  sub->add_option("--C", cfg.C, "C for builtins (exact, e.g. -16/5)");
  sub->add_option("--order", cfg.order, "series order (steps)");
  sub->add_option("--mode", cfg.mode, "symbolic or evaluated")->check(CLI::IsMember({"symbolic", "evaluated"}));
  sub->add_option("--params", cfg.params, "parameter values, e.g. cz1=0,cy4=0.4");
  sub->add_option("--precision", cfg.precision, "decimal digits for numeric work (>= 32)");
  sub->add_option("--format", cfg.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  sub->add_option("--candidate", cfg.candidate, "balance candidate index");
  sub->add_option("--branch", cfg.branch, "branch index");
  sub->add_option("--grid", cfg.grid, "decay grid rows a:b separated by ;");
  sub->add_option("--power", cfg.power, "power of t for the decay table");
  sub->add_option("--denominator-bound", cfg.denominator_bound, "exponent grid denominator bound (1 or 2)")
      ->check(CLI::Range(1, 2));
}

/// Joins "--opt value" into "--opt=value" so negative values such as
/// -16/5 are not taken for flags.
std::vector<std::string> glue_values(const std::vector<std::string>& args) {
  static const std::set<std::string> valued = {"--builtin", "--file",   "--square",    "--lambda",    "--C",
                                               "--order",   "--mode",   "--params",    "--precision", "--format",
                                               "--candidate", "--branch", "--grid",    "--power",     "--denominator-bound"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (valued.count(args[i]) && i + 1 < args.size()) {
      out.push_back(args[i] + "=" + args[i + 1]);
      ++i;
    } else {
      out.push_back(args[i]);
    }
  }
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args, std::istream& in, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Painleve test and Laurent-series solutions of polynomial ODE systems", "painleve"};
  app.require_subcommand(1);
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"balance", "dominant balances"},
      {"resonances", "balances and resonances"},
      {"test", "full Painleve test with verdict"},
      {"series", "Laurent-series branches with checks"},
      {"table", "decay table of high-order coefficients"},
      {"verify", "comparison with the closed-form solutions"}};
  for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help), cfg);

  auto args = glue_values(raw_args);
  std::vector<const char*> argv{"painleve"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  for (const auto* sub : app.get_subcommands()) cfg.command = sub->get_name();

  try {
    int digits = 128;
    if (const char* env = std::getenv("PAINLEVE_PRECISION")) {
      try {
        digits = std::stoi(env);
      } catch (const std::exception&) {
        throw UsageError(std::string("PAINLEVE_PRECISION is not an integer: ") + env);
      }
    }
    if (cfg.precision) digits = *cfg.precision;
    if (digits < 32) throw UsageError("precision must be at least 32 digits");
    if (cfg.order && *cfg.order < 1) throw UsageError("--order must be at least 1");
    set_default_decimal_precision(digits);

    const LoadedSystem L = load_system(cfg, in);
    AnalysisReport rep;
    rep.command = cfg.command;
    rep.system = system_record(L.system, L.source);
    int code = kExitOk;
    try {
      if (cfg.command == "balance") code = cmd_balance(cfg, L, rep);
      if (cfg.command == "resonances") code = cmd_resonances(cfg, L, rep);
      if (cfg.command == "test") code = cmd_test(cfg, L, rep);
      if (cfg.command == "series") code = cmd_series(cfg, L, rep);
      if (cfg.command == "table") code = cmd_table(cfg, L, rep);
      if (cfg.command == "verify") code = cmd_verify(cfg, L, rep);
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception& e) {
      rep.notes.push_back(std::string("analysis failed: ") + e.what());
      code = kExitAnalysisFailure;
    }
    out << serialize(rep, cfg.format == "json" ? Format::JSON : Format::TEXT);
    if (code != kExitOk) err << "painleve: analysis incomplete (see report)\n";
    return code;
  } catch (const UsageError& e) {
    err << "painleve: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "painleve: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace painleve
