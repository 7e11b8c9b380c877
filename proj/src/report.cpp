#include "painleve/report.hpp"

#include <algorithm>
#include <sstream>

namespace painleve {

using nlohmann::ordered_json;

// ---------------------------------------------------------------- analysis

namespace {

void assess_compatibility(PainleveAnalysis& a, std::size_t k, int digits) {
  const BalanceCandidate& c = a.candidates[k];
  const ResonanceReport& r = a.resonances[k];
  if (c.unresolved || r.degenerate || !r.reduced || !c.integer_exponents() || !r.all_integer()) return;
  (void)digits;
  try {
    const int order = std::max(1, r.max_positive_integer());
    const auto branches = expand(a.system, c, order, SeriesMode::SYMBOLIC);
    Compatibility out = Compatibility::Compatible;
    std::string note;
    for (const auto& b : branches) {
      if (b.status == BranchStatus::LOG_REQUIRED) {
        out = Compatibility::LogRequired;
        note = b.diagnostic;
        break;
      }
      if (b.status == BranchStatus::UNRESOLVED && out == Compatibility::Compatible) {
        out = Compatibility::Unresolved;
        note = b.diagnostic;
      }
    }
    a.compatibility[k] = out;
    a.compatibility_notes[k] = note;
  } catch (const std::exception& e) {
    a.compatibility[k] = Compatibility::Unresolved;
    a.compatibility_notes[k] = e.what();
  }
}

PainleveAnalysis base_analysis(const PolyODESystem& system, const AnalysisOptions& opts) {
  PainleveAnalysis a;
  a.system = system;
  a.candidates = find_balances(system, opts.balance);
  for (const auto& c : a.candidates) a.resonances.push_back(analyze_resonances(system, c, opts.digits));
  a.compatibility.assign(a.candidates.size(), Compatibility::NotChecked);
  a.compatibility_notes.assign(a.candidates.size(), "");
  a.exponent_notes = exponent_diagnostics(system, opts.balance);
  return a;
}

PainleveVerdict verdict_of(const PainleveAnalysis& a) {
  std::vector<CandidateAssessment> as;
  for (std::size_t k = 0; k < a.candidates.size(); ++k)
    as.push_back({&a.candidates[k], &a.resonances[k], a.compatibility[k], a.compatibility_notes[k]});
  return classify(a.system, as, a.exponent_notes);
}

}  // namespace

PainleveAnalysis resonance_analysis(const PolyODESystem& system, const AnalysisOptions& opts) {
  PainleveAnalysis a = base_analysis(system, opts);
  a.verdict = verdict_of(a);
  return a;
}

PainleveAnalysis painleve_test(const PolyODESystem& system, const AnalysisOptions& opts) {
  PainleveAnalysis a = base_analysis(system, opts);
  if (opts.check_compatibility)
    for (std::size_t k = 0; k < a.candidates.size(); ++k) assess_compatibility(a, k, opts.digits);
  a.verdict = verdict_of(a);
  return a;
}

std::optional<std::size_t> default_series_candidate(const PainleveAnalysis& a) {
  for (std::size_t k = 0; k < a.candidates.size(); ++k) {
    const auto& c = a.candidates[k];
    const auto& r = a.resonances[k];
    if (!c.unresolved && c.integer_exponents() && r.reduced && r.all_integer()) return k;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- decay table

std::string display_value(const QuadExt& v, int significant) {
  if (v.is_zero()) return "0";
  if (!v.is_real()) return v.str();
  return to_bigfloat(v, decimal_to_bits(std::max(40, 2 * significant + 20))).sci(significant);
}

namespace {

DecayRow decay_row(const PolyODESystem& system, const BalanceCandidate& candidate, const LaurentSolution& branch,
                   const std::vector<QuadExt>& values, int power) {
  DecayRow row;
  row.values = values;
  if (values.size() != branch.registry.size())
    throw std::invalid_argument("grid row has " + std::to_string(values.size()) + " values for " +
                                std::to_string(branch.registry.size()) + " free parameters");
  std::map<std::string, QuadExt> params;
  for (std::size_t k = 0; k < values.size(); ++k) params[branch.registry[k].name] = values[k];
  const int lowest = *std::min_element(branch.start.begin(), branch.start.end());
  const int order = power - lowest;
  try {
    const auto sols = expand(system, candidate, order, SeriesMode::EVALUATED, params);
    const LaurentSolution* hit = nullptr;
    for (const auto& s : sols)
      if (s.branch_id == branch.branch_id) hit = &s;
    if (!hit) throw std::runtime_error("branch " + branch.branch_id + " not produced");
    row.status = hit->status;
    row.diagnostic = hit->diagnostic;
    if (hit->status == BranchStatus::OK) {
      for (std::size_t v = 0; v < hit->vars.size(); ++v) {
        const QuadExt c = hit->coefficient(static_cast<int>(v), power).as_constant();
        row.coefficients.push_back(c);
        row.display.push_back(display_value(c));
      }
    }
  } catch (const std::exception& e) {
    row.status = BranchStatus::UNRESOLVED;
    row.diagnostic = e.what();
  }
  return row;
}

DecayTable decay_header(const LaurentSolution& branch, int power) {
  DecayTable t;
  t.branch = branch.branch_id;
  t.vars = branch.vars;
  t.power = power;
  for (const auto& e : branch.registry) t.parameters.push_back(e.name);
  return t;
}

}  // namespace

DecayTable decay_table(const PolyODESystem& system, const BalanceCandidate& candidate, const LaurentSolution& branch,
                       const std::vector<std::vector<QuadExt>>& grid, int power) {
  DecayTable t = decay_header(branch, power);
  t.rows.resize(grid.size());
  std::string failure;
  const long n = static_cast<long>(grid.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      t.rows[static_cast<std::size_t>(i)] = decay_row(system, candidate, branch, grid[static_cast<std::size_t>(i)], power);
    } catch (const std::exception& e) {
#pragma omp critical
      if (failure.empty()) failure = e.what();
    }
  }
  if (!failure.empty()) throw std::invalid_argument(failure);
  return t;
}

DecayTable decay_table_serial(const PolyODESystem& system, const BalanceCandidate& candidate,
                              const LaurentSolution& branch, const std::vector<std::vector<QuadExt>>& grid, int power) {
  DecayTable t = decay_header(branch, power);
  for (const auto& g : grid) t.rows.push_back(decay_row(system, candidate, branch, g, power));
  return t;
}

std::vector<std::vector<QuadExt>> reference_decay_grid() {
  static const char* rows[][2] = {
      {"-1", "-1"},   {"0", "0"},     {"-1", "-0.6"}, {"0", "0.2"},   {"-1", "-0.2"}, {"0", "0.4"},   {"-1", "0"},
      {"0", "0.6"},   {"-1", "0.4"},  {"0", "0.8"},   {"-1", "1"},    {"0", "1"},     {"-0.6", "-1"}, {"0.4", "0"},
      {"-0.6", "-0.6"}, {"0.4", "0.4"}, {"-0.6", "0"}, {"0.4", "0.8"}, {"-0.6", "0.4"}, {"0.8", "0"},  {"-0.6", "1"},
      {"0.8", "0.4"}, {"-0.2", "-1"}, {"0.8", "0.8"}, {"0", "-1"},    {"1", "1"},     {"20", "20"},   {"20", "40"},
      {"40", "20"},   {"40", "40"}};
  std::vector<std::vector<QuadExt>> out;
  for (const auto& r : rows) out.push_back({QuadExt(BigRational::parse(r[0])), QuadExt(BigRational::parse(r[1]))});
  return out;
}

// ---------------------------------------------------------------- records

SystemRecord system_record(const PolyODESystem& system, const std::string& source) {
  SystemRecord r;
  r.source = source;
  r.vars = system.vars;
  r.text = system.str();
  if (system.hh) {
    r.lambda = system.hh->lambda.str();
    r.C = system.hh->C.str();
  }
  return r;
}

BalanceRecord balance_record(const PolyODESystem& system, const BalanceCandidate& c) {
  BalanceRecord r;
  for (const auto& e : c.exponents) r.exponents.push_back(e.str());
  for (const auto& l : c.leading) r.leading.push_back(l ? l->str() : "ARBITRARY");
  for (std::size_t i = 0; i < c.leading_terms.size(); ++i) {
    std::vector<std::string> eq;
    for (const auto& m : c.leading_terms[i]) {
      const auto& terms = system.equations[i].terms();
      auto it = terms.find(m);
      JetPolynomial single = JetPolynomial::term(m, it == terms.end() ? QuadExt(1) : it->second);
      eq.push_back(single.str(system.vars));
    }
    r.leading_terms.push_back(std::move(eq));
  }
  r.unresolved = c.unresolved;
  r.diagnostic = c.diagnostic;
  return r;
}

ResonanceRecord resonance_record(int candidate, const ResonanceReport& rep, Compatibility c, const std::string& note) {
  ResonanceRecord r;
  r.candidate = candidate;
  r.determinant = to_string(rep.determinant);
  if (rep.reduced) r.reduced = to_string(*rep.reduced);
  for (const auto& root : rep.roots) r.roots.push_back({root.str(), to_string(root.kind), root.multiplicity});
  r.has_minus_one = rep.has_minus_one;
  r.degenerate = rep.degenerate;
  r.diagnostic = rep.diagnostic;
  r.compatibility = to_string(c);
  r.compatibility_note = note;
  return r;
}

VerdictRecord verdict_record(const PainleveVerdict& v) { return {to_string(v.status), v.conclusive, v.reasons}; }

VarSeriesRecord series_record(const LaurentSolution& s, int var) {
  VarSeriesRecord r;
  r.var = s.vars[static_cast<std::size_t>(var)];
  r.start = s.start[static_cast<std::size_t>(var)];
  const auto nm = s.namer();
  const auto& col = s.coeffs[static_cast<std::size_t>(var)];
  for (std::size_t j = 0; j < col.size(); ++j) r.terms.emplace_back(r.start + static_cast<int>(j), col[j].str(nm));
  return r;
}

BranchRecord branch_record(const LaurentSolution& s, int candidate) {
  BranchRecord b;
  b.a1 = s.leading_label();
  b.id = s.branch_id;
  b.candidate = candidate;
  b.status = to_string(s.status);
  b.diagnostic = s.diagnostic;
  b.mode = to_string(s.mode);
  b.order = s.order;
  for (int v = 0; v < static_cast<int>(s.vars.size()); ++v) b.series.push_back(series_record(s, v));
  for (const auto& e : s.registry) {
    ParameterRecord p{e.name, e.step, s.vars[static_cast<std::size_t>(e.var)], e.power, std::nullopt};
    if (auto it = s.fixed.find(e.id); it != s.fixed.end()) p.value = it->second.str();
    b.parameters.push_back(std::move(p));
  }
  b.constraints = s.log;
  return b;
}

std::vector<DecayRowRecord> decay_records(const DecayTable& t) {
  std::vector<DecayRowRecord> out;
  for (const auto& row : t.rows) {
    DecayRowRecord r;
    for (std::size_t k = 0; k < t.parameters.size() && k < row.values.size(); ++k)
      r.parameters.emplace_back(t.parameters[k], row.values[k].str());
    for (std::size_t v = 0; v < row.coefficients.size(); ++v)
      r.coefficients.push_back({series_param_name(t.vars[v], t.power), row.coefficients[v].str(), row.display[v]});
    r.status = to_string(row.status);
    r.diagnostic = row.diagnostic;
    out.push_back(std::move(r));
  }
  return out;
}

void add_analysis(AnalysisReport& report, const PainleveAnalysis& a, bool with_verdict) {
  for (const auto& c : a.candidates) report.balances.push_back(balance_record(a.system, c));
  for (std::size_t k = 0; k < a.candidates.size(); ++k)
    report.resonances.push_back(
        resonance_record(static_cast<int>(k), a.resonances[k], a.compatibility[k], a.compatibility_notes[k]));
  for (const auto& d : a.exponent_notes) report.notes.push_back(d.text);
  if (with_verdict) report.verdict = verdict_record(a.verdict);
}

namespace {

CheckRecord from_check(const std::string& name, const CheckResult& c, bool required, const std::string& detail) {
  CheckRecord r;
  r.name = name;
  r.lowest_nonzero = c.lowest_nonzero;
  r.window_end = c.window_end;
  r.passed = !required || c.vanishes();
  r.detail = detail;
  if (c.lowest_nonzero) r.detail += (r.detail.empty() ? "" : "; ") + ("first surviving term " + c.coefficient + " at t^" +
                                                                      std::to_string(*c.lowest_nonzero));
  return r;
}

}  // namespace

std::vector<CheckRecord> standard_checks(const PolyODESystem& system, const LaurentSolution& s, int N,
                                         const std::map<std::string, QuadExt>& params) {
  std::vector<CheckRecord> out;
  N = std::min(N, s.order);
  try {
    const ResidualProfile p = residual_order(system, s, N, params);
    CheckRecord r;
    r.name = "residual";
    r.passed = p.consistent();
    r.window_end = INT_MAX;
    std::string d = std::string(p.exact ? "exact truncation" : "series window") + " at N = " + std::to_string(N);
    for (std::size_t i = 0; i < p.equations.size(); ++i) {
      const auto& e = p.equations[i];
      d += "; eq " + std::to_string(i + 1) + ": from t^" + std::to_string(e.matched_power) + ", ";
      if (e.lowest_nonzero) {
        d += "lowest surviving t^" + std::to_string(*e.lowest_nonzero) + " (" + e.magnitude + ")";
        r.lowest_nonzero = r.lowest_nonzero ? std::min(*r.lowest_nonzero, *e.lowest_nonzero) : *e.lowest_nonzero;
      } else {
        d += "zero through t^" + std::to_string(e.checked_through);
      }
      r.window_end = std::min(r.window_end, e.checked_through + 1);
    }
    r.detail = d;
    out.push_back(std::move(r));
  } catch (const std::exception& e) {
    out.push_back({"residual", false, std::nullopt, 0, e.what()});
  }
  if (!system.hh) return out;
  try {
    const EnergyResult E = energy_series(system, s, params, N);
    out.push_back(from_check("energy", E.nonconstant, true, "H = " + E.energy.str(s.namer())));
  } catch (const std::exception& e) {
    out.push_back({"energy", false, std::nullopt, 0, e.what()});
  }
  if (!closed_form_applicable(system) || s.status != BranchStatus::OK) return out;
  try {
    out.push_back(from_check("first_order_invariant", first_order_invariant_check(system, s, params, N), false,
                             "squared relation, informational"));
    out.push_back(from_check("trajectory_relation", trajectory_relation_check(system, s, params, N), false,
                             "squared relation, informational"));
  } catch (const std::exception& e) {
    out.push_back({"first_order_invariant", false, std::nullopt, 0, e.what()});
  }
  return out;
}

// ---------------------------------------------------------------- JSON

namespace {

template <class T>
ordered_json opt(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

template <class T>
std::optional<T> opt_get(const ordered_json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

ordered_json check_json(const CheckRecord& c) {
  return ordered_json{{"passed", c.passed},
                      {"lowest_nonzero", opt(c.lowest_nonzero)},
                      {"window_end", c.window_end},
                      {"detail", c.detail}};
}

}  // namespace

ordered_json to_json(const AnalysisReport& r) {
  ordered_json j;
  j["schema"] = kSchemaVersion;
  j["command"] = r.command;
  if (r.system) {
    const auto& s = *r.system;
    j["system"] = ordered_json{{"source", s.source}, {"vars", s.vars}, {"text", s.text}, {"lambda", opt(s.lambda)},
                               {"C", opt(s.C)}};
  } else {
    j["system"] = nullptr;
  }
  j["balances"] = ordered_json::array();
  for (const auto& b : r.balances)
    j["balances"].push_back(ordered_json{{"exponents", b.exponents},
                                         {"leading", b.leading},
                                         {"leading_terms", b.leading_terms},
                                         {"unresolved", b.unresolved},
                                         {"diagnostic", b.diagnostic}});
  j["resonances"] = ordered_json::array();
  for (const auto& x : r.resonances) {
    ordered_json roots = ordered_json::array();
    for (const auto& root : x.roots)
      roots.push_back(ordered_json{{"value", root.value}, {"kind", root.kind}, {"multiplicity", root.multiplicity}});
    j["resonances"].push_back(ordered_json{{"candidate", x.candidate},
                                           {"determinant", x.determinant},
                                           {"reduced", opt(x.reduced)},
                                           {"roots", roots},
                                           {"has_minus_one", x.has_minus_one},
                                           {"degenerate", x.degenerate},
                                           {"diagnostic", x.diagnostic},
                                           {"compatibility", x.compatibility},
                                           {"compatibility_note", x.compatibility_note}});
  }
  if (r.verdict)
    j["verdict"] = ordered_json{
        {"status", r.verdict->status}, {"conclusive", r.verdict->conclusive}, {"reasons", r.verdict->reasons}};
  else
    j["verdict"] = nullptr;
  j["branches"] = ordered_json::array();
  for (const auto& b : r.branches) {
    ordered_json series = ordered_json::object();
    for (const auto& s : b.series) {
      ordered_json terms = ordered_json::array();
      for (const auto& [p, c] : s.terms) terms.push_back(ordered_json::array({p, c}));
      series[s.var] = ordered_json{{"start", s.start}, {"terms", terms}};
    }
    ordered_json params = ordered_json::array();
    for (const auto& p : b.parameters)
      params.push_back(ordered_json{
          {"name", p.name}, {"step", p.step}, {"var", p.var}, {"power", p.power}, {"value", opt(p.value)}});
    ordered_json cons = ordered_json::array();
    for (const auto& c : b.constraints)
      cons.push_back(ordered_json{{"step", c.step}, {"conditions", c.conditions}, {"resolution", c.resolution}});
    ordered_json checks = ordered_json::object();
    for (const auto& c : b.checks) checks[c.name] = check_json(c);
    j["branches"].push_back(ordered_json{{"a1", b.a1},
                                         {"id", b.id},
                                         {"candidate", b.candidate},
                                         {"status", b.status},
                                         {"diagnostic", b.diagnostic},
                                         {"mode", b.mode},
                                         {"order", b.order},
                                         {"series", series},
                                         {"parameters", params},
                                         {"constraints", cons},
                                         {"checks", checks}});
  }
  j["decay_table"] = ordered_json::array();
  for (const auto& row : r.decay_table) {
    ordered_json params = ordered_json::object();
    for (const auto& [k, v] : row.parameters) params[k] = v;
    ordered_json coeffs = ordered_json::array();
    for (const auto& c : row.coefficients)
      coeffs.push_back(ordered_json{{"name", c.name}, {"exact", c.exact}, {"display", c.display}});
    j["decay_table"].push_back(ordered_json{
        {"parameters", params}, {"coefficients", coeffs}, {"status", row.status}, {"diagnostic", row.diagnostic}});
  }
  j["notes"] = r.notes;
  return j;
}

AnalysisReport report_from_json(const ordered_json& j) {
  if (!j.is_object() || !j.contains("schema") || j.at("schema") != kSchemaVersion)
    throw std::invalid_argument("not a schema 1 report");
  AnalysisReport r;
  r.command = j.value("command", "");
  if (j.contains("system") && !j.at("system").is_null()) {
    const ordered_json& s = j.at("system");
    SystemRecord sr;
    sr.source = s.at("source").get<std::string>();
    sr.vars = s.at("vars").get<std::vector<std::string>>();
    sr.text = s.at("text").get<std::string>();
    sr.lambda = opt_get<std::string>(s, "lambda");
    sr.C = opt_get<std::string>(s, "C");
    r.system = sr;
  }
  for (const ordered_json& b : j.at("balances")) {
    BalanceRecord br;
    br.exponents = b.at("exponents").get<std::vector<std::string>>();
    br.leading = b.at("leading").get<std::vector<std::string>>();
    br.leading_terms = b.at("leading_terms").get<std::vector<std::vector<std::string>>>();
    br.unresolved = b.at("unresolved").get<bool>();
    br.diagnostic = b.at("diagnostic").get<std::string>();
    r.balances.push_back(std::move(br));
  }
  for (const ordered_json& x : j.at("resonances")) {
    ResonanceRecord rr;
    rr.candidate = x.at("candidate").get<int>();
    rr.determinant = x.at("determinant").get<std::string>();
    rr.reduced = opt_get<std::string>(x, "reduced");
    for (const ordered_json& root : x.at("roots"))
      rr.roots.push_back(
          {root.at("value").get<std::string>(), root.at("kind").get<std::string>(), root.at("multiplicity").get<int>()});
    rr.has_minus_one = x.at("has_minus_one").get<bool>();
    rr.degenerate = x.at("degenerate").get<bool>();
    rr.diagnostic = x.at("diagnostic").get<std::string>();
    rr.compatibility = x.at("compatibility").get<std::string>();
    rr.compatibility_note = x.at("compatibility_note").get<std::string>();
    r.resonances.push_back(std::move(rr));
  }
  if (j.contains("verdict") && !j.at("verdict").is_null()) {
    const ordered_json& v = j.at("verdict");
    r.verdict = VerdictRecord{v.at("status").get<std::string>(), v.at("conclusive").get<bool>(),
                              v.at("reasons").get<std::vector<std::string>>()};
  }
  // Variable order of the series objects follows the system echo when present.
  for (const ordered_json& b : j.at("branches")) {
    BranchRecord br;
    br.a1 = b.at("a1").get<std::string>();
    br.id = b.at("id").get<std::string>();
    br.candidate = b.at("candidate").get<int>();
    br.status = b.at("status").get<std::string>();
    br.diagnostic = b.at("diagnostic").get<std::string>();
    br.mode = b.at("mode").get<std::string>();
    br.order = b.at("order").get<int>();
    std::vector<std::string> order;
    if (r.system) order = r.system->vars;
    for (auto it = b.at("series").begin(); it != b.at("series").end(); ++it)
      if (std::find(order.begin(), order.end(), it.key()) == order.end()) order.push_back(it.key());
    for (const auto& var : order) {
      if (!b.at("series").contains(var)) continue;
      const ordered_json& s = b.at("series").at(var);
      VarSeriesRecord vs;
      vs.var = var;
      vs.start = s.at("start").get<int>();
      for (const ordered_json& t : s.at("terms")) vs.terms.emplace_back(t.at(0).get<int>(), t.at(1).get<std::string>());
      br.series.push_back(std::move(vs));
    }
    for (const ordered_json& p : b.at("parameters"))
      br.parameters.push_back({p.at("name").get<std::string>(), p.at("step").get<int>(), p.at("var").get<std::string>(),
                               p.at("power").get<int>(), opt_get<std::string>(p, "value")});
    for (const ordered_json& c : b.at("constraints"))
      br.constraints.push_back(
          {c.at("step").get<int>(), c.at("conditions").get<std::vector<std::string>>(), c.at("resolution").get<std::string>()});
    for (const auto& [name, c] : b.at("checks").items())
      br.checks.push_back({name, c.at("passed").get<bool>(), opt_get<int>(c, "lowest_nonzero"),
                           c.at("window_end").get<int>(), c.at("detail").get<std::string>()});
    r.branches.push_back(std::move(br));
  }
  for (const ordered_json& row : j.at("decay_table")) {
    DecayRowRecord rr;
    for (auto it = row.at("parameters").begin(); it != row.at("parameters").end(); ++it)
      rr.parameters.emplace_back(it.key(), it.value().get<std::string>());
    for (const ordered_json& c : row.at("coefficients"))
      rr.coefficients.push_back(
          {c.at("name").get<std::string>(), c.at("exact").get<std::string>(), c.at("display").get<std::string>()});
    rr.status = row.at("status").get<std::string>();
    rr.diagnostic = row.at("diagnostic").get<std::string>();
    r.decay_table.push_back(std::move(rr));
  }
  if (j.contains("notes")) r.notes = j.at("notes").get<std::vector<std::string>>();
  return r;
}

// ---------------------------------------------------------------- text

std::string format_series(const VarSeriesRecord& s) {
  std::string out = s.var + " =";
  bool first = true;
  for (const auto& [p, c] : s.terms) {
    if (c == "0") continue;
    const std::string tp = p == 0 ? "" : (p == 1 ? "t" : "t^" + std::to_string(p));
    // A coefficient is a single product when it has no top-level sum.
    bool single = true;
    for (std::size_t k = 1; k < c.size(); ++k)
      if ((c[k] == '+' || c[k] == '-') && c[k - 1] == ' ') single = false;
    std::string body;
    bool neg = false;
    if (single) {
      body = c;
      if (body[0] == '-') {
        neg = true;
        body.erase(0, 1);
      }
      if (!tp.empty()) body = body == "1" ? tp : body + "*" + tp;
    } else {
      body = "(" + c + ")" + (tp.empty() ? "" : "*" + tp);
    }
    if (first)
      out += neg ? " -" + body : " " + body;
    else
      out += neg ? " - " + body : " + " + body;
    first = false;
  }
  if (first) out += " 0";
  return out + " + ...";
}

namespace {

void text_branch(std::ostringstream& os, const BranchRecord& b) {
  for (const auto& s : b.series) os << format_series(s) << "\n";
  os << "# branch " << b.id << " (" << b.status << ", " << b.mode << ", order " << b.order << ")\n";
  if (!b.diagnostic.empty()) os << "# " << b.diagnostic << "\n";
  if (!b.parameters.empty()) {
    os << "# parameters:";
    for (const auto& p : b.parameters) {
      os << " " << p.name << " (step " << p.step << ")";
      if (p.value) os << " = " << *p.value;
    }
    os << ", plus t0\n";
  }
  for (const auto& c : b.constraints) {
    os << "# step " << c.step << ":";
    for (const auto& k : c.conditions) os << " " << k << ";";
    os << " -> " << c.resolution << "\n";
  }
  for (const auto& c : b.checks) os << "# check " << c.name << ": " << (c.passed ? "ok" : "FAILED") << " (" << c.detail << ")\n";
}

}  // namespace

std::string serialize(const AnalysisReport& r, Format f) {
  if (f == Format::JSON) return to_json(r).dump(2) + "\n";
  std::ostringstream os;
  const bool series_only = r.command == "series" || r.command == "verify";
  if (!series_only) {
    if (r.system) {
      os << "system (" << r.system->source << "):\n";
      std::istringstream lines(r.system->text);
      for (std::string l; std::getline(lines, l);) os << "  " << l << "\n";
    }
    for (std::size_t k = 0; k < r.balances.size(); ++k) {
      const auto& b = r.balances[k];
      os << "balance " << k << ":";
      for (std::size_t v = 0; v < b.exponents.size(); ++v)
      {
        const std::string& lead = b.leading[v];
        const bool sum = lead.find(" + ", 1) != std::string::npos || lead.find(" - ", 1) != std::string::npos;
        os << (v ? ", " : " ") << (r.system ? r.system->vars[v] : "x" + std::to_string(v)) << " ~ "
           << (sum ? "(" + lead + ")" : lead) << "*t^" << b.exponents[v];
      }
      if (b.unresolved) os << " [UNRESOLVED: " << b.diagnostic << "]";
      os << "\n";
    }
    for (const auto& x : r.resonances) {
      os << "resonances " << x.candidate << ": det Q(r) = " << x.determinant << "\n";
      if (!x.roots.empty()) {
        os << "  roots:";
        for (const auto& root : x.roots) {
          os << " " << root.value << " [" << root.kind;
          if (root.multiplicity > 1) os << " x" << root.multiplicity;
          os << "]";
        }
        os << "\n";
      }
      if (!x.diagnostic.empty()) os << "  " << x.diagnostic << "\n";
      if (x.compatibility != "NOT_CHECKED")
        os << "  compatibility: " << x.compatibility << (x.compatibility_note.empty() ? "" : " (" + x.compatibility_note + ")")
           << "\n";
    }
    for (const auto& n : r.notes) os << "note: " << n << "\n";
    if (r.verdict) {
      os << "verdict: " << r.verdict->status << (r.verdict->conclusive ? "" : " (inconclusive)") << "\n";
      for (const auto& reason : r.verdict->reasons) os << "  - " << reason << "\n";
    }
  }
  for (std::size_t k = 0; k < r.branches.size(); ++k) {
    if (k) os << "\n";
    text_branch(os, r.branches[k]);
  }
  if (!r.decay_table.empty()) {
    if (!r.branches.empty()) os << "\n";
    const auto& h = r.decay_table.front();
    for (const auto& [k, v] : h.parameters) os << k << "\t";
    for (const auto& c : h.coefficients) os << c.name << "\t";
    os << "\n";
    for (const auto& row : r.decay_table) {
      for (const auto& [k, v] : row.parameters) os << v << "\t";
      for (const auto& c : row.coefficients) os << c.display << "\t";
      if (row.status != "OK") os << row.status << ": " << row.diagnostic;
      os << "\n";
    }
  }
  if (series_only)
    for (const auto& n : r.notes) os << "# " << n << "\n";
  return os.str();
}

}  // namespace painleve
