#include "painleve/series.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace painleve {

const char* to_string(SeriesMode m) { return m == SeriesMode::SYMBOLIC ? "SYMBOLIC" : "EVALUATED"; }

const char* to_string(BranchStatus s) {
  switch (s) {
    case BranchStatus::OK: return "OK";
    case BranchStatus::LOG_REQUIRED: return "LOG_REQUIRED";
    case BranchStatus::UNRESOLVED: return "UNRESOLVED";
  }
  return "?";
}

std::string series_param_name(const std::string& var, int power) {
  return "c" + var + (power < 0 ? "m" + std::to_string(-power) : std::to_string(power));
}

std::string LaurentSolution::name(ParamId id) const {
  auto it = names.find(id);
  return it == names.end() ? "p" + std::to_string(id) : it->second;
}

ParamPoly::Namer LaurentSolution::namer() const {
  return [this](ParamId id) { return name(id); };
}

int LaurentSolution::var_index(const std::string& var) const {
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (vars[i] == var) return static_cast<int>(i);
  throw std::out_of_range("unknown variable '" + var + "'");
}

ParamPoly LaurentSolution::coefficient(int var, int power) const {
  if (var < 0 || var >= static_cast<int>(coeffs.size())) throw std::out_of_range("variable index out of range");
  const int j = power - start[static_cast<std::size_t>(var)];
  if (j < 0 || j >= static_cast<int>(coeffs[static_cast<std::size_t>(var)].size()))
    throw std::out_of_range("power " + std::to_string(power) + " of " + vars[static_cast<std::size_t>(var)] +
                            " is outside the expanded range");
  return coeffs[static_cast<std::size_t>(var)][static_cast<std::size_t>(j)];
}

ParamPoly LaurentSolution::coefficient(const std::string& var, int power) const {
  return coefficient(var_index(var), power);
}

std::string LaurentSolution::leading_label() const {
  if (coeffs.empty() || coeffs[0].empty()) return "";
  return coeffs[0][0].str(namer());
}

std::optional<ParamId> LaurentSolution::param_id(const std::string& nm) const {
  for (const auto& [id, s] : names)
    if (s == nm) return id;
  return std::nullopt;
}

namespace {

struct Term {
  int eq = 0;
  QuadExt coeff;
  std::vector<JetVar> factors;  // with multiplicity
  int E = 0;                    // lowest power
};

struct Plan {
  int n = 0;
  std::vector<int> alpha;
  std::vector<int> m;
  std::vector<Term> terms;
  RMatrix Q;
  std::vector<std::string> vars;
  SeriesMode mode = SeriesMode::SYMBOLIC;
  const std::map<std::string, QuadExt>* params = nullptr;
};

struct State {
  std::vector<std::vector<ParamPoly>> c;                 // [v][j]
  std::vector<std::vector<std::vector<ParamPoly>>> pre;  // [term][p][idx]
  std::vector<RegistryEntry> registry;
  std::map<ParamId, std::string> names;
  std::map<ParamId, QuadExt> fixed;
  std::vector<ConstraintRecord> log;
  std::vector<std::string> labels;
  BranchStatus status = BranchStatus::OK;
  std::string diagnostic;
  int done = 0;  // steps completed
  ParamId next_id = 0;

  ParamPoly::Namer namer() const {
    return [this](ParamId id) {
      auto it = names.find(id);
      return it == names.end() ? "p" + std::to_string(id) : it->second;
    };
  }
};

BigRational ff(long a, int k) { return falling_factorial(BigRational(a), k); }

ParamPoly jet_value(const Plan& P, const State& S, JetVar f, int idx) {
  const ParamPoly& v = S.c[static_cast<std::size_t>(f.var)][static_cast<std::size_t>(idx)];
  if (f.order == 0 || v.is_zero()) return v;
  const BigRational k = ff(P.alpha[static_cast<std::size_t>(f.var)] + idx, f.order);
  return k.is_zero() ? ParamPoly() : v * QuadExt(k);
}

/// Fills prefix products at index idx from the current coefficients.
void extend(const Plan& P, State& S, int idx) {
  for (std::size_t t = 0; t < P.terms.size(); ++t) {
    const Term& T = P.terms[t];
    auto& pre = S.pre[t];
    for (std::size_t p = 0; p < T.factors.size(); ++p) {
      if (static_cast<int>(pre[p].size()) <= idx) pre[p].resize(static_cast<std::size_t>(idx) + 1);
      if (p == 0) {
        pre[0][static_cast<std::size_t>(idx)] = jet_value(P, S, T.factors[0], idx);
        continue;
      }
      ParamPoly acc;
      for (int a = 0; a <= idx; ++a) {
        const ParamPoly& left = pre[p - 1][static_cast<std::size_t>(a)];
        if (left.is_zero()) continue;
        ParamPoly right = jet_value(P, S, T.factors[p], idx - a);
        if (right.is_zero()) continue;
        acc += left * right;
      }
      pre[p][static_cast<std::size_t>(idx)] = std::move(acc);
    }
  }
}

ParamPoly product_coeff(const Plan& P, const State& S, std::size_t t, int d) {
  const Term& T = P.terms[t];
  if (T.factors.empty()) return d == 0 ? ParamPoly(1) : ParamPoly();
  return S.pre[t].back()[static_cast<std::size_t>(d)];
}

void substitute_all(State& S, ParamId id, const QuadExt& value) {
  for (auto& row : S.c)
    for (auto& x : row) x = x.substitute(id, value);
  for (auto& t : S.pre)
    for (auto& p : t)
      for (auto& x : p) x = x.substitute(id, value);
  S.fixed[id] = value;
}

ParamPoly strip_leading_content(const ParamPoly& p, int n) {
  if (p.is_zero()) return p;
  ParamPoly m(1);
  for (ParamId id : p.variables()) {
    if (id >= n) continue;
    const int lo = p.min_exponent(id);
    if (lo != 0) m *= ParamPoly::variable(id, lo);
  }
  return m.is_constant() ? p : p.divided_by_term(m);
}

Plan make_plan(const PolyODESystem& system, const BalanceCandidate& cand, SeriesMode mode,
               const std::map<std::string, QuadExt>& params) {
  if (cand.unresolved) throw std::invalid_argument("candidate is unresolved: " + cand.diagnostic);
  if (!cand.integer_exponents())
    throw PreconditionError("series expansion needs integer leading exponents; apply square_substitute first");
  Plan P;
  P.n = system.size();
  P.vars = system.vars;
  P.mode = mode;
  P.params = &params;
  for (const auto& a : cand.exponents) P.alpha.push_back(static_cast<int>(a.numerator().get_si()));
  for (const auto& m : cand.equation_orders) P.m.push_back(static_cast<int>(m.numerator().get_si()));
  for (int i = 0; i < P.n; ++i) {
    for (const auto& [mono, c] : system.equations[static_cast<std::size_t>(i)].terms()) {
      Term T;
      T.eq = i;
      T.coeff = c;
      for (const auto& [jv, e] : mono) {
        for (int k = 0; k < e; ++k) T.factors.push_back(jv);
        T.E += e * (P.alpha[static_cast<std::size_t>(jv.var)] - jv.order);
      }
      if (T.E < P.m[static_cast<std::size_t>(i)])
        throw PreconditionError("a term of equation " + std::to_string(i + 1) + " lies below the balance order");
      P.terms.push_back(std::move(T));
    }
  }
  P.Q = resonance_matrix(leading_terms(system, cand), cand);
  return P;
}

State initial_state(const Plan& P, const BalanceCandidate& cand) {
  State S;
  S.c.assign(static_cast<std::size_t>(P.n), {});
  S.pre.resize(P.terms.size());
  for (std::size_t t = 0; t < P.terms.size(); ++t) S.pre[t].resize(P.terms[t].factors.size());
  S.next_id = P.n;
  for (int v = 0; v < P.n; ++v) {
    const auto& l = cand.leading[static_cast<std::size_t>(v)];
    S.c[static_cast<std::size_t>(v)].push_back(l ? ParamPoly(*l) : ParamPoly::variable(v));
    if (!l) {
      const std::string nm = leading_param_name(v);
      S.names[v] = nm;
      S.registry.push_back({nm, v, 0, v, P.alpha[static_cast<std::size_t>(v)]});
    }
  }
  extend(P, S, 0);
  for (int v = 0; v < P.n; ++v) {
    if (cand.leading[static_cast<std::size_t>(v)]) continue;
    auto it = P.params->find(leading_param_name(v));
    if (it != P.params->end()) substitute_all(S, v, it->second);
  }
  return S;
}

struct StepResult {
  std::vector<std::vector<ParamPoly>> Q;
  std::vector<ParamPoly> rhs;
  std::vector<ParamPoly> constraints;
  std::vector<int> free_cols;
  bool det_zero = false;
};

/// Runs one recursion step up to (not including) constraint resolution.
/// Returns false when the step cannot be handled (state marked UNRESOLVED).
bool solve_step(const Plan& P, State& S, int j, StepResult& R) {
  const std::size_t n = static_cast<std::size_t>(P.n);
  for (auto& col : S.c) col.emplace_back();
  extend(P, S, j);  // with c_j = 0
  std::vector<ParamPoly> K(n);
  for (std::size_t t = 0; t < P.terms.size(); ++t) {
    const Term& T = P.terms[t];
    const int d = P.m[static_cast<std::size_t>(T.eq)] + j - T.E;
    if (d < 0) continue;
    ParamPoly pc = product_coeff(P, S, t, d);
    if (!pc.is_zero()) K[static_cast<std::size_t>(T.eq)] += pc * T.coeff;
  }
  R.Q = evaluate_matrix(P.Q, QuadExt(j));
  for (auto& row : R.Q)
    for (auto& x : row) x = x.substitute(S.fixed);
  for (auto& k : K) R.rhs.push_back(-k);
  R.det_zero = determinant([&] {
                 RMatrix m;
                 for (const auto& row : R.Q) {
                   std::vector<RPoly> r;
                   for (const auto& x : row) r.emplace_back(x);
                   m.push_back(std::move(r));
                 }
                 return m;
               }())
                   .is_zero();

  // Gauss-Jordan with single-term pivots.
  auto M = R.Q;
  auto b = R.rhs;
  std::vector<int> pivot_row(n, -1);
  std::vector<bool> used(n, false);
  for (std::size_t col = 0; col < n; ++col) {
    int pr = -1;
    bool blocked = false;
    for (std::size_t r = 0; r < n; ++r) {
      if (used[r] || M[r][col].is_zero()) continue;
      if (M[r][col].is_single_term()) {
        pr = static_cast<int>(r);
        break;
      }
      blocked = true;
    }
    if (pr < 0) {
      if (blocked) {
        S.status = BranchStatus::UNRESOLVED;
        S.diagnostic = "step " + std::to_string(j) + ": pivot in column " + P.vars[col] + " is not a single term";
        return false;
      }
      R.free_cols.push_back(static_cast<int>(col));
      continue;
    }
    const std::size_t p = static_cast<std::size_t>(pr);
    const ParamPoly piv = M[p][col];
    for (auto& x : M[p]) x = x.divided_by_term(piv);
    b[p] = b[p].divided_by_term(piv);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == p || M[r][col].is_zero()) continue;
      const ParamPoly f = M[r][col];
      for (std::size_t k = 0; k < n; ++k) M[r][k] -= f * M[p][k];
      b[r] -= f * b[p];
    }
    used[p] = true;
    pivot_row[col] = pr;
  }
  for (std::size_t r = 0; r < n; ++r)
    if (!used[r]) R.constraints.push_back(b[r]);

  // Free directions become parameters.
  std::vector<ParamPoly> u(n);
  for (int fc : R.free_cols) {
    const int power = P.alpha[static_cast<std::size_t>(fc)] + j;
    const std::string nm = series_param_name(P.vars[static_cast<std::size_t>(fc)], power);
    const ParamId id = S.next_id++;
    S.names[id] = nm;
    S.registry.push_back({nm, id, j, fc, power});
    u[static_cast<std::size_t>(fc)] = ParamPoly::variable(id);
    auto it = P.params->find(nm);
    if (it != P.params->end()) {
      u[static_cast<std::size_t>(fc)] = ParamPoly(it->second);
      S.fixed[id] = it->second;
    }
  }
  for (std::size_t col = 0; col < n; ++col) {
    if (pivot_row[col] < 0) continue;
    const std::size_t p = static_cast<std::size_t>(pivot_row[col]);
    ParamPoly val = b[p];
    for (int fc : R.free_cols) {
      const ParamPoly& coef = M[p][static_cast<std::size_t>(fc)];
      if (!coef.is_zero()) val -= coef * u[static_cast<std::size_t>(fc)];
    }
    u[col] = std::move(val);
  }
  for (std::size_t v = 0; v < n; ++v) S.c[v][static_cast<std::size_t>(j)] = u[v];
  extend(P, S, j);
  return true;
}

/// Resolves constraints[idx..] on S, appending finished children to out via
/// the continuation.
void resolve(const Plan& P, State S, std::vector<ParamPoly> constraints, std::size_t idx, int j, ConstraintRecord rec,
             const std::function<void(State)>& cont) {
  const auto nm = S.namer();
  for (; idx < constraints.size(); ++idx) {
    ParamPoly c = constraints[idx].substitute(S.fixed);
    if (c.is_zero()) continue;
    c = strip_leading_content(c, P.n);
    if (c.is_constant()) {
      S.status = BranchStatus::LOG_REQUIRED;
      S.diagnostic = "step " + std::to_string(j) + ": compatibility condition " + constraints[idx].substitute(S.fixed).str(nm) +
                     " = 0 cannot hold";
      rec.resolution += (rec.resolution.empty() ? "" : "; ") + std::string("violated");
      S.log.push_back(rec);
      cont(std::move(S));
      return;
    }
    const auto vs = c.variables();
    if (vs.size() > 1) {
      S.status = BranchStatus::UNRESOLVED;
      S.diagnostic = "step " + std::to_string(j) + ": constraint " + c.str(nm) + " = 0 involves several parameters";
      rec.resolution += (rec.resolution.empty() ? "" : "; ") + std::string("unresolved");
      S.log.push_back(rec);
      cont(std::move(S));
      return;
    }
    const ParamId id = *vs.begin();
    const bool leading = id < P.n;
    auto [poly, shift] = c.to_univariate(id);
    if (poly.degree() > 6) {
      S.status = BranchStatus::UNRESOLVED;
      S.diagnostic = "step " + std::to_string(j) + ": constraint of degree " + std::to_string(poly.degree()) + " in " + nm(id);
      rec.resolution += (rec.resolution.empty() ? "" : "; ") + std::string("unresolved");
      S.log.push_back(rec);
      cont(std::move(S));
      return;
    }
    std::vector<QuadExt> roots;
    bool inexact = false;
    for (const auto& r : solve_polynomial(poly)) {
      if (!r.exact) {
        inexact = true;
        continue;
      }
      if (r.exact->is_zero() && leading) continue;
      roots.push_back(*r.exact);
    }
    if (!leading && shift < 0 && std::find(roots.begin(), roots.end(), QuadExt(0)) == roots.end()) {
      roots.push_back(QuadExt(0));
      std::sort(roots.begin(), roots.end(), QuadExt::canonical_less);
    }
    if (inexact) {
      State U = S;
      U.status = BranchStatus::UNRESOLVED;
      U.diagnostic = "step " + std::to_string(j) + ": constraint " + c.str(nm) + " = 0 has roots outside one quadratic extension";
      ConstraintRecord r2 = rec;
      r2.resolution += (r2.resolution.empty() ? "" : "; ") + std::string("unresolved (inexact roots)");
      U.log.push_back(r2);
      cont(std::move(U));
    }
    if (roots.empty()) {
      if (inexact) return;
      S.status = BranchStatus::LOG_REQUIRED;
      S.diagnostic = "step " + std::to_string(j) + ": constraint " + c.str(nm) + " = 0 has no admissible root";
      rec.resolution += (rec.resolution.empty() ? "" : "; ") + std::string("no admissible root");
      S.log.push_back(rec);
      cont(std::move(S));
      return;
    }
    for (const auto& root : roots) {
      State child = S;
      ConstraintRecord r2 = rec;
      const std::string label = nm(id) + " = " + root.str();
      try {
        substitute_all(child, id, root);
      } catch (const FieldTowerError& e) {
        child.status = BranchStatus::UNRESOLVED;
        child.labels.push_back(label);
        child.diagnostic = "step " + std::to_string(j) + ": " + label + " needs a field tower";
        r2.resolution += (r2.resolution.empty() ? "" : "; ") + label + " (field tower)";
        child.log.push_back(r2);
        cont(std::move(child));
        continue;
      }
      child.registry.erase(std::remove_if(child.registry.begin(), child.registry.end(),
                                          [&](const RegistryEntry& e) { return e.id == id; }),
                           child.registry.end());
      child.labels.push_back(label);
      r2.resolution += (r2.resolution.empty() ? "" : "; ") + label;
      resolve(P, std::move(child), constraints, idx + 1, j, std::move(r2), cont);
    }
    return;
  }
  if (rec.resolution.empty()) rec.resolution = "satisfied identically";
  S.log.push_back(std::move(rec));
  cont(std::move(S));
}

LaurentSolution finish(const Plan& P, State& S, const BalanceCandidate&) {
  LaurentSolution L;
  L.vars = P.vars;
  L.start = P.alpha;
  L.coeffs = S.c;
  for (auto& col : L.coeffs) col.resize(static_cast<std::size_t>(S.done) + 1);
  L.registry = S.registry;
  L.names = S.names;
  L.fixed = S.fixed;
  L.log = S.log;
  L.status = S.status;
  L.diagnostic = S.diagnostic;
  L.order = S.done;
  L.mode = P.mode;
  for (const auto& l : S.labels) L.branch_id += (L.branch_id.empty() ? "" : ", ") + l;
  if (L.branch_id.empty()) L.branch_id = "main";
  return L;
}

void run(const Plan& P, State S, int from, int order, int stop_at, std::vector<State>& finished,
         std::vector<StepSystem>* captured) {
  for (int j = from; j <= order; ++j) {
    StepResult R;
    if (!solve_step(P, S, j, R)) {
      S.done = j - 1;
      for (auto& col : S.c) col.resize(static_cast<std::size_t>(j));
      finished.push_back(std::move(S));
      return;
    }
    if (j == stop_at) {
      if (!R.det_zero) throw std::invalid_argument("det Q(" + std::to_string(j) + ") is nonzero; no compatibility condition");
      StepSystem sys;
      sys.step = j;
      sys.Q = R.Q;
      sys.rhs = R.rhs;
      sys.constraints = R.constraints;
      auto names = S.names;
      sys.namer = [names](ParamId id) {
        auto it = names.find(id);
        return it == names.end() ? "p" + std::to_string(id) : it->second;
      };
      captured->push_back(std::move(sys));
      return;
    }
    S.done = j;
    if (!R.det_zero && R.constraints.empty()) continue;
    ConstraintRecord rec;
    rec.step = j;
    const auto nm = S.namer();
    for (const auto& c : R.constraints) rec.conditions.push_back(c.str(nm) + " = 0");
    std::vector<State> children;
    resolve(P, std::move(S), R.constraints, 0, j, std::move(rec), [&](State child) { children.push_back(std::move(child)); });
    for (auto& child : children) {
      if (child.status != BranchStatus::OK) {
        finished.push_back(std::move(child));
        continue;
      }
      run(P, std::move(child), j + 1, order, stop_at, finished, captured);
    }
    return;
  }
  finished.push_back(std::move(S));
}

}  // namespace

std::vector<LaurentSolution> expand(const PolyODESystem& system, const BalanceCandidate& candidate, int order,
                                    SeriesMode mode, const std::map<std::string, QuadExt>& params) {
  if (order < 1) throw std::invalid_argument("order must be at least 1");
  const ResonanceReport rr = analyze_resonances(system, candidate);
  if (rr.reduced) {
    const int need = rr.max_positive_integer();
    if (order < need)
      throw std::invalid_argument("order " + std::to_string(order) + " is below the largest resonance " + std::to_string(need));
  }
  Plan P = make_plan(system, candidate, mode, params);
  std::vector<State> finished;
  run(P, initial_state(P, candidate), 1, order, -1, finished, nullptr);
  std::vector<LaurentSolution> out;
  for (auto& S : finished) {
    LaurentSolution L = finish(P, S, candidate);
    if (mode == SeriesMode::EVALUATED && L.status == BranchStatus::OK) {
      for (const auto& e : L.registry)
        if (!L.fixed.count(e.id)) throw std::invalid_argument("missing value for parameter " + e.name);
    }
    out.push_back(std::move(L));
  }
  return out;
}

std::vector<StepSystem> compatibility_system(const PolyODESystem& system, const BalanceCandidate& candidate, int step,
                                             SeriesMode mode, const std::map<std::string, QuadExt>& params) {
  if (step < 1) throw std::invalid_argument("step must be positive");
  Plan P = make_plan(system, candidate, mode, params);
  std::vector<State> finished;
  std::vector<StepSystem> captured;
  run(P, initial_state(P, candidate), 1, step, step, finished, &captured);
  return captured;
}

std::vector<std::vector<QuadExt>> evaluated_table(const LaurentSolution& s, const std::map<std::string, QuadExt>& params) {
  std::map<ParamId, QuadExt> vals = s.fixed;
  for (const auto& [name, v] : params) {
    auto id = s.param_id(name);
    if (!id) throw std::invalid_argument("unknown parameter " + name);
    vals[*id] = v;
  }
  std::vector<std::vector<QuadExt>> out;
  for (const auto& col : s.coeffs) {
    std::vector<QuadExt> row;
    row.reserve(col.size());
    for (const auto& c : col) row.push_back(c.evaluate(vals));
    out.push_back(std::move(row));
  }
  return out;
}

std::map<std::pair<std::string, int>, QuadExt> evaluate_coefficients(const LaurentSolution& s,
                                                                     const std::map<std::string, QuadExt>& params,
                                                                     int upto) {
  const auto table = evaluated_table(s, params);
  std::map<std::pair<std::string, int>, QuadExt> out;
  for (std::size_t v = 0; v < table.size(); ++v)
    for (std::size_t j = 0; j < table[v].size(); ++j) {
      const int power = s.start[v] + static_cast<int>(j);
      if (power > upto) break;
      out[{s.vars[v], power}] = table[v][j];
    }
  return out;
}

}  // namespace painleve
