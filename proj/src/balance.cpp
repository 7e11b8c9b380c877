#include "painleve/balance.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "painleve/parampoly.hpp"

namespace painleve {

BigRational falling_factorial(const BigRational& alpha, int k) {
  BigRational r(1);
  for (int i = 0; i < k; ++i) r *= alpha - BigRational(i);
  return r;
}

bool BalanceCandidate::integer_exponents() const {
  return std::all_of(exponents.begin(), exponents.end(), [](const BigRational& a) { return a.is_integer(); });
}

namespace {

std::vector<BigRational> grid_values(const BalanceOptions& o) {
  if (o.denominator_bound < 1 || o.denominator_bound > 2)
    throw std::invalid_argument("denominator bound must be 1 or 2");
  std::set<BigRational> vals;
  for (int q = 1; q <= o.denominator_bound; ++q) {
    BigRational step(1, q);
    // first multiple of 1/q not below lo
    BigInt n = o.lo.numerator() * q;
    mpz_cdiv_q(n.get_mpz_t(), n.get_mpz_t(), o.lo.denominator().get_mpz_t());
    for (BigRational v(n, q); v <= o.hi; v += step) vals.insert(v);
  }
  return {vals.begin(), vals.end()};
}

ParamPoly strip_content(const ParamPoly& p) {
  if (p.is_zero()) return p;
  ParamPoly m(1);
  for (ParamId id : p.variables()) {
    const int lo = p.min_exponent(id);
    if (lo != 0) m *= ParamPoly::variable(id, lo);
  }
  return m.is_constant() ? p : p.divided_by_term(m);
}

struct SolveOutcome {
  std::vector<std::map<ParamId, QuadExt>> solutions;
  bool unresolved = false;
  std::string why;
};

std::string names_for(ParamId id) { return "a" + std::to_string(id + 1); }

void solve_rec(const std::vector<ParamPoly>& eqs, const std::map<ParamId, QuadExt>& vals, SolveOutcome& out) {
  std::vector<ParamPoly> E;
  for (const auto& e : eqs) {
    ParamPoly s = strip_content(e);
    if (s.is_zero()) continue;
    if (s.is_constant()) return;  // inconsistent: forces a zero coefficient
    E.push_back(std::move(s));
  }
  if (E.empty()) {
    out.solutions.push_back(vals);
    return;
  }
  const ParamPoly* uni = nullptr;
  for (const auto& e : E)
    if (e.variables().size() == 1) {
      uni = &e;
      break;
    }
  if (!uni) {
    out.unresolved = true;
    std::string s;
    for (const auto& e : E) s += (s.empty() ? "" : "; ") + e.str(names_for) + " = 0";
    out.why = "leading-order system outside the supported elimination pattern: " + s;
    return;
  }
  const ParamId id = *uni->variables().begin();
  const QPoly poly = uni->to_univariate(id).first;
  for (const auto& root : solve_polynomial(poly)) {
    if (!root.exact) {
      out.unresolved = true;
      out.why = "leading coefficient " + names_for(id) + " is a root of " + to_string(poly, names_for(id)) +
                " that is not expressible in one quadratic extension";
      continue;
    }
    if (root.exact->is_zero()) continue;
    try {
      std::vector<ParamPoly> next;
      next.reserve(E.size());
      for (const auto& e : E) next.push_back(e.substitute(id, *root.exact));
      auto v2 = vals;
      v2[id] = *root.exact;
      solve_rec(next, v2, out);
    } catch (const FieldTowerError& e) {
      out.unresolved = true;
      out.why = std::string("leading coefficients need a field tower: ") + e.what();
    }
  }
}

// Exponent and leading factor of one term under x_v = a_v t^alpha_v.
struct TermInfo {
  BigRational exponent;
  QuadExt factor;  // coefficient times falling factorials
};

TermInfo term_info(const JetPolynomial::Monomial& m, const QuadExt& c, const std::vector<BigRational>& alpha) {
  TermInfo t{BigRational(0), c};
  for (const auto& [v, e] : m) {
    const BigRational& a = alpha[static_cast<std::size_t>(v.var)];
    t.exponent += BigRational(e) * (a - BigRational(v.order));
    t.factor *= QuadExt(falling_factorial(a, v.order).pow(e));
  }
  return t;
}

ParamPoly lead_monomial(const JetPolynomial::Monomial& m) {
  ParamPoly::Monomial pm;
  std::map<ParamId, int> acc;
  for (const auto& [v, e] : m) acc[v.var] += e;
  for (const auto& [id, e] : acc) pm.emplace_back(id, e);
  return ParamPoly::term(pm, QuadExt(1));
}

std::vector<BalanceCandidate> evaluate_point(const PolyODESystem& sys, const std::vector<BigRational>& alpha) {
  BalanceCandidate base;
  base.exponents = alpha;
  std::vector<ParamPoly> eqs;
  for (const auto& eq : sys.equations) {
    std::vector<std::pair<const JetPolynomial::Monomial*, TermInfo>> infos;
    for (const auto& [m, c] : eq.terms()) {
      TermInfo ti = term_info(m, c, alpha);
      if (!ti.factor.is_zero()) infos.emplace_back(&m, std::move(ti));
    }
    if (infos.size() < 2) return {};
    BigRational lo = infos.front().second.exponent;
    for (const auto& [m, ti] : infos) lo = std::min(lo, ti.exponent);
    std::vector<JetPolynomial::Monomial> subset;
    ParamPoly L;
    for (const auto& [m, ti] : infos) {
      if (ti.exponent != lo) continue;
      subset.push_back(*m);
      L += lead_monomial(*m) * ti.factor;
    }
    if (subset.size() < 2) return {};
    base.leading_terms.push_back(std::move(subset));
    base.equation_orders.push_back(lo);
    eqs.push_back(std::move(L));
  }
  SolveOutcome outcome;
  solve_rec(eqs, {}, outcome);
  std::vector<BalanceCandidate> out;
  for (const auto& sol : outcome.solutions) {
    BalanceCandidate c = base;
    c.leading.resize(alpha.size());
    for (std::size_t v = 0; v < alpha.size(); ++v) {
      auto it = sol.find(static_cast<ParamId>(v));
      if (it != sol.end()) c.leading[v] = it->second;
    }
    out.push_back(std::move(c));
  }
  if (outcome.unresolved) {
    BalanceCandidate c = base;
    c.leading.resize(alpha.size());
    c.unresolved = true;
    c.diagnostic = outcome.why;
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<BigRational> decode(std::size_t idx, const std::vector<BigRational>& grid, int n) {
  std::vector<BigRational> alpha(static_cast<std::size_t>(n));
  for (int v = n - 1; v >= 0; --v) {
    alpha[static_cast<std::size_t>(v)] = grid[idx % grid.size()];
    idx /= grid.size();
  }
  return alpha;
}

std::size_t grid_size(std::size_t g, int n) {
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= g;
  return total;
}

std::vector<BalanceCandidate> merge_points(std::vector<std::vector<BalanceCandidate>>& per_point) {
  std::vector<BalanceCandidate> out;
  for (auto& v : per_point)
    for (auto& c : v) {
      if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(std::move(c));
    }
  // Grid order is already lexicographic in the exponent tuple; keep it stable.
  std::stable_sort(out.begin(), out.end(),
                   [](const BalanceCandidate& a, const BalanceCandidate& b) { return a.exponents < b.exponents; });
  return out;
}

}  // namespace

std::vector<BalanceCandidate> find_balances(const PolyODESystem& system, const BalanceOptions& opts) {
  const auto grid = grid_values(opts);
  const int n = system.size();
  const std::size_t total = grid_size(grid.size(), n);
  std::vector<std::vector<BalanceCandidate>> per_point(total);
  const long long total_ll = static_cast<long long>(total);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < total_ll; ++i)
    per_point[static_cast<std::size_t>(i)] = evaluate_point(system, decode(static_cast<std::size_t>(i), grid, n));
  return merge_points(per_point);
}

std::vector<BalanceCandidate> find_balances_serial(const PolyODESystem& system, const BalanceOptions& opts) {
  const auto grid = grid_values(opts);
  const int n = system.size();
  const std::size_t total = grid_size(grid.size(), n);
  std::vector<std::vector<BalanceCandidate>> per_point(total);
  for (std::size_t i = 0; i < total; ++i) per_point[i] = evaluate_point(system, decode(i, grid, n));
  return merge_points(per_point);
}

PolyODESystem leading_terms(const PolyODESystem& system, const BalanceCandidate& candidate) {
  PolyODESystem out;
  out.vars = system.vars;
  out.hh = system.hh;
  for (std::size_t i = 0; i < system.equations.size(); ++i) {
    const auto& eq = system.equations[i];
    if (i >= candidate.leading_terms.size()) {
      out.equations.push_back(eq);
      continue;
    }
    JetPolynomial r;
    for (const auto& m : candidate.leading_terms[i]) {
      auto it = eq.terms().find(m);
      if (it != eq.terms().end()) r += JetPolynomial::term(m, it->second);
    }
    out.equations.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Off-grid exponents

namespace {

QPoly falling_poly(int k) {
  QPoly p(QuadExt(1));
  for (int i = 0; i < k; ++i) p = p * QPoly(std::vector<QuadExt>{QuadExt(-i), QuadExt(1)});
  return p;
}

bool on_grid(const PolyRoot& r, const BalanceOptions& o) {
  if (!r.exact || !r.exact->is_rational()) return false;
  const BigRational& q = r.exact->rational_part();
  if (q.denominator() > o.denominator_bound) return false;
  return q >= o.lo && q <= o.hi;
}

}  // namespace

std::vector<ExponentDiagnostic> exponent_diagnostics(const PolyODESystem& system, const BalanceOptions& opts) {
  std::vector<ExponentDiagnostic> out;
  const int n = system.size();
  if (n < 2) return out;
  for (int v = 0; v < n; ++v) {
    // Remaining variables balanced with v absent.
    PolyODESystem reduced;
    std::vector<int> keep;
    for (int w = 0; w < n; ++w) {
      if (w == v) continue;
      keep.push_back(w);
      reduced.vars.push_back(system.vars[static_cast<std::size_t>(w)]);
    }
    auto remap = [&](int w) { return static_cast<int>(std::find(keep.begin(), keep.end(), w) - keep.begin()); };
    for (int w : keep) {
      JetPolynomial r;
      for (const auto& [m, c] : system.equations[static_cast<std::size_t>(w)].terms()) {
        bool has_v = false;
        JetPolynomial::Monomial mm;
        for (const auto& [jv, e] : m) {
          if (jv.var == v) has_v = true;
          mm.emplace_back(JetVar{remap(jv.var), jv.order}, e);
        }
        if (!has_v) r += JetPolynomial::term(mm, c);
      }
      reduced.equations.push_back(r);
    }
    const auto sub = find_balances_serial(reduced, opts);

    const JetPolynomial& owner = system.equations[static_cast<std::size_t>(v)];
    for (const auto& rc : sub) {
      if (rc.unresolved) continue;
      if (std::any_of(rc.leading.begin(), rc.leading.end(), [](const auto& a) { return !a.has_value(); })) continue;
      std::vector<BigRational> beta(static_cast<std::size_t>(n));
      std::vector<QuadExt> lead(static_cast<std::size_t>(n));
      for (std::size_t k = 0; k < keep.size(); ++k) {
        beta[static_cast<std::size_t>(keep[k])] = rc.exponents[k];
        lead[static_cast<std::size_t>(keep[k])] = *rc.leading[k];
      }
      // Owner terms: v-degree d, shift s (exponent = d*alpha + s), factor in alpha.
      struct OT {
        int d;
        BigRational s;
        QPoly factor;
      };
      std::vector<OT> terms;
      int dmin = -1;
      for (const auto& [m, c] : owner.terms()) {
        OT t{0, BigRational(0), QPoly(c)};
        for (const auto& [jv, e] : m) {
          if (jv.var == v) {
            t.d += e;
            t.s -= BigRational(e * jv.order);
            QPoly f = falling_poly(jv.order);
            for (int i = 0; i < e; ++i) t.factor = t.factor * f;
          } else {
            const BigRational& b = beta[static_cast<std::size_t>(jv.var)];
            t.s += BigRational(e) * (b - BigRational(jv.order));
            t.factor = t.factor.scaled(QuadExt(falling_factorial(b, jv.order).pow(e)) * lead[static_cast<std::size_t>(jv.var)].pow(e));
          }
        }
        if (t.factor.is_zero()) continue;
        dmin = dmin < 0 ? t.d : std::min(dmin, t.d);
        terms.push_back(std::move(t));
      }
      if (dmin < 1) continue;  // forcing terms free of v: not an indicial problem
      BigRational smin;
      bool first = true;
      for (const auto& t : terms)
        if (t.d == dmin && (first || t.s < smin)) {
          smin = t.s;
          first = false;
        }
      QPoly P;
      for (const auto& t : terms)
        if (t.d == dmin && t.s == smin) P = P + t.factor;
      if (P.degree() < 1) continue;

      for (const auto& root : solve_polynomial(P)) {
        if (on_grid(root, opts)) continue;
        const double re = root.approx.re.to_double();
        if (root.kind == RootKind::Integer || (root.kind == RootKind::RationalNonInteger && re >= 0)) continue;
        // Subdominance of every other term involving v.
        bool ok = true;
        const double lead_exp = dmin * re + smin.to_double();
        for (const auto& t : terms)
          if (t.d > dmin && !(t.d * re + t.s.to_double() > lead_exp + 1e-12)) ok = false;
        for (std::size_t k = 0; k < keep.size() && ok; ++k) {
          const int w = keep[k];
          const double m_w = rc.equation_orders[k].to_double();
          for (const auto& [m, c] : system.equations[static_cast<std::size_t>(w)].terms()) {
            int d = 0;
            double s = 0;
            for (const auto& [jv, e] : m) {
              if (jv.var == v) {
                d += e;
                s -= e * jv.order;
              } else {
                s += e * (beta[static_cast<std::size_t>(jv.var)].to_double() - jv.order);
              }
            }
            if (d > 0 && !(d * re + s > m_w + 1e-12)) ok = false;
          }
        }
        if (!ok) continue;
        ExponentDiagnostic dgn;
        dgn.var = v;
        dgn.root = root;
        dgn.text = "exponent of " + system.vars[static_cast<std::size_t>(v)] + " is " + root.str() + " [" +
                   to_string(root.kind) + "], a root of " + to_string(P, "alpha");
        bool dup = false;
        for (const auto& o : out)
          if (o.text == dgn.text) dup = true;
        if (!dup) out.push_back(std::move(dgn));
      }
    }
  }
  return out;
}

}  // namespace painleve
