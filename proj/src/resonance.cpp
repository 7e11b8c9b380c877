#include "painleve/resonance.hpp"

#include <algorithm>
#include <map>

namespace painleve {

std::string leading_param_name(int v) { return "a" + std::to_string(v + 1); }

namespace {

ParamPoly leading_value(const BalanceCandidate& c, int v) {
  const auto& l = c.leading.at(static_cast<std::size_t>(v));
  return l ? ParamPoly(*l) : ParamPoly::variable(v);
}

/// (alpha + r)(alpha + r - 1)...(alpha + r - k + 1) as a polynomial in r.
RPoly shifted_falling(const BigRational& alpha, int k) {
  RPoly p(ParamPoly(1));
  for (int i = 0; i < k; ++i)
    p = p * RPoly(std::vector<ParamPoly>{ParamPoly(alpha - BigRational(i)), ParamPoly(1)});
  return p;
}

}  // namespace

RMatrix resonance_matrix(const PolyODESystem& simplified, const BalanceCandidate& candidate) {
  const int n = simplified.size();
  if (static_cast<int>(candidate.exponents.size()) != n || static_cast<int>(candidate.leading.size()) != n)
    throw std::invalid_argument("candidate does not match the system");
  RMatrix Q(static_cast<std::size_t>(n), std::vector<RPoly>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i) {
    for (const auto& [m, c] : simplified.equations[static_cast<std::size_t>(i)].terms()) {
      for (std::size_t p = 0; p < m.size(); ++p) {
        const JetVar jv = m[p].first;
        const int e = m[p].second;
        ParamPoly rest = ParamPoly(c) * ParamPoly(QuadExt(e));
        for (std::size_t q = 0; q < m.size(); ++q) {
          const JetVar w = m[q].first;
          const int ew = q == p ? m[q].second - 1 : m[q].second;
          if (ew == 0) continue;
          ParamPoly L = leading_value(candidate, w.var) *
                        QuadExt(falling_factorial(candidate.exponents[static_cast<std::size_t>(w.var)], w.order));
          for (int k = 0; k < ew; ++k) rest *= L;
        }
        if (rest.is_zero()) continue;
        RPoly contrib = shifted_falling(candidate.exponents[static_cast<std::size_t>(jv.var)], jv.order);
        Q[static_cast<std::size_t>(i)][static_cast<std::size_t>(jv.var)] += contrib * RPoly(rest);
      }
    }
  }
  return Q;
}

RPoly determinant(const RMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) return RPoly(ParamPoly(1));
  if (n == 1) return m[0][0];
  if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  RPoly acc;
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j].is_zero()) continue;
    RMatrix minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<RPoly> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(m[i][k]);
      minor.push_back(std::move(row));
    }
    RPoly term = m[0][j] * determinant(minor);
    if (j % 2)
      acc -= term;
    else
      acc += term;
  }
  return acc;
}

std::vector<std::vector<ParamPoly>> evaluate_matrix(const RMatrix& m, const QuadExt& r) {
  std::vector<std::vector<ParamPoly>> out;
  for (const auto& row : m) {
    std::vector<ParamPoly> orow;
    for (const auto& p : row) {
      ParamPoly acc;
      for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it) acc = acc * r + *it;
      orow.push_back(std::move(acc));
    }
    out.push_back(std::move(orow));
  }
  return out;
}

std::string to_string(const RPoly& p, const std::string& var) {
  if (p.is_zero()) return "0";
  auto namer = [](ParamId id) { return leading_param_name(id); };
  std::string out;
  for (int k = p.degree(); k >= 0; --k) {
    const ParamPoly& c = p.coeffs()[static_cast<std::size_t>(k)];
    if (c.is_zero()) continue;
    std::string mono = k == 0 ? "" : (k == 1 ? var : var + "^" + std::to_string(k));
    if (c.is_constant()) {
      std::string s = format_sum({{c.as_constant(), mono}});
      if (out.empty())
        out = s;
      else if (s[0] == '-')
        out += " - " + s.substr(1);
      else
        out += " + " + s;
    } else {
      std::string s = "(" + c.str(namer) + ")" + (mono.empty() ? "" : "*" + mono);
      out += (out.empty() ? "" : " + ") + s;
    }
  }
  return out;
}

int ResonanceReport::max_positive_integer() const {
  int best = 0;
  for (const auto& r : roots)
    if (r.kind == RootKind::Integer && r.exact) {
      const BigInt v = r.exact->rational_part().numerator();
      if (v > best) best = static_cast<int>(v.get_si());
    }
  return best;
}

bool ResonanceReport::all_integer() const {
  return !roots.empty() && std::all_of(roots.begin(), roots.end(), [](const PolyRoot& r) { return r.kind == RootKind::Integer; });
}

bool ResonanceReport::all_rational() const {
  return !roots.empty() && std::all_of(roots.begin(), roots.end(), [](const PolyRoot& r) {
    return r.kind == RootKind::Integer || r.kind == RootKind::RationalNonInteger;
  });
}

std::vector<PolyRoot> resonance_roots(const QPoly& det, int decimal_digits) {
  if (det.is_zero()) throw std::invalid_argument("determinant vanishes identically");
  return solve_polynomial(det, decimal_digits);
}

namespace {

/// det = content * q(r) with q free of parameters, if possible.
std::optional<QPoly> strip_parameters(const RPoly& det) {
  const ParamPoly* ref = nullptr;
  for (const auto& c : det.coeffs())
    if (!c.is_zero()) {
      ref = &c;
      break;
    }
  if (!ref) return std::nullopt;
  const auto& [rm, rc] = *ref->terms().begin();
  std::vector<QuadExt> q;
  for (const auto& c : det.coeffs()) {
    if (c.is_zero()) {
      q.emplace_back(0);
      continue;
    }
    // c must equal ratio * ref.
    auto it = c.terms().find(rm);
    if (it == c.terms().end()) return std::nullopt;
    QuadExt ratio = it->second / rc;
    if (!(c == *ref * ratio)) return std::nullopt;
    q.push_back(ratio);
  }
  return QPoly(std::move(q));
}

}  // namespace

ResonanceReport analyze_resonances(const PolyODESystem& system, const BalanceCandidate& candidate, int decimal_digits) {
  ResonanceReport rep;
  if (candidate.unresolved) {
    rep.degenerate = true;
    rep.diagnostic = "candidate unresolved: " + candidate.diagnostic;
    return rep;
  }
  const PolyODESystem simplified = leading_terms(system, candidate);
  rep.matrix = resonance_matrix(simplified, candidate);
  rep.determinant = determinant(rep.matrix);
  if (rep.determinant.is_zero()) {
    rep.degenerate = true;
    rep.diagnostic = "det Q(r) vanishes identically";
    return rep;
  }
  rep.reduced = strip_parameters(rep.determinant);
  if (!rep.reduced) {
    rep.diagnostic = "resonances depend on free leading coefficients: det Q(r) = " + to_string(rep.determinant);
    return rep;
  }
  rep.roots = resonance_roots(*rep.reduced, decimal_digits);
  rep.has_minus_one = std::any_of(rep.roots.begin(), rep.roots.end(),
                                  [](const PolyRoot& r) { return r.exact && *r.exact == QuadExt(-1); });
  if (!rep.has_minus_one) rep.diagnostic = "r = -1 is not a resonance";
  return rep;
}

const char* to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::PASSES: return "PASSES";
    case VerdictStatus::WEAK: return "WEAK";
    case VerdictStatus::FAILS: return "FAILS";
  }
  return "?";
}

const char* to_string(Compatibility c) {
  switch (c) {
    case Compatibility::NotChecked: return "NOT_CHECKED";
    case Compatibility::Compatible: return "COMPATIBLE";
    case Compatibility::LogRequired: return "LOG_REQUIRED";
    case Compatibility::Unresolved: return "UNRESOLVED";
  }
  return "?";
}

namespace {

std::string describe(const PolyODESystem& sys, const BalanceCandidate& c) {
  std::string s = "balance (";
  for (std::size_t v = 0; v < c.exponents.size(); ++v) {
    s += (v ? ", " : "") + sys.vars[v] + " ~ t^" + c.exponents[v].str();
  }
  s += ")";
  bool any = false;
  for (std::size_t v = 0; v < c.leading.size(); ++v) {
    if (!c.leading[v]) continue;
    s += any ? ", " : " with ";
    s += leading_param_name(static_cast<int>(v)) + " = " + c.leading[v]->str();
    any = true;
  }
  return s;
}

}  // namespace

PainleveVerdict classify(const PolyODESystem& system, const std::vector<CandidateAssessment>& assessments,
                         const std::vector<ExponentDiagnostic>& exponent_notes) {
  bool fails = false, weak = false;
  PainleveVerdict v;
  for (const auto& a : assessments) {
    const BalanceCandidate& c = *a.candidate;
    const std::string who = describe(system, c);
    if (c.unresolved) {
      v.conclusive = false;
      v.reasons.push_back("unresolved " + who + ": " + c.diagnostic);
      continue;
    }
    for (std::size_t k = 0; k < c.exponents.size(); ++k)
      if (!c.exponents[k].is_integer()) {
        weak = true;
        v.reasons.push_back("fractional exponent " + c.exponents[k].str() + " for " + system.vars[k] + " in " + who);
      }
    const ResonanceReport& r = *a.resonances;
    if (r.degenerate || !r.reduced) {
      v.conclusive = false;
      v.reasons.push_back(who + ": " + r.diagnostic);
      continue;
    }
    for (const auto& root : r.roots) {
      if (root.kind == RootKind::Irrational || root.kind == RootKind::Complex) {
        fails = true;
        v.reasons.push_back(std::string(root.kind == RootKind::Irrational ? "irrational" : "complex") + " resonance r = " +
                            root.str() + " in " + who);
      } else if (root.kind == RootKind::RationalNonInteger) {
        weak = true;
        v.reasons.push_back("non-integer rational resonance r = " + root.str() + " in " + who);
      }
    }
    switch (a.compatibility) {
      case Compatibility::LogRequired:
        fails = true;
        v.reasons.push_back("compatibility condition violated (logarithms required) in " + who +
                            (a.compatibility_note.empty() ? "" : ": " + a.compatibility_note));
        break;
      case Compatibility::Unresolved:
        v.conclusive = false;
        v.reasons.push_back("compatibility undecided in " + who +
                            (a.compatibility_note.empty() ? "" : ": " + a.compatibility_note));
        break;
      default:
        break;
    }
  }
  for (const auto& d : exponent_notes) {
    if (d.root.kind == RootKind::Irrational || d.root.kind == RootKind::Complex) {
      fails = true;
      v.reasons.push_back(std::string(d.root.kind == RootKind::Irrational ? "irrational" : "complex") +
                          " leading exponent: " + d.text);
    } else {
      weak = true;
      v.reasons.push_back("off-grid rational leading exponent: " + d.text);
    }
  }
  if (assessments.empty()) {
    v.conclusive = false;
    v.reasons.push_back("no dominant balance found on the exponent grid");
  }
  v.status = fails ? VerdictStatus::FAILS : (weak ? VerdictStatus::WEAK : VerdictStatus::PASSES);
  // A FAILS finding is decisive even when other candidates are undecided.
  if (fails) v.conclusive = true;
  return v;
}

}  // namespace painleve
