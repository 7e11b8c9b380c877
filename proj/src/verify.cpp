#include "painleve/verify.hpp"

#include <algorithm>
#include <stdexcept>

#include "painleve/balance.hpp"

namespace painleve {

namespace {

int clamp_prec(long p) { return p >= TruncatedSeries::kExact / 2 ? TruncatedSeries::kExact : static_cast<int>(p); }

TruncatedSeries normalized(TruncatedSeries s) {
  std::size_t lead = 0;
  while (lead < s.coeffs.size() && s.coeffs[lead].is_zero()) ++lead;
  if (lead == s.coeffs.size()) {
    s.coeffs.clear();
    if (!s.exact()) s.valuation = s.precision;
    return s;
  }
  s.coeffs.erase(s.coeffs.begin(), s.coeffs.begin() + static_cast<long>(lead));
  s.valuation += static_cast<int>(lead);
  while (!s.coeffs.empty() && s.coeffs.back().is_zero()) s.coeffs.pop_back();
  if (!s.exact()) {
    const long room = static_cast<long>(s.precision) - s.valuation;
    if (room < static_cast<long>(s.coeffs.size())) s.coeffs.resize(static_cast<std::size_t>(std::max(0L, room)));
  }
  return s;
}

std::string default_name(ParamId id) { return "p" + std::to_string(id); }

}  // namespace

TruncatedSeries TruncatedSeries::constant(const ParamPoly& c) {
  TruncatedSeries s;
  s.coeffs = {c};
  return normalized(std::move(s));
}

ParamPoly TruncatedSeries::at(int power) const {
  if (power >= precision) throw std::out_of_range("power " + std::to_string(power) + " beyond series precision");
  const long k = static_cast<long>(power) - valuation;
  if (k < 0 || k >= static_cast<long>(coeffs.size())) return ParamPoly();
  return coeffs[static_cast<std::size_t>(k)];
}

std::optional<int> TruncatedSeries::lowest_nonzero() const {
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const int p = valuation + static_cast<int>(k);
    if (p >= precision) break;
    if (!coeffs[k].is_zero()) return p;
  }
  return std::nullopt;
}

TruncatedSeries TruncatedSeries::derivative() const {
  TruncatedSeries d;
  d.valuation = valuation - 1;
  d.precision = exact() ? kExact : precision - 1;
  d.coeffs.reserve(coeffs.size());
  for (std::size_t k = 0; k < coeffs.size(); ++k) d.coeffs.push_back(coeffs[k] * QuadExt(valuation + static_cast<long>(k)));
  return normalized(std::move(d));
}

TruncatedSeries TruncatedSeries::pow(int e) const {
  if (e < 0) throw std::invalid_argument("negative power of a series");
  TruncatedSeries r = constant(ParamPoly(1));
  for (int i = 0; i < e; ++i) r = r * *this;
  return r;
}

TruncatedSeries TruncatedSeries::operator-() const {
  TruncatedSeries r = *this;
  for (auto& c : r.coeffs) c = -c;
  return r;
}

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
  TruncatedSeries r;
  r.precision = std::min(a.precision, b.precision);
  const bool az = a.coeffs.empty(), bz = b.coeffs.empty();
  if (az && bz) return normalized(std::move(r));
  r.valuation = az ? b.valuation : (bz ? a.valuation : std::min(a.valuation, b.valuation));
  long top = std::max(az ? LONG_MIN : a.valuation + static_cast<long>(a.coeffs.size()),
                      bz ? LONG_MIN : b.valuation + static_cast<long>(b.coeffs.size()));
  top = std::min<long>(top, r.precision);
  if (top <= r.valuation) {
    r.valuation = r.precision;
    return normalized(std::move(r));
  }
  r.coeffs.assign(static_cast<std::size_t>(top - r.valuation), ParamPoly());
  for (std::size_t k = 0; k < a.coeffs.size(); ++k) {
    const long p = a.valuation + static_cast<long>(k);
    if (p >= top) break;
    r.coeffs[static_cast<std::size_t>(p - r.valuation)] += a.coeffs[k];
  }
  for (std::size_t k = 0; k < b.coeffs.size(); ++k) {
    const long p = b.valuation + static_cast<long>(k);
    if (p >= top) break;
    r.coeffs[static_cast<std::size_t>(p - r.valuation)] += b.coeffs[k];
  }
  return normalized(std::move(r));
}

TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) { return a + (-b); }

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
  TruncatedSeries r;
  r.valuation = a.valuation + b.valuation;
  r.precision = clamp_prec(std::min(static_cast<long>(a.valuation) + b.precision,
                                    static_cast<long>(b.valuation) + a.precision));
  if (a.coeffs.empty() || b.coeffs.empty()) {
    if (!r.exact()) r.valuation = r.precision;
    r.coeffs.clear();
    return normalized(std::move(r));
  }
  long len = static_cast<long>(a.coeffs.size() + b.coeffs.size()) - 1;
  len = std::min<long>(len, static_cast<long>(r.precision) - r.valuation);
  if (len <= 0) {
    r.valuation = r.precision;
    return normalized(std::move(r));
  }
  r.coeffs.assign(static_cast<std::size_t>(len), ParamPoly());
  for (std::size_t i = 0; i < a.coeffs.size() && static_cast<long>(i) < len; ++i)
    for (std::size_t j = 0; j < b.coeffs.size() && static_cast<long>(i + j) < len; ++j)
      r.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
  return normalized(std::move(r));
}

TruncatedSeries operator*(const TruncatedSeries& a, const QuadExt& k) {
  TruncatedSeries r = a;
  for (auto& c : r.coeffs) c *= k;
  return normalized(std::move(r));
}

TruncatedSeries operator/(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (b.coeffs.empty() || !b.coeffs[0].is_constant() || b.coeffs[0].is_zero())
    throw std::domain_error("series division needs a nonzero constant leading coefficient");
  if (a.exact() && b.exact()) throw std::domain_error("quotient of exact polynomials needs a precision");
  const long rel = std::min(static_cast<long>(a.precision) - a.valuation, static_cast<long>(b.precision) - b.valuation);
  TruncatedSeries q;
  q.valuation = a.valuation - b.valuation;
  q.precision = static_cast<int>(q.valuation + rel);
  if (rel <= 0) {
    q.valuation = q.precision;
    return q;
  }
  const QuadExt inv = b.coeffs[0].as_constant().inverse();
  q.coeffs.resize(static_cast<std::size_t>(rel));
  for (long k = 0; k < rel; ++k) {
    ParamPoly acc = k < static_cast<long>(a.coeffs.size()) ? a.coeffs[static_cast<std::size_t>(k)] : ParamPoly();
    for (long i = 1; i <= k && i < static_cast<long>(b.coeffs.size()); ++i)
      acc -= b.coeffs[static_cast<std::size_t>(i)] * q.coeffs[static_cast<std::size_t>(k - i)];
    q.coeffs[static_cast<std::size_t>(k)] = acc * inv;
  }
  return normalized(std::move(q));
}

namespace {

std::map<ParamId, QuadExt> value_map(const LaurentSolution& sol, const std::map<std::string, QuadExt>& params) {
  std::map<ParamId, QuadExt> vals = sol.fixed;
  for (const auto& [name, v] : params) {
    auto id = sol.param_id(name);
    if (!id) throw std::invalid_argument("unknown parameter " + name);
    vals[*id] = v;
  }
  return vals;
}

bool fully_valued(const LaurentSolution& sol, const std::map<ParamId, QuadExt>& vals) {
  return std::all_of(sol.registry.begin(), sol.registry.end(), [&](const RegistryEntry& e) { return vals.count(e.id) > 0; });
}

std::vector<TruncatedSeries> all_series(const LaurentSolution& sol, int N, const std::map<std::string, QuadExt>& params,
                                        bool exact) {
  std::vector<TruncatedSeries> out;
  for (int v = 0; v < static_cast<int>(sol.vars.size()); ++v) out.push_back(truncated(sol, v, N, params, exact));
  return out;
}

std::string magnitude(const ParamPoly& c, const ParamPoly::Namer& nm) {
  if (!c.is_constant()) return c.str(nm);
  const QuadExt v = c.as_constant();
  if (!v.is_real()) return to_bigcomplex(v, decimal_to_bits(40)).abs().sci(1);
  return abs(to_bigfloat(v, decimal_to_bits(40))).sci(1);
}

const HHParams& require_hh(const PolyODESystem& system) {
  if (!system.hh || system.vars.size() != 2)
    throw std::invalid_argument("check requires a builtin Henon-Heiles system");
  return *system.hh;
}

void require_closed_form_case(const PolyODESystem& system) {
  const HHParams& hh = require_hh(system);
  if (!(hh.lambda == QuadExt(BigRational(1, 9))) || !(hh.C == QuadExt(BigRational(-16, 5))))
    throw std::invalid_argument("check requires lambda = 1/9 and C = -16/5");
}

/// Series of x^2 (z itself in the squared form).
TruncatedSeries squared_x(const PolyODESystem& system, const TruncatedSeries& first) {
  return system.hh->squared ? first : first * first;
}

}  // namespace

TruncatedSeries truncated(const LaurentSolution& solution, int var, int N, const std::map<std::string, QuadExt>& params,
                          bool exact_truncation) {
  if (var < 0 || var >= static_cast<int>(solution.coeffs.size())) throw std::out_of_range("variable index out of range");
  const auto& col = solution.coeffs[static_cast<std::size_t>(var)];
  if (N < 0 || N >= static_cast<int>(col.size()))
    throw std::out_of_range("truncation order " + std::to_string(N) + " exceeds the expansion (order " +
                            std::to_string(solution.order) + ")");
  const auto vals = value_map(solution, params);
  TruncatedSeries s;
  s.valuation = solution.start[static_cast<std::size_t>(var)];
  s.precision = exact_truncation ? TruncatedSeries::kExact : s.valuation + N + 1;
  for (int j = 0; j <= N; ++j) s.coeffs.push_back(col[static_cast<std::size_t>(j)].substitute(vals));
  return normalized(std::move(s));
}

TruncatedSeries substitute(const JetPolynomial& p, const std::vector<TruncatedSeries>& series) {
  std::map<JetVar, TruncatedSeries> jets;
  auto jet = [&](JetVar jv) -> const TruncatedSeries& {
    auto it = jets.find(jv);
    if (it != jets.end()) return it->second;
    TruncatedSeries s = series.at(static_cast<std::size_t>(jv.var));
    for (int k = 0; k < jv.order; ++k) s = s.derivative();
    return jets.emplace(jv, std::move(s)).first->second;
  };
  TruncatedSeries acc;
  acc.valuation = 0;
  for (const auto& [m, c] : p.terms()) {
    TruncatedSeries t = TruncatedSeries::constant(ParamPoly(c));
    for (const auto& [jv, e] : m) t = t * jet(jv).pow(e);
    acc = acc + t;
  }
  return acc;
}

CheckResult check_of(const TruncatedSeries& s, const ParamPoly::Namer& namer, bool skip_constant) {
  const ParamPoly::Namer nm = namer ? namer : ParamPoly::Namer(default_name);
  CheckResult r;
  r.window_end = s.exact() ? s.valuation + static_cast<int>(s.coeffs.size()) : s.precision;
  for (std::size_t k = 0; k < s.coeffs.size(); ++k) {
    const int p = s.valuation + static_cast<int>(k);
    if (p >= r.window_end) break;
    if (s.coeffs[k].is_zero() || (skip_constant && p == 0)) continue;
    r.lowest_nonzero = p;
    r.coefficient = s.coeffs[k].str(nm);
    break;
  }
  return r;
}

bool ResidualProfile::consistent() const {
  return std::all_of(equations.begin(), equations.end(), [&](const EquationResidual& e) {
    return !e.lowest_nonzero || *e.lowest_nonzero >= e.matched_power + N + 1;
  });
}

ResidualProfile residual_order(const PolyODESystem& system, const LaurentSolution& solution, int N,
                               const std::map<std::string, QuadExt>& params) {
  if (system.vars != solution.vars) throw std::invalid_argument("solution does not belong to the system");
  ResidualProfile prof;
  prof.N = N;
  prof.exact = fully_valued(solution, value_map(solution, params));
  const auto series = all_series(solution, N, params, prof.exact);
  const auto nm = solution.namer();
  for (const auto& eq : system.equations) {
    EquationResidual er;
    bool first = true;
    for (const auto& [m, c] : eq.terms()) {
      long e = 0;
      for (const auto& [jv, k] : m) e += static_cast<long>(k) * (solution.start[static_cast<std::size_t>(jv.var)] - jv.order);
      if (first || e < er.matched_power) er.matched_power = static_cast<int>(e);
      first = false;
    }
    const TruncatedSeries R = substitute(eq, series);
    const CheckResult cr = check_of(R, nm);
    er.lowest_nonzero = cr.lowest_nonzero;
    if (cr.lowest_nonzero) er.magnitude = magnitude(R.at(*cr.lowest_nonzero), nm);
    er.checked_through = cr.window_end - 1;
    prof.equations.push_back(std::move(er));
  }
  return prof;
}

EnergyResult energy_series(const PolyODESystem& system, const LaurentSolution& solution,
                           const std::map<std::string, QuadExt>& params, int N) {
  const HHParams& hh = require_hh(system);
  const auto s = all_series(solution, N, params, false);
  const TruncatedSeries& y = s[1];
  TruncatedSeries x2, xt2;
  if (hh.squared) {
    const TruncatedSeries& z = s[0];
    if (z.coeffs.empty() || !z.coeffs[0].is_constant())
      throw std::domain_error("energy needs a nonzero leading coefficient of z");
    const TruncatedSeries zt = z.derivative();
    x2 = z;
    xt2 = (zt * zt) / (z * QuadExt(4));
  } else {
    x2 = s[0] * s[0];
    const TruncatedSeries xt = s[0].derivative();
    xt2 = xt * xt;
  }
  const TruncatedSeries yt = y.derivative();
  const QuadExt half(BigRational(1, 2));
  TruncatedSeries H = (xt2 + yt * yt + x2 * hh.lambda + y * y) * half + x2 * y - y.pow(3) * (hh.C / QuadExt(3));
  EnergyResult out;
  out.energy = H.precision > 0 ? H.at(0) : ParamPoly();
  out.nonconstant = check_of(H, solution.namer(), true);
  out.H = std::move(H);
  return out;
}

TruncatedSeries first_order_invariant(const TruncatedSeries& y) {
  const TruncatedSeries yt = y.derivative();
  const TruncatedSeries bracket =
      yt * yt + y.pow(3) * QuadExt(BigRational(32, 15)) + y * y * QuadExt(BigRational(4, 9));
  return bracket * bracket + y.pow(5) * QuadExt(BigRational(64, 135));
}

TruncatedSeries trajectory_relation(const TruncatedSeries& z, const TruncatedSeries& y) {
  const TruncatedSeries w = z + y * QuadExt(BigRational(5, 9));
  return w * w + y.pow(3) * QuadExt(BigRational(20, 27));
}

CheckResult first_order_invariant_check(const PolyODESystem& system, const LaurentSolution& solution,
                                        const std::map<std::string, QuadExt>& params, int N) {
  require_closed_form_case(system);
  return check_of(first_order_invariant(truncated(solution, 1, N, params, false)), solution.namer());
}

CheckResult trajectory_relation_check(const PolyODESystem& system, const LaurentSolution& solution,
                                      const std::map<std::string, QuadExt>& params, int N) {
  require_closed_form_case(system);
  const auto s = all_series(solution, N, params, false);
  return check_of(trajectory_relation(squared_x(system, s[0]), s[1]), solution.namer());
}

bool closed_form_applicable(const PolyODESystem& system) {
  return system.hh && system.hh->squared && system.hh->lambda == QuadExt(BigRational(1, 9)) &&
         system.hh->C == QuadExt(BigRational(-16, 5));
}

std::map<std::string, QuadExt> closed_form_parameters(int sign) {
  const QuadExt cz1 = QuadExt(BigRational(3205, 3981312)) * rational_sqrt(BigRational(2));
  return {{"cz1", sign > 0 ? cz1 : -cz1}, {"cy4", QuadExt(BigRational(BigInt(-858455), BigInt("12039487488")))}};
}

namespace {

mpfr_prec_t working_bits(int digits) { return decimal_to_bits(digits + 10); }

std::vector<BigFloat> series_mul(const std::vector<BigFloat>& a, const std::vector<BigFloat>& b, std::size_t len,
                                 mpfr_prec_t bits) {
  std::vector<BigFloat> r(len, BigFloat(0L, bits));
  for (std::size_t i = 0; i < std::min(len, a.size()); ++i)
    for (std::size_t j = 0; j < b.size() && i + j < len; ++j) r[i + j] += a[i] * b[j];
  return r;
}

}  // namespace

BigFloat ClosedFormBranch::theta0() const {
  const mpfr_prec_t bits = working_bits(digits);
  const BigFloat a = asin(BigFloat(BigRational(1, 3), bits));
  const BigFloat pi = BigFloat::pi(bits);
  return sign > 0 ? pi - a : pi + a;
}

BigFloat ClosedFormBranch::t0() const { return -(theta0() * BigFloat(3L, working_bits(digits))); }

ClosedFormTable closed_form_laurent(const ClosedFormBranch& branch, int upto) {
  if (branch.sign != 1 && branch.sign != -1) throw std::invalid_argument("closed-form sign must be +1 or -1");
  if (upto < -2) throw std::invalid_argument("upto must be at least -2");
  if (branch.digits < 2 * (upto + 10))
    throw std::invalid_argument("precision of " + std::to_string(branch.digits) + " digits is too low for t^" +
                                std::to_string(upto) + "; need " + std::to_string(2 * (upto + 10)));
  const mpfr_prec_t bits = working_bits(branch.digits);
  const std::size_t len = static_cast<std::size_t>(upto + 5);  // D needs degree upto + 4
  const BigFloat th = branch.theta0();
  const BigFloat s0 = sin(th), c0 = cos(th);
  // s(t) = sin(th) cos(t/3) + cos(th) sin(t/3)
  std::vector<BigFloat> s(len, BigFloat(0L, bits));
  BigFloat term(1L, bits);  // (1/3)^k / k!
  const BigFloat third(BigRational(1, 3), bits);
  for (std::size_t k = 0; k < len; ++k) {
    if (k > 0) term = term * third / BigFloat(static_cast<long>(k), bits);
    const int phase = static_cast<int>(k % 4);
    if (phase == 0) s[k] = s0 * term;
    if (phase == 1) s[k] = c0 * term;
    if (phase == 2) s[k] = -(s0 * term);
    if (phase == 3) s[k] = -(c0 * term);
  }
  const BigFloat sg(static_cast<long>(branch.sign), bits);
  std::vector<BigFloat> D(len, BigFloat(0L, bits)), Nz(len, BigFloat(0L, bits));
  for (std::size_t k = 0; k < len; ++k) {
    D[k] = -(BigFloat(3L, bits) * sg * s[k]);
    Nz[k] = -(sg * s[k]);
  }
  D[0] += BigFloat(1L, bits);
  Nz[0] += BigFloat(1L, bits);
  if (abs(D[0]) > BigFloat::pow10(-(branch.digits - 5), bits))
    throw std::logic_error("closed form does not vanish at the chosen pole");
  // D = t * w
  std::vector<BigFloat> w(D.begin() + 1, D.end());
  const std::size_t n = w.size();
  std::vector<BigFloat> inv(n, BigFloat(0L, bits));
  inv[0] = BigFloat(1L, bits) / w[0];
  for (std::size_t k = 1; k < n; ++k) {
    BigFloat acc(0L, bits);
    for (std::size_t i = 1; i <= k; ++i) acc += w[i] * inv[k - i];
    inv[k] = -(acc * inv[0]);
  }
  const std::size_t ny = static_cast<std::size_t>(upto + 3), nz = static_cast<std::size_t>(upto + 4);
  const auto inv2 = series_mul(inv, inv, nz, bits);
  const auto inv3 = series_mul(inv2, inv, nz, bits);
  const auto zser = series_mul(Nz, inv3, nz, bits);
  ClosedFormTable out;
  const BigFloat ky(BigRational(-5, 3), bits), kz(BigRational(25, 9), bits);
  for (std::size_t k = 0; k < ny; ++k) out.y.push_back(ky * inv2[k]);
  for (std::size_t k = 0; k < nz; ++k) out.z.push_back(kz * zser[k]);
  return out;
}

ClosedFormComparison compare_closed_form(const LaurentSolution& solution, const std::map<std::string, QuadExt>& params,
                                         const ClosedFormBranch& branch, int upto) {
  const ClosedFormTable cf = closed_form_laurent(branch, upto);
  const auto table = evaluated_table(solution, params);
  const mpfr_prec_t bits = working_bits(branch.digits);
  ClosedFormComparison out;
  out.max_relative_error = BigFloat(0L, bits);
  const BigFloat tiny = BigFloat::pow10(-(branch.digits + 5), bits);
  auto run = [&](const std::string& var, int start, const std::vector<BigFloat>& ref) {
    const int v = solution.var_index(var);
    if (solution.start[static_cast<std::size_t>(v)] != start)
      throw std::invalid_argument("branch leading power of " + var + " differs from the closed form");
    const auto& col = table[static_cast<std::size_t>(v)];
    if (static_cast<int>(col.size()) < static_cast<int>(ref.size()))
      throw std::out_of_range("branch is not expanded through t^" + std::to_string(upto));
    for (std::size_t k = 0; k < ref.size(); ++k) {
      const BigFloat ours = to_bigfloat(col[k], bits);
      BigFloat den = abs(ref[k]);
      if (den < tiny) den = tiny;
      const BigFloat err = abs(ours - ref[k]) / den;
      ++out.powers_compared;
      if (err > out.max_relative_error) {
        out.max_relative_error = err;
        out.worst_var = var;
        out.worst_power = start + static_cast<int>(k);
      }
    }
  };
  run("z", cf.z_start, cf.z);
  run("y", cf.y_start, cf.y);
  return out;
}

}  // namespace painleve
