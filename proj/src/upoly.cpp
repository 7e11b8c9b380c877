#include "painleve/upoly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace painleve {

std::string format_sum(const std::vector<std::pair<QuadExt, std::string>>& terms) {
  if (terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [c, mono] : terms) {
    bool negative = false;
    std::string coeff;
    if (c.is_rational() || c.rational_part().is_zero()) {
      const QuadExt mag = (c.is_rational() ? c.rational_part().sign() : c.radical_part().sign()) < 0 ? -c : c;
      negative = !(mag == c);
      coeff = mag.str();
    } else {
      coeff = "(" + c.str() + ")";
    }
    std::string piece;
    if (mono.empty())
      piece = coeff;
    else if (coeff == "1")
      piece = mono;
    else
      piece = coeff + "*" + mono;
    if (first)
      out = (negative ? "-" : "") + piece;
    else
      out += (negative ? " - " : " + ") + piece;
    first = false;
  }
  return out;
}

std::string to_string(const QPoly& p, const std::string& var) {
  std::vector<std::pair<QuadExt, std::string>> terms;
  for (int k = p.degree(); k >= 0; --k) {
    const QuadExt& c = p.coeffs()[k];
    if (c.is_zero()) continue;
    std::string mono = k == 0 ? "" : (k == 1 ? var : var + "^" + std::to_string(k));
    terms.emplace_back(c, mono);
  }
  return format_sum(terms);
}

std::pair<QPoly, QPoly> divmod(const QPoly& num, const QPoly& den) {
  if (den.is_zero()) throw DivisionByZero();
  std::vector<QuadExt> r = num.coeffs();
  const int dd = den.degree();
  if (num.degree() < dd) return {QPoly(), num};
  std::vector<QuadExt> q(static_cast<std::size_t>(num.degree() - dd) + 1, QuadExt(0));
  const QuadExt inv_lead = den.lead().inverse();
  for (int k = num.degree() - dd; k >= 0; --k) {
    QuadExt f = r[k + dd] * inv_lead;
    q[k] = f;
    if (f.is_zero()) continue;
    for (int i = 0; i <= dd; ++i) r[k + i] -= f * den.coeffs()[i];
  }
  return {QPoly(std::move(q)), QPoly(std::move(r))};
}

QPoly monic(const QPoly& p) {
  if (p.is_zero()) return p;
  return p.scaled(p.lead().inverse());
}

QPoly gcd(QPoly a, QPoly b) {
  while (!b.is_zero()) {
    QPoly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

QPoly conj(const QPoly& p) {
  std::vector<QuadExt> c;
  c.reserve(p.coeffs().size());
  for (const auto& v : p.coeffs()) c.push_back(v.conj());
  return QPoly(std::move(c));
}

bool is_rational(const QPoly& p) {
  return std::all_of(p.coeffs().begin(), p.coeffs().end(), [](const QuadExt& v) { return v.is_rational(); });
}

std::vector<std::pair<QPoly, int>> square_free_decomposition(const QPoly& p) {
  std::vector<std::pair<QPoly, int>> out;
  if (p.degree() <= 0) return out;
  const QPoly dp = p.derivative();
  const QPoly a0 = gcd(p, dp);
  QPoly b = divmod(p, a0).first;
  QPoly c = divmod(dp, a0).first;
  QPoly d = c - b.derivative();
  for (int i = 1; b.degree() > 0; ++i) {
    QPoly a = gcd(b, d);
    b = divmod(b, a).first;
    c = divmod(d, a).first;
    d = c - b.derivative();
    if (a.degree() > 0) out.emplace_back(monic(a), i);
  }
  return out;
}

const char* to_string(RootKind k) {
  switch (k) {
    case RootKind::Integer: return "INTEGER";
    case RootKind::RationalNonInteger: return "RATIONAL_NONINT";
    case RootKind::Irrational: return "IRRATIONAL";
    case RootKind::Complex: return "COMPLEX";
  }
  return "?";
}

std::string PolyRoot::str() const {
  if (exact) return exact->str();
  std::string s = approx.re.sci(20);
  if (!approx.im.is_zero()) s += (approx.im.sign() < 0 ? " - " : " + ") + abs(approx.im).sci(20) + "*I";
  return s;
}

// ---------------------------------------------------------------------------
// Numeric roots

namespace {

BigComplex cplx(long re, mpfr_prec_t bits) { return BigComplex(BigFloat(re, bits), BigFloat(bits)); }

void horner(const std::vector<BigComplex>& a, const BigComplex& z, BigComplex& p, BigComplex& dp, mpfr_prec_t bits) {
  p = cplx(0, bits);
  dp = cplx(0, bits);
  for (auto it = a.rbegin(); it != a.rend(); ++it) {
    dp = dp * z + p;
    p = p * z + *it;
  }
}

}  // namespace

std::vector<BigComplex> numeric_roots(const std::vector<BigComplex>& coeffs, mpfr_prec_t bits) {
  const int n = static_cast<int>(coeffs.size()) - 1;
  if (n < 1) return {};
  const mpfr_prec_t work = bits + 64;
  std::vector<BigComplex> a;
  a.reserve(coeffs.size());
  for (const auto& c : coeffs) {
    BigComplex w(work);
    mpfr_set(w.re.get(), c.re.get(), MPFR_RNDN);
    mpfr_set(w.im.get(), c.im.get(), MPFR_RNDN);
    a.push_back(std::move(w));
  }
  const BigComplex lead = a.back();
  for (auto& c : a) c /= lead;

  if (n == 1) return {cplx(0, work) - a[0]};

  BigFloat radius(1, work);
  for (int i = 0; i < n; ++i) {
    BigFloat m = a[i].abs();
    if (m > radius) radius = m;
  }
  radius += BigFloat(1, work);
  // Start inside the Cauchy bound; convergence does not depend on the radius much.
  radius /= BigFloat(2, work);

  std::vector<BigComplex> z;
  const BigFloat two_pi = BigFloat::pi(work) * BigFloat(2, work);
  for (int k = 0; k < n; ++k) {
    BigFloat theta = two_pi * BigFloat(k, work) / BigFloat(n, work) + BigFloat::parse("0.7", work);
    z.emplace_back(radius * cos(theta), radius * sin(theta));
  }

  BigFloat tol = BigFloat::pow10(0, work);
  mpfr_div_2si(tol.get(), tol.get(), static_cast<long>(bits) - 8, MPFR_RNDN);
  BigComplex p(work), dp(work);
  for (int iter = 0; iter < 2000; ++iter) {
    BigFloat worst(0, work);
    for (int k = 0; k < n; ++k) {
      horner(a, z[k], p, dp, work);
      if (p.re.is_zero() && p.im.is_zero()) continue;
      BigComplex ratio = p / dp;
      BigComplex s = cplx(0, work);
      for (int j = 0; j < n; ++j) {
        if (j == k) continue;
        BigComplex diff = z[k] - z[j];
        if (diff.re.is_zero() && diff.im.is_zero()) continue;
        s += cplx(1, work) / diff;
      }
      BigComplex w = ratio / (cplx(1, work) - ratio * s);
      z[k] -= w;
      BigFloat scale = z[k].abs();
      if (scale < BigFloat(1, work)) scale = BigFloat(1, work);
      BigFloat rel = w.abs() / scale;
      if (rel > worst) worst = rel;
    }
    if (worst < tol) break;
  }

  std::vector<BigComplex> out;
  for (auto& r : z) {
    BigComplex c(bits);
    mpfr_set(c.re.get(), r.re.get(), MPFR_RNDN);
    mpfr_set(c.im.get(), r.im.get(), MPFR_RNDN);
    out.push_back(std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exact roots

namespace {

struct Ctx {
  int digits;
  mpfr_prec_t bits;
  BigFloat tol;  // 10^(-digits/2)
};

std::vector<BigComplex> numeric_roots_of(const QPoly& p, mpfr_prec_t bits) {
  std::vector<BigComplex> c;
  for (const auto& v : p.coeffs()) c.push_back(to_bigcomplex(v, bits + 32));
  return numeric_roots(c, bits);
}

bool is_real_approx(const BigComplex& z, const Ctx& ctx) {
  BigFloat scale = z.abs();
  if (scale < BigFloat(1, ctx.bits)) scale = BigFloat(1, ctx.bits);
  return abs(z.im) / scale < ctx.tol;
}

// Clears denominators: returns integer leading coefficient of a rational poly.
BigInt integer_leading(const QPoly& p) {
  BigInt l = 1;
  for (const auto& c : p.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.rational_part().denominator().get_mpz_t());
  BigInt g = 0;
  for (const auto& c : p.coeffs()) {
    BigRational v = c.rational_part() * BigRational(l);
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.numerator().get_mpz_t());
  }
  BigRational lead = p.lead().rational_part() * BigRational(l) / BigRational(g);
  return ::abs(lead.numerator());
}

// Continued-fraction convergents of x with denominator <= max_den.
std::vector<BigRational> convergents(const BigFloat& x, const BigInt& max_den, mpfr_prec_t bits) {
  std::vector<BigRational> out;
  BigInt hm2 = 0, hm1 = 1, km2 = 1, km1 = 0;
  BigFloat r = x;
  for (int iter = 0; iter < 400; ++iter) {
    BigFloat fl(bits);
    mpfr_floor(fl.get(), r.get());
    BigInt a;
    mpfr_get_z(a.get_mpz_t(), fl.get(), MPFR_RNDN);
    BigInt hn = a * hm1 + hm2;
    BigInt kn = a * km1 + km2;
    if (kn > max_den) break;
    out.emplace_back(hn, kn);
    hm2 = hm1;
    hm1 = hn;
    km2 = km1;
    km1 = kn;
    BigFloat frac = r - fl;
    if (frac.is_zero()) break;
    BigFloat lim = BigFloat::pow10(-(static_cast<long>(bits) / 4), bits);
    if (abs(frac) < lim) break;
    r = BigFloat(1, bits) / frac;
  }
  return out;
}

QPoly linear_factor(const QuadExt& root) { return QPoly(std::vector<QuadExt>{-root, QuadExt(1)}); }

RootKind classify_exact(const QuadExt& v) {
  if (v.is_rational()) return v.rational_part().is_integer() ? RootKind::Integer : RootKind::RationalNonInteger;
  return v.radicand() > 0 ? RootKind::Irrational : RootKind::Complex;
}

void push_exact(std::vector<PolyRoot>& out, const QuadExt& v, const Ctx& ctx) {
  BigComplex approx = to_bigcomplex(v, ctx.bits);
  out.push_back(PolyRoot{v, std::move(approx), classify_exact(v), 1});
}

void push_numeric(std::vector<PolyRoot>& out, const QPoly& p, BigComplex z, const Ctx& ctx) {
  if (!is_real_approx(z, ctx)) {
    out.push_back(PolyRoot{std::nullopt, std::move(z), RootKind::Complex, 1});
    return;
  }
  // Integer re-verification.
  BigFloat rounded(ctx.bits);
  mpfr_round(rounded.get(), z.re.get());
  if (abs(z.re - rounded) < ctx.tol) {
    BigInt n;
    mpfr_get_z(n.get_mpz_t(), rounded.get(), MPFR_RNDN);
    QuadExt cand{BigRational(n)};
    if (p.eval(cand).is_zero()) {
      push_exact(out, cand, ctx);
      return;
    }
  }
  z.im = BigFloat(ctx.bits);
  out.push_back(PolyRoot{std::nullopt, std::move(z), RootKind::Irrational, 1});
}

std::vector<PolyRoot> roots_rational_squarefree(QPoly p, const Ctx& ctx);

// Roots of a square-free polynomial with rational coefficients, degree >= 3,
// containing only even powers: solve in w = r^2.
bool try_biquadratic(const QPoly& p, std::vector<PolyRoot>& out, const Ctx& ctx) {
  if (p.degree() < 4 || p.degree() % 2 != 0) return false;
  std::vector<QuadExt> half;
  for (int k = 0; k <= p.degree(); ++k) {
    if (k % 2 == 1) {
      if (!p.coeff(k).is_zero()) return false;
    } else {
      half.push_back(p.coeff(k));
    }
  }
  if (p.coeff(0).is_zero()) return false;
  std::vector<PolyRoot> wroots = roots_rational_squarefree(QPoly(half), ctx);
  for (const auto& w : wroots) {
    if (w.exact && w.exact->is_rational()) {
      QuadExt s = rational_sqrt(w.exact->rational_part());
      push_exact(out, s, ctx);
      push_exact(out, -s, ctx);
    } else {
      // sqrt of a numeric (or non-rational) w: principal complex square root.
      const mpfr_prec_t b = ctx.bits;
      BigFloat mod = w.approx.abs();
      BigFloat re = sqrt((mod + w.approx.re) / BigFloat(2, b));
      BigFloat im = sqrt((mod - w.approx.re) / BigFloat(2, b));
      if (w.approx.im.sign() < 0) im = -im;
      push_numeric(out, p, BigComplex(re, im), ctx);
      push_numeric(out, p, BigComplex(-re, -im), ctx);
    }
  }
  return true;
}

std::vector<PolyRoot> roots_rational_squarefree(QPoly p, const Ctx& ctx) {
  std::vector<PolyRoot> out;
  if (p.degree() <= 0) return out;

  // Rational roots: numeric location, rational-root-theorem denominator
  // bound, exact confirmation.
  if (p.degree() >= 1) {
    const BigInt max_den = integer_leading(p);
    std::vector<BigComplex> approx = numeric_roots_of(p, ctx.bits);
    for (const auto& z : approx) {
      if (!is_real_approx(z, ctx)) continue;
      for (const auto& cand : convergents(z.re, max_den, ctx.bits)) {
        QuadExt c(cand);
        if (p.degree() > 0 && p.eval(c).is_zero()) {
          push_exact(out, c, ctx);
          p = divmod(p, linear_factor(c)).first;
          break;
        }
      }
    }
  }
  if (p.degree() <= 0) return out;

  if (p.degree() == 2) {
    const QuadExt& a = p.coeffs()[2];
    const QuadExt& b = p.coeffs()[1];
    const QuadExt& c = p.coeffs()[0];
    QuadExt disc = b * b - QuadExt(4) * a * c;
    QuadExt s = rational_sqrt(disc.rational_part());
    QuadExt two_a = QuadExt(2) * a;
    push_exact(out, (-b + s) / two_a, ctx);
    push_exact(out, (-b - s) / two_a, ctx);
    return out;
  }
  if (try_biquadratic(p, out, ctx)) return out;
  for (auto& z : numeric_roots_of(p, ctx.bits)) push_numeric(out, p, std::move(z), ctx);
  return out;
}

std::vector<PolyRoot> roots_squarefree(QPoly p, const Ctx& ctx) {
  if (is_rational(p)) return roots_rational_squarefree(std::move(p), ctx);

  // Irrational coefficients: roots are among the roots of p * conj(p).
  std::vector<PolyRoot> out;
  QPoly norm = p * conj(p);
  QPoly norm_sf = QPoly();
  {
    // square-free part of the norm
    auto parts = square_free_decomposition(norm);
    norm_sf = QPoly(QuadExt(1));
    for (const auto& [f, m] : parts) norm_sf = norm_sf * f;
  }
  for (const auto& cand : roots_rational_squarefree(norm_sf, ctx)) {
    if (!cand.exact || p.degree() <= 0) continue;
    try {
      if (p.eval(*cand.exact).is_zero()) {
        push_exact(out, *cand.exact, ctx);
        p = divmod(p, linear_factor(*cand.exact)).first;
      }
    } catch (const FieldTowerError&) {
      // root lives in a different quadratic field; reported numerically below
    }
  }
  if (p.degree() == 2) {
    const QuadExt& a = p.coeffs()[2];
    const QuadExt& b = p.coeffs()[1];
    const QuadExt& c = p.coeffs()[0];
    QuadExt disc = b * b - QuadExt(4) * a * c;
    if (disc.is_rational()) {
      try {
        QuadExt s = rational_sqrt(disc.rational_part());
        QuadExt two_a = QuadExt(2) * a;
        QuadExt r1 = (-b + s) / two_a;
        QuadExt r2 = (-b - s) / two_a;
        push_exact(out, r1, ctx);
        push_exact(out, r2, ctx);
        return out;
      } catch (const FieldTowerError&) {
      }
    }
  }
  if (p.degree() > 0)
    for (auto& z : numeric_roots_of(p, ctx.bits)) push_numeric(out, p, std::move(z), ctx);
  return out;
}

bool root_less(const PolyRoot& x, const PolyRoot& y) {
  if (x.exact.has_value() != y.exact.has_value()) return x.exact.has_value();
  if (x.exact) return QuadExt::canonical_less(*x.exact, *y.exact);
  if (!(x.approx.re == y.approx.re)) return x.approx.re < y.approx.re;
  return x.approx.im < y.approx.im;
}

}  // namespace

std::vector<PolyRoot> solve_polynomial(const QPoly& p, int decimal_digits) {
  if (p.is_zero()) throw std::invalid_argument("cannot solve the zero polynomial");
  Ctx ctx{decimal_digits, decimal_to_bits(decimal_digits), BigFloat::pow10(-(decimal_digits / 2), decimal_to_bits(decimal_digits))};
  std::vector<PolyRoot> out;
  for (const auto& [f, mult] : square_free_decomposition(p)) {
    for (auto& r : roots_squarefree(f, ctx)) {
      r.multiplicity = mult;
      out.push_back(std::move(r));
    }
  }
  std::sort(out.begin(), out.end(), root_less);
  return out;
}

}  // namespace painleve
