#include "painleve/exactnum.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <ostream>
#include <sstream>
#include <vector>

namespace painleve {

// ---------------------------------------------------------------------------
// BigRational

BigRational::BigRational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw DivisionByZero();
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

BigRational& BigRational::operator/=(const BigRational& o) {
  if (o.is_zero()) throw DivisionByZero();
  v_ /= o.v_;
  return *this;
}

BigRational BigRational::pow(long e) const {
  if (e < 0) {
    if (is_zero()) throw DivisionByZero();
    return BigRational(1) / pow(-e);
  }
  BigInt n, d;
  mpz_pow_ui(n.get_mpz_t(), v_.get_num_mpz_t(), static_cast<unsigned long>(e));
  mpz_pow_ui(d.get_mpz_t(), v_.get_den_mpz_t(), static_cast<unsigned long>(e));
  return BigRational(n, d);
}

std::string BigRational::str() const { return v_.get_str(); }

std::ostream& operator<<(std::ostream& os, const BigRational& r) { return os << r.str(); }

namespace {

bool parse_bigint(std::string_view s, BigInt& out) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (std::size_t k = i; k < s.size(); ++k)
    if (!std::isdigit(static_cast<unsigned char>(s[k]))) return false;
  std::string digits(s.substr(s[0] == '+' ? 1 : 0));
  return out.set_str(digits, 10) == 0;
}

}  // namespace

BigRational BigRational::parse(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw std::invalid_argument("empty rational literal");

  if (auto slash = s.find('/'); slash != std::string::npos) {
    BigInt n, d;
    if (!parse_bigint(std::string_view(s).substr(0, slash), n) ||
        !parse_bigint(std::string_view(s).substr(slash + 1), d))
      throw std::invalid_argument("malformed rational literal '" + s + "'");
    return BigRational(n, d);
  }

  // Decimal with optional exponent, converted exactly.
  std::string mant = s;
  long exp10 = 0;
  if (auto e = s.find_first_of("eE"); e != std::string::npos) {
    mant = s.substr(0, e);
    try {
      exp10 = std::stol(s.substr(e + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed exponent in '" + s + "'");
    }
  }
  bool neg = false;
  if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
    neg = mant[0] == '-';
    mant.erase(0, 1);
  }
  std::string digits;
  long frac = 0;
  bool seen_dot = false;
  for (char c : mant) {
    if (c == '.') {
      if (seen_dot) throw std::invalid_argument("malformed decimal '" + s + "'");
      seen_dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_dot) ++frac;
    } else {
      throw std::invalid_argument("malformed number '" + s + "'");
    }
  }
  if (digits.empty()) throw std::invalid_argument("malformed number '" + s + "'");
  BigInt n(digits, 10);
  if (neg) n = -n;
  BigRational r(n);
  return r * BigRational(10).pow(exp10 - frac);
}

// ---------------------------------------------------------------------------
// Square-free splitting

namespace {

// Brent's variant of Pollard rho; returns a nontrivial factor or 0.
BigInt pollard_rho(const BigInt& n, unsigned long max_iter) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1; c < 4; ++c) {
    BigInt y = 2, x, g = 1, q = 1, ys;
    unsigned long r = 1, iter = 0;
    auto f = [&](const BigInt& v) {
      BigInt t = v * v + c;
      mpz_mod(t.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
      return t;
    };
    const unsigned long m = 128;
    while (g == 1 && iter < max_iter) {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = f(y);
      unsigned long k = 0;
      while (k < r && g == 1) {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          BigInt diff = x - y;
          q = q * ::abs(diff);
          mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += m;
        iter += m;
      }
      r *= 2;
    }
    if (g == n) {
      do {
        ys = f(ys);
        BigInt diff = ::abs(BigInt(x - ys));
        mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n && g != 1) return g;
  }
  return 0;
}

// Collects prime (or unsplittable) factors of n with repetition.
void factor_into(const BigInt& n, std::vector<BigInt>& atoms, int depth) {
  if (n == 1) return;
  if (mpz_perfect_square_p(n.get_mpz_t())) {
    BigInt r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    factor_into(r, atoms, depth + 1);
    factor_into(r, atoms, depth + 1);
    return;
  }
  if (mpz_probab_prime_p(n.get_mpz_t(), 30) != 0 || depth > 64) {
    atoms.push_back(n);
    return;
  }
  BigInt d = pollard_rho(n, 1UL << 16);
  if (d == 0) {
    atoms.push_back(n);  // unfactored residue stays whole
    return;
  }
  factor_into(d, atoms, depth + 1);
  factor_into(BigInt(n / d), atoms, depth + 1);
}

void split_residue(const BigInt& n, BigInt& square, BigInt& core) {
  std::vector<BigInt> atoms;
  factor_into(n, atoms, 0);
  std::sort(atoms.begin(), atoms.end());
  for (std::size_t i = 0; i < atoms.size();) {
    std::size_t j = i;
    while (j < atoms.size() && atoms[j] == atoms[i]) ++j;
    const std::size_t e = j - i;
    for (std::size_t k = 0; k < e / 2; ++k) square *= atoms[i];
    if (e % 2 == 1) core *= atoms[i];
    i = j;
  }
}

}  // namespace

SquareFreeSplit square_free_split(const BigInt& n, unsigned long trial_bound) {
  if (n == 0) return {0, 0};
  BigInt m = ::abs(n);
  BigInt square = 1, core = 1;
  for (unsigned long p = 2; p <= trial_bound; p += (p == 2 ? 1 : 2)) {
    if (mpz_cmp_ui(m.get_mpz_t(), p * p) < 0) break;
    if (mpz_divisible_ui_p(m.get_mpz_t(), p) == 0) continue;
    unsigned long e = 0;
    while (mpz_divisible_ui_p(m.get_mpz_t(), p) != 0) {
      mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
      ++e;
    }
    for (unsigned long i = 0; i < e / 2; ++i) square *= p;
    if (e % 2 == 1) core *= p;
  }
  if (m != 1) {
    BigInt bound = trial_bound;
    if (m <= bound * bound) {
      core *= m;  // remaining cofactor is prime
    } else {
      split_residue(m, square, core);
    }
  }
  if (n < 0) core = -core;
  return {square, core};
}

// ---------------------------------------------------------------------------
// QuadExt

QuadExt QuadExt::make(const BigRational& a, const BigRational& b, const BigRational& radicand) {
  QuadExt v;
  v.a_ = a;
  if (b.is_zero() || radicand.is_zero()) return v;
  // sqrt(n/d) = sqrt(n*d)/d
  BigInt nd = radicand.numerator() * radicand.denominator();
  SquareFreeSplit s = square_free_split(nd);
  BigRational scale(s.square_root, radicand.denominator());
  if (s.core == 1) {
    v.a_ += b * scale;
    return v;
  }
  v.b_ = b * scale;
  v.q_ = s.core;
  return v;
}

void QuadExt::normalize() {
  if (b_.is_zero()) q_ = 1;
}

void QuadExt::unify(const QuadExt& o) {
  if (o.b_.is_zero()) return;
  if (b_.is_zero()) {
    q_ = o.q_;
    return;
  }
  if (q_ != o.q_)
    throw FieldTowerError("incompatible radicands sqrt(" + q_.get_str() + ") and sqrt(" + o.q_.get_str() + ")");
}

QuadExt QuadExt::operator-() const {
  QuadExt r = *this;
  r.a_ = -a_;
  r.b_ = -b_;
  return r;
}

QuadExt& QuadExt::operator+=(const QuadExt& o) {
  unify(o);
  a_ += o.a_;
  b_ += o.b_;
  normalize();
  return *this;
}

QuadExt& QuadExt::operator-=(const QuadExt& o) {
  unify(o);
  a_ -= o.a_;
  b_ -= o.b_;
  normalize();
  return *this;
}

QuadExt& QuadExt::operator*=(const QuadExt& o) {
  if (o.b_.is_zero()) {
    a_ *= o.a_;
    b_ *= o.a_;
    normalize();
    return *this;
  }
  if (b_.is_zero()) {
    BigRational a = a_;
    a_ = a * o.a_;
    b_ = a * o.b_;
    q_ = o.q_;
    normalize();
    return *this;
  }
  unify(o);
  BigRational na = a_ * o.a_ + b_ * o.b_ * BigRational(q_);
  BigRational nb = a_ * o.b_ + b_ * o.a_;
  a_ = std::move(na);
  b_ = std::move(nb);
  normalize();
  return *this;
}

QuadExt& QuadExt::operator/=(const QuadExt& o) { return *this *= o.inverse(); }

QuadExt QuadExt::conj() const {
  QuadExt r = *this;
  r.b_ = -b_;
  return r;
}

BigRational QuadExt::norm() const { return a_ * a_ - BigRational(q_) * b_ * b_; }

QuadExt QuadExt::inverse() const {
  if (is_zero()) throw DivisionByZero();
  if (b_.is_zero()) return QuadExt(BigRational(1) / a_);
  BigRational n = norm();  // nonzero since q is not a rational square
  QuadExt r = conj();
  r.a_ /= n;
  r.b_ /= n;
  return r;
}

QuadExt QuadExt::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  QuadExt result(1), base = *this;
  while (e > 0) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

bool QuadExt::canonical_less(const QuadExt& x, const QuadExt& y) {
  BigInt ax = ::abs(x.q_), ay = ::abs(y.q_);
  if (ax != ay) return ax < ay;
  if (x.q_ != y.q_) return x.q_ > y.q_;
  if (x.a_ != y.a_) return x.a_ < y.a_;
  return x.b_ > y.b_;
}

double QuadExt::magnitude() const {
  const double a = a_.to_double();
  const double b = b_.to_double();
  const double q = q_.get_d();
  if (q >= 0) return std::fabs(a + b * std::sqrt(q));
  return std::hypot(a, b * std::sqrt(-q));
}

std::string QuadExt::str() const {
  if (b_.is_zero()) return a_.str();
  std::string rad;
  BigRational mag = b_.abs();
  if (mag == BigRational(1))
    rad = "sqrt(" + q_.get_str() + ")";
  else
    rad = mag.str() + "*sqrt(" + q_.get_str() + ")";
  if (a_.is_zero()) return (b_.sign() < 0 ? "-" : "") + rad;
  return a_.str() + (b_.sign() < 0 ? " - " : " + ") + rad;
}

std::ostream& operator<<(std::ostream& os, const QuadExt& v) { return os << v.str(); }

namespace {

// Constant expressions: sums/products/quotients of rational literals,
// sqrt(...) of rational constants and integer powers.
class ConstParser {
 public:
  explicit ConstParser(std::string_view s) : s_(s) {}

  QuadExt parse_all() {
    QuadExt v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw std::invalid_argument("cannot parse '" + std::string(s_) + "': " + msg);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  QuadExt expr() {
    QuadExt v = term();
    for (;;) {
      if (accept('+'))
        v += term();
      else if (accept('-'))
        v -= term();
      else
        return v;
    }
  }
  QuadExt term() {
    QuadExt v = unary();
    for (;;) {
      if (accept('*'))
        v *= unary();
      else if (accept('/'))
        v /= unary();
      else
        return v;
    }
  }
  QuadExt unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    QuadExt base = primary();
    if (accept('^')) {
      bool neg = accept('-');
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected integer exponent");
      long e = std::stol(std::string(s_.substr(start, pos_ - start)));
      return base.pow(neg ? -e : e);
    }
    return base;
  }
  QuadExt primary() {
    skip();
    if (accept('(')) {
      QuadExt v = expr();
      if (!accept(')')) fail("expected ')'");
      return v;
    }
    if (s_.substr(pos_, 4) == "sqrt") {
      pos_ += 4;
      if (!accept('(')) fail("expected '(' after sqrt");
      QuadExt arg = expr();
      if (!accept(')')) fail("expected ')'");
      if (!arg.is_rational()) fail("nested radicals are not supported");
      return rational_sqrt(arg.rational_part());
    }
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (start == pos_) fail("expected number");
    return QuadExt(BigRational::parse(s_.substr(start, pos_ - start)));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

QuadExt QuadExt::parse(std::string_view text) { return ConstParser(text).parse_all(); }

QuadExt rational_sqrt(const BigRational& s) {
  if (s.is_zero()) return QuadExt();
  return QuadExt::make(BigRational(0), BigRational(1), s);
}

// ---------------------------------------------------------------------------
// BigFloat

namespace {
std::atomic<int> g_default_digits{128};
}

int default_decimal_precision() { return g_default_digits.load(); }

void set_default_decimal_precision(int digits) {
  if (digits < 16) throw std::invalid_argument("precision must be at least 16 digits");
  g_default_digits.store(digits);
}

mpfr_prec_t decimal_to_bits(int digits) {
  return static_cast<mpfr_prec_t>(std::ceil(digits * 3.321928094887362)) + 16;
}

BigFloat::BigFloat() : BigFloat(decimal_to_bits(default_decimal_precision())) {}

BigFloat::BigFloat(mpfr_prec_t bits) {
  mpfr_init2(v_, bits);
  mpfr_set_zero(v_, 1);
}

BigFloat::BigFloat(long v, mpfr_prec_t bits) {
  mpfr_init2(v_, bits);
  mpfr_set_si(v_, v, MPFR_RNDN);
}

BigFloat::BigFloat(const BigRational& r, mpfr_prec_t bits) {
  mpfr_init2(v_, bits);
  mpfr_set_q(v_, r.raw().get_mpq_t(), MPFR_RNDN);
}

BigFloat BigFloat::parse(std::string_view text, mpfr_prec_t bits) {
  BigFloat r(bits);
  std::string s(text);
  if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0) throw std::invalid_argument("malformed float '" + s + "'");
  return r;
}

BigFloat::BigFloat(const BigFloat& o) {
  mpfr_init2(v_, mpfr_get_prec(o.v_));
  mpfr_set(v_, o.v_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& o) noexcept {
  mpfr_init2(v_, mpfr_get_prec(o.v_));
  mpfr_swap(v_, o.v_);
}

BigFloat& BigFloat::operator=(const BigFloat& o) {
  if (this != &o) {
    mpfr_set_prec(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& o) noexcept {
  mpfr_swap(v_, o.v_);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(v_); }

BigFloat BigFloat::operator-() const {
  BigFloat r(precision());
  mpfr_neg(r.v_, v_, MPFR_RNDN);
  return r;
}

namespace {
void widen(mpfr_ptr dst, mpfr_srcptr other) {
  if (mpfr_get_prec(other) > mpfr_get_prec(dst)) mpfr_prec_round(dst, mpfr_get_prec(other), MPFR_RNDN);
}
}  // namespace

BigFloat& BigFloat::operator+=(const BigFloat& o) {
  widen(v_, o.v_);
  mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
BigFloat& BigFloat::operator-=(const BigFloat& o) {
  widen(v_, o.v_);
  mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
BigFloat& BigFloat::operator*=(const BigFloat& o) {
  widen(v_, o.v_);
  mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
BigFloat& BigFloat::operator/=(const BigFloat& o) {
  if (o.is_zero()) throw DivisionByZero();
  widen(v_, o.v_);
  mpfr_div(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

long BigFloat::decimal_exponent() const {
  if (is_zero()) return 0;
  BigFloat a = abs(*this);
  BigFloat l(precision());
  mpfr_log10(l.v_, a.v_, MPFR_RNDN);
  mpfr_floor(l.v_, l.v_);
  long e = mpfr_get_si(l.v_, MPFR_RNDN);
  // Guard against log10 rounding at exact powers of ten.
  BigFloat scaled = a / pow10(e, precision());
  if (mpfr_cmp_ui(scaled.v_, 10) >= 0) ++e;
  if (mpfr_cmp_ui(scaled.v_, 1) < 0) --e;
  return e;
}

std::string BigFloat::sci(int digits) const {
  if (is_zero()) return "0";
  long e = decimal_exponent();
  BigFloat m = *this / pow10(e, precision());
  // Round mantissa to `digits` significant digits.
  BigFloat scale = pow10(digits - 1, precision());
  BigFloat scaled = m * scale;
  mpfr_round(scaled.v_, scaled.v_);
  if (mpfr_cmpabs(scaled.v_, pow10(digits, precision()).v_) >= 0) {
    scaled /= BigFloat(10, precision());
    mpfr_round(scaled.v_, scaled.v_);
    ++e;
  }
  mpz_class mant;
  mpfr_get_z(mant.get_mpz_t(), scaled.v_, MPFR_RNDN);
  std::string ms = mpz_class(abs(mant)).get_str();
  std::string out = sgn(mant) < 0 ? "-" : "";
  out += ms.substr(0, 1);
  if (ms.size() > 1) out += "." + ms.substr(1);
  out += "e" + std::string(e < 0 ? "-" : "+") + (std::labs(e) < 10 ? "0" : "") + std::to_string(std::labs(e));
  return out;
}

BigFloat abs(const BigFloat& x) {
  BigFloat r(x.precision());
  mpfr_abs(r.v_, x.v_, MPFR_RNDN);
  return r;
}
BigFloat sqrt(const BigFloat& x) {
  BigFloat r(x.precision());
  mpfr_sqrt(r.v_, x.v_, MPFR_RNDN);
  return r;
}
BigFloat sin(const BigFloat& x) {
  BigFloat r(x.precision());
  mpfr_sin(r.v_, x.v_, MPFR_RNDN);
  return r;
}
BigFloat cos(const BigFloat& x) {
  BigFloat r(x.precision());
  mpfr_cos(r.v_, x.v_, MPFR_RNDN);
  return r;
}
BigFloat asin(const BigFloat& x) {
  BigFloat r(x.precision());
  mpfr_asin(r.v_, x.v_, MPFR_RNDN);
  return r;
}
BigFloat BigFloat::pi(mpfr_prec_t bits) {
  BigFloat r(bits);
  mpfr_const_pi(r.v_, MPFR_RNDN);
  return r;
}
BigFloat BigFloat::pow10(long e, mpfr_prec_t bits) {
  BigFloat r(bits);
  mpfr_ui_pow_ui(r.v_, 10, static_cast<unsigned long>(std::labs(e)), MPFR_RNDN);
  if (e < 0) mpfr_ui_div(r.v_, 1, r.v_, MPFR_RNDN);
  return r;
}

BigFloat to_bigfloat(const QuadExt& v, mpfr_prec_t bits) {
  if (!v.is_real()) throw std::domain_error("value " + v.str() + " is not real");
  const mpfr_prec_t work = bits + 32;
  BigFloat r(v.rational_part(), work);
  if (!v.is_rational()) {
    BigFloat root = sqrt(BigFloat(BigRational(v.radicand()), work));
    r += BigFloat(v.radical_part(), work) * root;
  }
  BigFloat out(bits);
  mpfr_set(out.get(), r.get(), MPFR_RNDN);
  return out;
}

BigComplex& BigComplex::operator+=(const BigComplex& o) {
  re += o.re;
  im += o.im;
  return *this;
}
BigComplex& BigComplex::operator-=(const BigComplex& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}
BigComplex& BigComplex::operator*=(const BigComplex& o) {
  BigFloat r = re * o.re - im * o.im;
  BigFloat i = re * o.im + im * o.re;
  re = std::move(r);
  im = std::move(i);
  return *this;
}
BigComplex& BigComplex::operator/=(const BigComplex& o) {
  BigFloat d = o.re * o.re + o.im * o.im;
  BigFloat r = (re * o.re + im * o.im) / d;
  BigFloat i = (im * o.re - re * o.im) / d;
  re = std::move(r);
  im = std::move(i);
  return *this;
}
BigFloat BigComplex::abs() const { return sqrt(re * re + im * im); }

BigComplex to_bigcomplex(const QuadExt& v, mpfr_prec_t bits) {
  if (v.is_real()) return BigComplex(to_bigfloat(v, bits), BigFloat(bits));
  BigFloat re(v.rational_part(), bits);
  BigFloat root = sqrt(BigFloat(BigRational(BigInt(-v.radicand())), bits + 32));
  BigFloat im = BigFloat(v.radical_part(), bits + 32) * root;
  BigFloat imr(bits);
  mpfr_set(imr.get(), im.get(), MPFR_RNDN);
  return BigComplex(std::move(re), std::move(imr));
}

}  // namespace painleve
