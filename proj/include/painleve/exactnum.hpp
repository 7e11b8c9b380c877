#pragma once

// Exact rational numbers, a single quadratic extension Q(sqrt(q)) over them,
// and an MPFR-backed floating type used as the numeric fallback.

#include <gmpxx.h>
#include <mpfr.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

namespace painleve {

using BigInt = mpz_class;

class DivisionByZero : public std::domain_error {
 public:
  DivisionByZero() : std::domain_error("division by zero") {}
};

/// Raised when an operation would need two distinct quadratic radicands,
/// i.e. a field tower Q(sqrt(p), sqrt(q)).
class FieldTowerError : public std::runtime_error {
 public:
  explicit FieldTowerError(const std::string& what) : std::runtime_error(what) {}
};

class BigRational {
 public:
  BigRational() = default;
  BigRational(long v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  BigRational(const BigInt& num, const BigInt& den = 1);
  explicit BigRational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

  /// Accepts "n", "n/d" and plain decimals such as "-0.25" or "1e-3".
  static BigRational parse(std::string_view text);

  BigInt numerator() const { return v_.get_num(); }
  BigInt denominator() const { return v_.get_den(); }
  const mpq_class& raw() const { return v_; }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }

  BigRational operator-() const { return BigRational(mpq_class(-v_)); }
  BigRational& operator+=(const BigRational& o) { v_ += o.v_; return *this; }
  BigRational& operator-=(const BigRational& o) { v_ -= o.v_; return *this; }
  BigRational& operator*=(const BigRational& o) { v_ *= o.v_; return *this; }
  BigRational& operator/=(const BigRational& o);

  friend BigRational operator+(BigRational a, const BigRational& b) { return a += b; }
  friend BigRational operator-(BigRational a, const BigRational& b) { return a -= b; }
  friend BigRational operator*(BigRational a, const BigRational& b) { return a *= b; }
  friend BigRational operator/(BigRational a, const BigRational& b) { return a /= b; }

  friend bool operator==(const BigRational& a, const BigRational& b) { return cmp(a.v_, b.v_) == 0; }
  friend std::strong_ordering operator<=>(const BigRational& a, const BigRational& b) {
    const int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  BigRational pow(long e) const;
  BigRational abs() const { return BigRational(mpq_class(::abs(v_))); }
  double to_double() const { return v_.get_d(); }
  std::string str() const;

 private:
  mpq_class v_;
};

std::ostream& operator<<(std::ostream& os, const BigRational& r);

/// n = square^2 * core with core square-free as far as factorization succeeded.
struct SquareFreeSplit {
  BigInt square_root;  // >= 1
  BigInt core;         // carries the sign of n
};

/// Trial division up to `trial_bound`, then Pollard rho. A residue that
/// resists factoring stays in `core` unchanged.
SquareFreeSplit square_free_split(const BigInt& n, unsigned long trial_bound = 1000000UL);

/// a + b*sqrt(q) with rational a, b and a square-free integer radicand q.
/// Purely rational values carry the marker radicand 1 and b = 0.
class QuadExt {
 public:
  QuadExt() = default;
  QuadExt(long v) : a_(v) {}                       // NOLINT(google-explicit-constructor)
  QuadExt(const BigRational& a) : a_(a) {}          // NOLINT(google-explicit-constructor)

  /// Builds a + b*sqrt(radicand) for any nonzero rational radicand,
  /// extracting square factors so the stored radicand is canonical.
  static QuadExt make(const BigRational& a, const BigRational& b, const BigRational& radicand);

  /// Parses the printed forms, e.g. "25/16*sqrt(2)" or "5/2 - 1/10*sqrt(1345)".
  static QuadExt parse(std::string_view text);

  const BigRational& rational_part() const { return a_; }
  const BigRational& radical_part() const { return b_; }
  const BigInt& radicand() const { return q_; }

  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
  bool is_rational() const { return b_.is_zero(); }
  bool is_one() const { return b_.is_zero() && a_ == BigRational(1); }
  /// True when the value is a real number (no imaginary radical).
  bool is_real() const { return b_.is_zero() || q_ > 0; }

  QuadExt conj() const;
  BigRational norm() const;  // a^2 - q b^2
  QuadExt inverse() const;
  QuadExt pow(long e) const;

  QuadExt operator-() const;
  QuadExt& operator+=(const QuadExt& o);
  QuadExt& operator-=(const QuadExt& o);
  QuadExt& operator*=(const QuadExt& o);
  QuadExt& operator/=(const QuadExt& o);

  friend QuadExt operator+(QuadExt a, const QuadExt& b) { return a += b; }
  friend QuadExt operator-(QuadExt a, const QuadExt& b) { return a -= b; }
  friend QuadExt operator*(QuadExt a, const QuadExt& b) { return a *= b; }
  friend QuadExt operator/(QuadExt a, const QuadExt& b) { return a /= b; }

  friend bool operator==(const QuadExt& x, const QuadExt& y) {
    return x.a_ == y.a_ && x.b_ == y.b_ && (x.b_.is_zero() || x.q_ == y.q_);
  }

  /// Total order used only for canonical sorting (radicand magnitude, radicand
  /// sign, rational part, then radical part descending).
  static bool canonical_less(const QuadExt& x, const QuadExt& y);

  /// Rough double value of |x| (modulus for imaginary radicals).
  double magnitude() const;
  std::string str() const;

 private:
  void normalize();
  void unify(const QuadExt& o);

  BigRational a_;
  BigRational b_;
  BigInt q_ = 1;
};

std::ostream& operator<<(std::ostream& os, const QuadExt& v);

/// Returns v with v^2 == s exactly; the radicand is the square-free core of s.
QuadExt rational_sqrt(const BigRational& s);

// ---------------------------------------------------------------------------
// BigFloat

/// Default working precision in decimal digits (128 unless overridden).
int default_decimal_precision();
void set_default_decimal_precision(int digits);
mpfr_prec_t decimal_to_bits(int digits);

class BigFloat {
 public:
  BigFloat();
  explicit BigFloat(mpfr_prec_t bits);
  BigFloat(long v, mpfr_prec_t bits);
  BigFloat(const BigRational& r, mpfr_prec_t bits);
  static BigFloat parse(std::string_view text, mpfr_prec_t bits);

  BigFloat(const BigFloat& o);
  BigFloat(BigFloat&& o) noexcept;
  BigFloat& operator=(const BigFloat& o);
  BigFloat& operator=(BigFloat&& o) noexcept;
  ~BigFloat();

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }

  BigFloat operator-() const;
  BigFloat& operator+=(const BigFloat& o);
  BigFloat& operator-=(const BigFloat& o);
  BigFloat& operator*=(const BigFloat& o);
  BigFloat& operator/=(const BigFloat& o);
  friend BigFloat operator+(BigFloat a, const BigFloat& b) { return a += b; }
  friend BigFloat operator-(BigFloat a, const BigFloat& b) { return a -= b; }
  friend BigFloat operator*(BigFloat a, const BigFloat& b) { return a *= b; }
  friend BigFloat operator/(BigFloat a, const BigFloat& b) { return a /= b; }

  friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  /// floor(log10|x|), i.e. the decimal exponent in scientific notation.
  long decimal_exponent() const;
  /// Scientific notation with `digits` significant digits, e.g. "-1.2e-44".
  std::string sci(int digits) const;

  friend BigFloat abs(const BigFloat& x);
  friend BigFloat sqrt(const BigFloat& x);
  friend BigFloat sin(const BigFloat& x);
  friend BigFloat cos(const BigFloat& x);
  friend BigFloat asin(const BigFloat& x);
  static BigFloat pi(mpfr_prec_t bits);
  /// 10^e at the given precision.
  static BigFloat pow10(long e, mpfr_prec_t bits);

 private:
  mpfr_t v_;
};

/// Real value of a QuadExt; throws std::domain_error for imaginary values.
BigFloat to_bigfloat(const QuadExt& v, mpfr_prec_t bits);

struct BigComplex {
  BigFloat re;
  BigFloat im;

  BigComplex() = default;
  explicit BigComplex(mpfr_prec_t bits) : re(bits), im(bits) {}
  BigComplex(BigFloat r, BigFloat i) : re(std::move(r)), im(std::move(i)) {}

  BigComplex& operator+=(const BigComplex& o);
  BigComplex& operator-=(const BigComplex& o);
  BigComplex& operator*=(const BigComplex& o);
  BigComplex& operator/=(const BigComplex& o);
  friend BigComplex operator+(BigComplex a, const BigComplex& b) { return a += b; }
  friend BigComplex operator-(BigComplex a, const BigComplex& b) { return a -= b; }
  friend BigComplex operator*(BigComplex a, const BigComplex& b) { return a *= b; }
  friend BigComplex operator/(BigComplex a, const BigComplex& b) { return a /= b; }
  BigFloat abs() const;
};

BigComplex to_bigcomplex(const QuadExt& v, mpfr_prec_t bits);

}  // namespace painleve
