#pragma once

// Dense univariate polynomials over a coefficient ring, plus exact and
// multiprecision root finding for polynomials over Q(sqrt(q)).

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "painleve/exactnum.hpp"

namespace painleve {

/// Sum of coefficient*monomial pieces rendered as "a*m1 - b*m2 + ...".
/// An empty monomial string denotes a constant term.
std::string format_sum(const std::vector<std::pair<QuadExt, std::string>>& terms);

template <class T>
class Poly1 {
 public:
  Poly1() = default;
  explicit Poly1(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }
  Poly1(const T& constant) : c_{constant} { trim(); }  // NOLINT(google-explicit-constructor)

  static Poly1 monomial(const T& coeff, int degree) {
    std::vector<T> c(static_cast<std::size_t>(degree) + 1, T(0));
    c.back() = coeff;
    return Poly1(std::move(c));
  }
  static Poly1 identity() { return monomial(T(1), 1); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<T>& coeffs() const { return c_; }
  T coeff(int k) const { return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[k] : T(0); }
  const T& lead() const { return c_.back(); }

  Poly1& operator+=(const Poly1& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  Poly1& operator-=(const Poly1& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  friend Poly1 operator+(Poly1 a, const Poly1& b) { return a += b; }
  friend Poly1 operator-(Poly1 a, const Poly1& b) { return a -= b; }
  friend Poly1 operator*(const Poly1& a, const Poly1& b) {
    if (a.is_zero() || b.is_zero()) return Poly1();
    std::vector<T> r(a.c_.size() + b.c_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (is_zero_value(a.c_[i])) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly1(std::move(r));
  }
  Poly1 operator-() const {
    Poly1 r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
  }
  Poly1 scaled(const T& s) const {
    Poly1 r = *this;
    for (auto& v : r.c_) v = v * s;
    r.trim();
    return r;
  }

  template <class U>
  U eval(const U& x) const {
    U acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + U(*it);
    return acc;
  }

  Poly1 derivative() const {
    if (c_.size() <= 1) return Poly1();
    std::vector<T> d(c_.size() - 1, T(0));
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * T(static_cast<long>(i));
    return Poly1(std::move(d));
  }

  friend bool operator==(const Poly1& a, const Poly1& b) { return a.c_ == b.c_; }

 private:
  static bool is_zero_value(const T& v) { return v.is_zero(); }
  void trim() {
    while (!c_.empty() && is_zero_value(c_.back())) c_.pop_back();
  }

  std::vector<T> c_;  // ascending powers
};

using QPoly = Poly1<QuadExt>;

std::string to_string(const QPoly& p, const std::string& var = "r");

// Field operations over Q(sqrt(q)).
std::pair<QPoly, QPoly> divmod(const QPoly& num, const QPoly& den);
QPoly monic(const QPoly& p);
QPoly gcd(QPoly a, QPoly b);
QPoly conj(const QPoly& p);
bool is_rational(const QPoly& p);

/// Yun's square-free decomposition: p = lead * prod f_i^{m_i}.
std::vector<std::pair<QPoly, int>> square_free_decomposition(const QPoly& p);

enum class RootKind { Integer, RationalNonInteger, Irrational, Complex };
const char* to_string(RootKind k);

struct PolyRoot {
  std::optional<QuadExt> exact;
  BigComplex approx;
  RootKind kind;
  int multiplicity = 1;

  std::string str() const;
};

/// All roots with multiplicity. Rational roots are located numerically,
/// checked against the rational root theorem bound and confirmed by exact
/// evaluation; quadratic (and biquadratic) remainders are solved in closed
/// form; anything left is reported from the numeric root finder.
/// Throws std::invalid_argument for the zero polynomial.
std::vector<PolyRoot> solve_polynomial(const QPoly& p, int decimal_digits = default_decimal_precision());

/// Simultaneous (Aberth-Ehrlich) iteration on complex coefficients.
std::vector<BigComplex> numeric_roots(const std::vector<BigComplex>& coeffs, mpfr_prec_t bits);

}  // namespace painleve
