#pragma once

// Sparse polynomials over Q(sqrt(q)) in named free parameters. Exponents may
// be negative so that division by a single-term pivot (for instance a free
// leading coefficient) stays exact.

#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "painleve/exactnum.hpp"
#include "painleve/upoly.hpp"

namespace painleve {

using ParamId = int;

class ParamPoly {
 public:
  /// Sorted by parameter id; no zero exponents.
  using Monomial = std::vector<std::pair<ParamId, int>>;
  using Terms = std::map<Monomial, QuadExt>;
  using Namer = std::function<std::string(ParamId)>;

  ParamPoly() = default;
  ParamPoly(const QuadExt& c);        // NOLINT(google-explicit-constructor)
  ParamPoly(const BigRational& c);    // NOLINT(google-explicit-constructor)
  ParamPoly(long c);                  // NOLINT(google-explicit-constructor)

  static ParamPoly variable(ParamId id, int exponent = 1);
  static ParamPoly term(Monomial m, const QuadExt& coeff);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }
  bool is_single_term() const { return terms_.size() == 1; }
  /// Value of a constant polynomial; throws std::logic_error otherwise.
  QuadExt as_constant() const;
  QuadExt constant_term() const;
  std::set<ParamId> variables() const;
  int max_exponent(ParamId id) const;
  int min_exponent(ParamId id) const;

  ParamPoly operator-() const;
  ParamPoly& operator+=(const ParamPoly& o);
  ParamPoly& operator-=(const ParamPoly& o);
  ParamPoly& operator*=(const ParamPoly& o);
  ParamPoly& operator*=(const QuadExt& s);
  friend ParamPoly operator+(ParamPoly a, const ParamPoly& b) { return a += b; }
  friend ParamPoly operator-(ParamPoly a, const ParamPoly& b) { return a -= b; }
  friend ParamPoly operator*(const ParamPoly& a, const ParamPoly& b);
  friend ParamPoly operator*(ParamPoly a, const QuadExt& s) { return a *= s; }

  /// Exact division by a single-term divisor; throws std::domain_error otherwise.
  ParamPoly divided_by_term(const ParamPoly& divisor) const;

  ParamPoly substitute(ParamId id, const QuadExt& value) const;
  ParamPoly substitute(const std::map<ParamId, QuadExt>& values) const;
  /// Throws std::invalid_argument when a parameter has no value.
  QuadExt evaluate(const std::map<ParamId, QuadExt>& values) const;

  /// For a polynomial in `id` alone: multiplies by id^(-min exponent) and
  /// returns the resulting ordinary polynomial together with that shift.
  std::pair<QPoly, int> to_univariate(ParamId id) const;

  std::string str(const Namer& name) const;

  friend bool operator==(const ParamPoly& a, const ParamPoly& b) { return a.terms_ == b.terms_; }

 private:
  Terms terms_;
};

}  // namespace painleve
