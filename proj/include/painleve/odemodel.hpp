#pragma once

// Polynomial ODE systems in jet variables, the text grammar, the generalized
// Henon-Heiles constructor and the squaring substitution z = x^2.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "painleve/exactnum.hpp"

namespace painleve {

/// A dependent variable (index into the owning system) or one of its
/// time derivatives.
struct JetVar {
  int var = 0;
  int order = 0;
  friend auto operator<=>(const JetVar&, const JetVar&) = default;
};

class JetPolynomial {
 public:
  /// Sorted by JetVar, positive exponents only.
  using Monomial = std::vector<std::pair<JetVar, int>>;
  using Terms = std::map<Monomial, QuadExt>;

  JetPolynomial() = default;
  JetPolynomial(const QuadExt& c);  // NOLINT(google-explicit-constructor)
  static JetPolynomial jet(JetVar v, int exponent = 1);
  static JetPolynomial term(Monomial m, const QuadExt& c);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }
  QuadExt constant_value() const;

  /// Highest derivative order of `var` present, or -1.
  int max_order(int var) const;
  /// Largest exponent of JetVar `v` over all terms.
  int degree_in(JetVar v) const;
  bool contains(int var) const;

  JetPolynomial operator-() const;
  JetPolynomial& operator+=(const JetPolynomial& o);
  JetPolynomial& operator-=(const JetPolynomial& o);
  friend JetPolynomial operator+(JetPolynomial a, const JetPolynomial& b) { return a += b; }
  friend JetPolynomial operator-(JetPolynomial a, const JetPolynomial& b) { return a -= b; }
  friend JetPolynomial operator*(const JetPolynomial& a, const JetPolynomial& b);
  JetPolynomial pow(int e) const;
  JetPolynomial scaled(const QuadExt& s) const;

  /// Total time derivative, x^(k) -> x^(k+1).
  JetPolynomial time_derivative() const;

  std::string str(const std::vector<std::string>& names) const;

  friend bool operator==(const JetPolynomial& a, const JetPolynomial& b) { return a.terms_ == b.terms_; }

 private:
  Terms terms_;
};

std::string jet_name(const std::string& var, int order);
/// Monomial exponent lookup (0 when absent).
int exponent_of(const JetPolynomial::Monomial& m, JetVar v);

/// Parameters of the built-in Henon-Heiles family, kept for the energy and
/// closed-form checks.
struct HHParams {
  QuadExt lambda;
  QuadExt C;
  bool squared = false;  // true for the z = x^2 form
  friend bool operator==(const HHParams&, const HHParams&) = default;
};

struct PolyODESystem {
  std::vector<std::string> vars;
  /// equations[i] = 0, owned by vars[i].
  std::vector<JetPolynomial> equations;
  std::optional<HHParams> hh;

  int size() const { return static_cast<int>(vars.size()); }
  int index_of(std::string_view name) const;  // -1 if undeclared
  /// Highest derivative of vars[i] appearing anywhere in the system.
  int max_order(int i) const;
  /// Renders in the input grammar; parse(str()) reproduces the system.
  std::string str() const;

  friend bool operator==(const PolyODESystem& a, const PolyODESystem& b) {
    return a.vars == b.vars && a.equations == b.equations;
  }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::string message_;
  int line_;
  int column_;
};

/// Raised when a transformation's structural precondition does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

PolyODESystem parse_system(std::string_view text);

/// x'' = -lambda x - 2 x y,  y'' = -y - x^2 + C y^2.
PolyODESystem henon_heiles(const QuadExt& lambda, const QuadExt& C);

/// Replaces `var` by z = var^2. The owner equation must read c*var'' + R = 0
/// with R = var*Q where Q is even in var and free of var', var''; all other
/// equations may contain var only through even powers. The new variable
/// keeps the position and is named `new_name` (default "z").
PolyODESystem square_substitute(const PolyODESystem& system, std::string_view var,
                                std::string_view new_name = "z");

}  // namespace painleve
