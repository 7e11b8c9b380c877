#pragma once

// Independent checks on Laurent solutions: residuals against the full
// system, energy conservation, the squared first-order invariant and
// trajectory relation at lambda = 1/9, and a numeric expansion of the
// trigonometric closed forms.

#include <climits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "painleve/exactnum.hpp"
#include "painleve/odemodel.hpp"
#include "painleve/parampoly.hpp"
#include "painleve/series.hpp"

namespace painleve {

/// Laurent series sum_k coeffs[k] t^(valuation + k), known for powers below
/// `precision`. Coefficients past coeffs.size() are zero.
struct TruncatedSeries {
  static constexpr int kExact = INT_MAX / 4;

  int valuation = 0;
  std::vector<ParamPoly> coeffs;
  int precision = kExact;

  static TruncatedSeries constant(const ParamPoly& c);
  bool exact() const { return precision >= kExact / 2; }
  ParamPoly at(int power) const;
  /// Lowest power below `precision` with a nonzero coefficient.
  std::optional<int> lowest_nonzero() const;

  TruncatedSeries derivative() const;
  TruncatedSeries pow(int e) const;
  TruncatedSeries operator-() const;
  friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b);
  friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b);
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
  friend TruncatedSeries operator*(const TruncatedSeries& a, const QuadExt& k);
  /// Throws std::domain_error when b has no nonzero constant leading coefficient.
  friend TruncatedSeries operator/(const TruncatedSeries& a, const TruncatedSeries& b);
};

/// Series of variable `var` from steps 0..N with parameter values
/// substituted. `exact_truncation` treats the truncation as an exact
/// polynomial rather than a series known to O(t^(start+N+1)).
TruncatedSeries truncated(const LaurentSolution& solution, int var, int N,
                          const std::map<std::string, QuadExt>& params, bool exact_truncation);

/// Value of a jet polynomial on per-variable series.
TruncatedSeries substitute(const JetPolynomial& p, const std::vector<TruncatedSeries>& series);

struct CheckResult {
  std::optional<int> lowest_nonzero;  // lowest surviving power below window_end
  std::string coefficient;            // its coefficient, exact
  int window_end = 0;                 // powers below this are determined by the truncation
  bool vanishes() const { return !lowest_nonzero.has_value(); }
  friend bool operator==(const CheckResult&, const CheckResult&) = default;
};

struct EquationResidual {
  int matched_power = 0;  // lowest power any term of the equation can reach
  std::optional<int> lowest_nonzero;
  std::string magnitude;  // |coefficient| at the lowest surviving power, sci notation
  int checked_through = 0;
  friend bool operator==(const EquationResidual&, const EquationResidual&) = default;
};

struct ResidualProfile {
  int N = 0;
  bool exact = false;  // truncation substituted as an exact polynomial
  std::vector<EquationResidual> equations;
  /// Every equation is clean below matched_power + N + 1.
  bool consistent() const;
  friend bool operator==(const ResidualProfile&, const ResidualProfile&) = default;
};

/// Substitutes the order-N truncation into every equation. With all
/// parameters valued the truncation is exact and the whole residual is
/// inspected; otherwise only the window fixed by the truncation is.
ResidualProfile residual_order(const PolyODESystem& system, const LaurentSolution& solution, int N,
                               const std::map<std::string, QuadExt>& params = {});

struct EnergyResult {
  TruncatedSeries H;
  ParamPoly energy;       // constant term
  CheckResult nonconstant;  // first nonconstant power that survives
};

/// Hamiltonian along the series. Needs the builtin parameters on the system;
/// in the squared form x^2 = z and x'^2 = z'^2/(4z).
EnergyResult energy_series(const PolyODESystem& system, const LaurentSolution& solution,
                           const std::map<std::string, QuadExt>& params, int N);

/// (y'^2 + 32/15 y^3 + 4/9 y^2)^2 + 64/135 y^5.
TruncatedSeries first_order_invariant(const TruncatedSeries& y);
/// (z + 5/9 y)^2 + 20/27 y^3.
TruncatedSeries trajectory_relation(const TruncatedSeries& z, const TruncatedSeries& y);

CheckResult first_order_invariant_check(const PolyODESystem& system, const LaurentSolution& solution,
                                        const std::map<std::string, QuadExt>& params, int N);
CheckResult trajectory_relation_check(const PolyODESystem& system, const LaurentSolution& solution,
                                      const std::map<std::string, QuadExt>& params, int N);

CheckResult check_of(const TruncatedSeries& s, const ParamPoly::Namer& namer = nullptr, bool skip_constant = false);

/// Closed-form solution with sign +1 for the 1 - 3 sin form and -1 for
/// 1 + 3 sin. The pole at t = 0 is the one where the z leading coefficient
/// has the same sign as `sign`.
struct ClosedFormBranch {
  int sign = 1;
  int digits = 128;
  BigFloat theta0() const;  // phase (t - t0)/3 at t = 0
  BigFloat t0() const;
};

struct ClosedFormTable {
  int y_start = -2;
  int z_start = -3;
  std::vector<BigFloat> y;  // y[k] multiplies t^(y_start + k)
  std::vector<BigFloat> z;
};

/// Laurent coefficients of y and z through t^upto. Needs digits >= 2(upto + 10).
ClosedFormTable closed_form_laurent(const ClosedFormBranch& branch, int upto);

struct ClosedFormComparison {
  BigFloat max_relative_error;
  std::string worst_var;
  int worst_power = 0;
  int powers_compared = 0;
  bool within(const BigFloat& tol) const { return !(max_relative_error > tol); }
};

/// Compares every coefficient of y and z from their leading power through t^upto.
ClosedFormComparison compare_closed_form(const LaurentSolution& solution, const std::map<std::string, QuadExt>& params,
                                         const ClosedFormBranch& branch, int upto);

/// Parameter values identifying the closed form on the branch with leading sign `sign`.
std::map<std::string, QuadExt> closed_form_parameters(int sign);

/// True for the squared Henon-Heiles form at lambda = 1/9, C = -16/5.
bool closed_form_applicable(const PolyODESystem& system);

}  // namespace painleve
