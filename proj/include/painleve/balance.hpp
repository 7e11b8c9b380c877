#pragma once

// Dominant balances x_i ~ a_i t^alpha_i on a rational exponent grid.

#include <optional>
#include <string>
#include <vector>

#include "painleve/exactnum.hpp"
#include "painleve/odemodel.hpp"
#include "painleve/upoly.hpp"

namespace painleve {

struct BalanceCandidate {
  std::vector<BigRational> exponents;
  /// nullopt marks an ARBITRARY leading coefficient.
  std::vector<std::optional<QuadExt>> leading;
  /// Per equation, the monomials of the terms of minimal exponent.
  std::vector<std::vector<JetPolynomial::Monomial>> leading_terms;
  /// Per equation, the minimal exponent m_i.
  std::vector<BigRational> equation_orders;
  bool unresolved = false;
  std::string diagnostic;

  bool integer_exponents() const;
  friend bool operator==(const BalanceCandidate&, const BalanceCandidate&) = default;
};

struct BalanceOptions {
  BigRational lo = BigRational(-5);
  BigRational hi = BigRational(-1, 2);
  int denominator_bound = 2;
};

/// Grid search; grid points are evaluated concurrently and merged in grid
/// order, then sorted by exponent tuple.
std::vector<BalanceCandidate> find_balances(const PolyODESystem& system, const BalanceOptions& opts = {});
/// Same result computed on one thread.
std::vector<BalanceCandidate> find_balances_serial(const PolyODESystem& system, const BalanceOptions& opts = {});

/// Keeps only the leading-term subset of each equation.
PolyODESystem leading_terms(const PolyODESystem& system, const BalanceCandidate& candidate);

/// A dominant exponent that is not on the search grid, found by treating one
/// variable as a perturbation of a balance of the remaining ones.
struct ExponentDiagnostic {
  int var = 0;
  PolyRoot root;
  std::string text;
};

/// Reports irrational or complex exponents (and negative rational ones off
/// the grid) admitted by the indicial equation of each variable.
std::vector<ExponentDiagnostic> exponent_diagnostics(const PolyODESystem& system, const BalanceOptions& opts = {});

/// Falling factorial alpha (alpha - 1) ... (alpha - k + 1).
BigRational falling_factorial(const BigRational& alpha, int k);

}  // namespace painleve
