#pragma once

// Resonance matrix Q(r), its determinant and root classification, and the
// aggregated Painleve verdict.

#include <optional>
#include <string>
#include <vector>

#include "painleve/balance.hpp"
#include "painleve/odemodel.hpp"
#include "painleve/parampoly.hpp"
#include "painleve/upoly.hpp"

namespace painleve {

/// Polynomial in r whose coefficients may involve ARBITRARY leading
/// coefficients (ParamId = variable index).
using RPoly = Poly1<ParamPoly>;
using RMatrix = std::vector<std::vector<RPoly>>;

/// Name of the ARBITRARY leading coefficient of variable index v ("a1", ...).
std::string leading_param_name(int v);

RMatrix resonance_matrix(const PolyODESystem& simplified, const BalanceCandidate& candidate);
RPoly determinant(const RMatrix& m);
/// Q(r) at a concrete r with parameter values substituted where given.
std::vector<std::vector<ParamPoly>> evaluate_matrix(const RMatrix& m, const QuadExt& r);

std::string to_string(const RPoly& p, const std::string& var = "r");

struct ResonanceReport {
  RMatrix matrix;
  RPoly determinant;
  /// Determinant with parameter content removed, when its roots do not
  /// depend on free parameters.
  std::optional<QPoly> reduced;
  std::vector<PolyRoot> roots;
  bool has_minus_one = false;
  bool degenerate = false;
  std::string diagnostic;

  /// Largest positive integer root, 0 if none.
  int max_positive_integer() const;
  bool all_integer() const;
  bool all_rational() const;
};

/// Builds Q(r) from the leading terms and classifies the roots of det Q.
ResonanceReport analyze_resonances(const PolyODESystem& system, const BalanceCandidate& candidate,
                                   int decimal_digits = default_decimal_precision());

/// Roots of a determinant after removing parameter content. Throws
/// std::invalid_argument for the zero polynomial.
std::vector<PolyRoot> resonance_roots(const QPoly& det, int decimal_digits = default_decimal_precision());

enum class VerdictStatus { PASSES, WEAK, FAILS };
const char* to_string(VerdictStatus s);

struct PainleveVerdict {
  VerdictStatus status = VerdictStatus::PASSES;
  std::vector<std::string> reasons;
  /// False when some candidate or branch could not be decided.
  bool conclusive = true;
  friend bool operator==(const PainleveVerdict&, const PainleveVerdict&) = default;
};

/// Outcome of the level-three recursion for one candidate.
enum class Compatibility { NotChecked, Compatible, LogRequired, Unresolved };
const char* to_string(Compatibility c);

struct CandidateAssessment {
  const BalanceCandidate* candidate = nullptr;
  const ResonanceReport* resonances = nullptr;
  Compatibility compatibility = Compatibility::NotChecked;
  std::string compatibility_note;
};

/// Aggregates per-candidate findings: any irrational or complex resonance or
/// exponent, or a required logarithm, gives FAILS; otherwise any rational
/// non-integer exponent or resonance gives WEAK; otherwise PASSES.
PainleveVerdict classify(const PolyODESystem& system, const std::vector<CandidateAssessment>& assessments,
                         const std::vector<ExponentDiagnostic>& exponent_notes);

}  // namespace painleve
