#pragma once

// Level-three recursion: formal Laurent series x_v = sum_j c_{v,j} t^(alpha_v + j)
// about a movable pole at t0 = 0, with free parameters introduced at
// resonances and compatibility constraints resolved by exact branching.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "painleve/balance.hpp"
#include "painleve/odemodel.hpp"
#include "painleve/parampoly.hpp"
#include "painleve/resonance.hpp"

namespace painleve {

enum class SeriesMode { SYMBOLIC, EVALUATED };
const char* to_string(SeriesMode m);

enum class BranchStatus { OK, LOG_REQUIRED, UNRESOLVED };
const char* to_string(BranchStatus s);

constexpr int kSymbolicDefaultOrder = 20;
constexpr int kEvaluatedDefaultOrder = 50;

struct RegistryEntry {
  std::string name;
  ParamId id = 0;
  int step = 0;  // resonance step j at which the parameter appeared
  int var = 0;
  int power = 0;
  friend bool operator==(const RegistryEntry&, const RegistryEntry&) = default;
};

struct ConstraintRecord {
  int step = 0;
  /// Raw consistency conditions (each must vanish), rendered exactly.
  std::vector<std::string> conditions;
  std::string resolution;
  friend bool operator==(const ConstraintRecord&, const ConstraintRecord&) = default;
};

struct LaurentSolution {
  std::vector<std::string> vars;
  std::vector<int> start;                      // leading exponent per variable
  std::vector<std::vector<ParamPoly>> coeffs;  // coeffs[v][j] multiplies t^(start[v] + j)
  std::vector<RegistryEntry> registry;         // free parameters still present
  std::map<ParamId, std::string> names;        // every parameter ever introduced
  std::map<ParamId, QuadExt> fixed;            // parameters pinned by constraints or inputs
  std::vector<ConstraintRecord> log;
  std::string branch_id;
  BranchStatus status = BranchStatus::OK;
  std::string diagnostic;
  int order = 0;  // number of recursion steps performed
  SeriesMode mode = SeriesMode::SYMBOLIC;

  std::string name(ParamId id) const;
  ParamPoly::Namer namer() const;
  /// Coefficient of t^power; throws std::out_of_range outside the expansion.
  ParamPoly coefficient(int var, int power) const;
  ParamPoly coefficient(const std::string& var, int power) const;
  int var_index(const std::string& var) const;
  /// Leading coefficient of the first variable (the branch label).
  std::string leading_label() const;
  std::optional<ParamId> param_id(const std::string& name) const;
};

/// Expands every branch. In EVALUATED mode parameters named in `params` are
/// substituted as soon as they appear, and any registry parameter left
/// without a value raises std::invalid_argument.
std::vector<LaurentSolution> expand(const PolyODESystem& system, const BalanceCandidate& candidate, int order,
                                    SeriesMode mode = SeriesMode::SYMBOLIC,
                                    const std::map<std::string, QuadExt>& params = {});

struct StepSystem {
  int step = 0;
  std::vector<std::vector<ParamPoly>> Q;  // Q(j)
  std::vector<ParamPoly> rhs;             // right side, -[t^(m_i + j)] P_i with c_j = 0
  /// Consistency conditions left after eliminating the step unknowns.
  std::vector<ParamPoly> constraints;
  ParamPoly::Namer namer;
};

/// Raw step-j systems (one per branch alive at step j) before constraint
/// resolution. Throws std::invalid_argument when det Q(j) != 0.
std::vector<StepSystem> compatibility_system(const PolyODESystem& system, const BalanceCandidate& candidate, int step,
                                             SeriesMode mode = SeriesMode::SYMBOLIC,
                                             const std::map<std::string, QuadExt>& params = {});

/// Values for every (variable, power) with power <= upto.
std::map<std::pair<std::string, int>, QuadExt> evaluate_coefficients(const LaurentSolution& solution,
                                                                     const std::map<std::string, QuadExt>& params,
                                                                     int upto);

/// Coefficient tables [v][j] with all parameters substituted.
std::vector<std::vector<QuadExt>> evaluated_table(const LaurentSolution& solution,
                                                  const std::map<std::string, QuadExt>& params);

/// Name for the parameter attached to t^power of variable `var` ("cz1", "cym1").
std::string series_param_name(const std::string& var, int power);

}  // namespace painleve
