#pragma once

// Analysis orchestration and serializable reports (JSON schema "1" and a
// plain-text layout), plus the coefficient decay table.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "painleve/balance.hpp"
#include "painleve/odemodel.hpp"
#include "painleve/resonance.hpp"
#include "painleve/series.hpp"
#include "painleve/verify.hpp"

namespace painleve {

inline constexpr const char* kSchemaVersion = "1";

// ---------------------------------------------------------------- analysis

struct PainleveAnalysis {
  PolyODESystem system;
  std::vector<BalanceCandidate> candidates;
  std::vector<ResonanceReport> resonances;  // one per candidate
  std::vector<Compatibility> compatibility;
  std::vector<std::string> compatibility_notes;
  std::vector<ExponentDiagnostic> exponent_notes;
  PainleveVerdict verdict;
};

struct AnalysisOptions {
  BalanceOptions balance;
  int digits = default_decimal_precision();
  bool check_compatibility = true;
};

/// Balances, resonances, off-grid exponents and, for integer candidates
/// with integer resonances, the compatibility conditions up to the largest
/// resonance; then the verdict.
PainleveAnalysis painleve_test(const PolyODESystem& system, const AnalysisOptions& opts = {});

/// Balances and resonances only.
PainleveAnalysis resonance_analysis(const PolyODESystem& system, const AnalysisOptions& opts = {});

/// First candidate with integer exponents and integer resonances.
std::optional<std::size_t> default_series_candidate(const PainleveAnalysis& a);

// ---------------------------------------------------------------- decay table

struct DecayRow {
  std::vector<QuadExt> values;        // one per free parameter
  std::vector<QuadExt> coefficients;  // one per variable, at t^power
  std::vector<std::string> display;
  BranchStatus status = BranchStatus::OK;
  std::string diagnostic;
};

struct DecayTable {
  std::string branch;
  std::vector<std::string> parameters;
  std::vector<std::string> vars;
  int power = 50;
  std::vector<DecayRow> rows;
};

/// Coefficients at t^power of `branch` for each grid point, each row an
/// independent EVALUATED expansion. Rows run concurrently.
DecayTable decay_table(const PolyODESystem& system, const BalanceCandidate& candidate, const LaurentSolution& branch,
                       const std::vector<std::vector<QuadExt>>& grid, int power = 50);
DecayTable decay_table_serial(const PolyODESystem& system, const BalanceCandidate& candidate,
                              const LaurentSolution& branch, const std::vector<std::vector<QuadExt>>& grid,
                              int power = 50);

/// The 30-row (cz1, cy4) reference grid, in reading order.
std::vector<std::vector<QuadExt>> reference_decay_grid();

/// Scientific notation with `significant` digits ("-1.1e-44"), "0" for zero.
std::string display_value(const QuadExt& v, int significant = 2);

// ---------------------------------------------------------------- records

struct SystemRecord {
  std::string source;  // "hh", "hh-z" or "file"
  std::vector<std::string> vars;
  std::string text;
  std::optional<std::string> lambda;
  std::optional<std::string> C;
  friend bool operator==(const SystemRecord&, const SystemRecord&) = default;
};

struct BalanceRecord {
  std::vector<std::string> exponents;
  std::vector<std::string> leading;  // "ARBITRARY" when free
  std::vector<std::vector<std::string>> leading_terms;
  bool unresolved = false;
  std::string diagnostic;
  friend bool operator==(const BalanceRecord&, const BalanceRecord&) = default;
};

struct RootRecord {
  std::string value;
  std::string kind;
  int multiplicity = 1;
  friend bool operator==(const RootRecord&, const RootRecord&) = default;
};

struct ResonanceRecord {
  int candidate = 0;
  std::string determinant;
  std::optional<std::string> reduced;
  std::vector<RootRecord> roots;
  bool has_minus_one = false;
  bool degenerate = false;
  std::string diagnostic;
  std::string compatibility = "NOT_CHECKED";
  std::string compatibility_note;
  friend bool operator==(const ResonanceRecord&, const ResonanceRecord&) = default;
};

struct VerdictRecord {
  std::string status;
  bool conclusive = true;
  std::vector<std::string> reasons;
  friend bool operator==(const VerdictRecord&, const VerdictRecord&) = default;
};

struct VarSeriesRecord {
  std::string var;
  int start = 0;
  std::vector<std::pair<int, std::string>> terms;  // (power, exact coefficient)
  friend bool operator==(const VarSeriesRecord&, const VarSeriesRecord&) = default;
};

struct ParameterRecord {
  std::string name;
  int step = 0;
  std::string var;
  int power = 0;
  std::optional<std::string> value;
  friend bool operator==(const ParameterRecord&, const ParameterRecord&) = default;
};

struct CheckRecord {
  std::string name;
  bool passed = true;
  std::optional<int> lowest_nonzero;
  int window_end = 0;
  std::string detail;
  friend bool operator==(const CheckRecord&, const CheckRecord&) = default;
};

struct BranchRecord {
  std::string a1;
  std::string id;
  int candidate = 0;
  std::string status;
  std::string diagnostic;
  std::string mode;
  int order = 0;
  std::vector<VarSeriesRecord> series;
  std::vector<ParameterRecord> parameters;
  std::vector<ConstraintRecord> constraints;
  std::vector<CheckRecord> checks;
  friend bool operator==(const BranchRecord&, const BranchRecord&) = default;
};

struct DecayCoefficientRecord {
  std::string name;  // "cz50"
  std::string exact;
  std::string display;
  friend bool operator==(const DecayCoefficientRecord&, const DecayCoefficientRecord&) = default;
};

struct DecayRowRecord {
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<DecayCoefficientRecord> coefficients;
  std::string status;
  std::string diagnostic;
  friend bool operator==(const DecayRowRecord&, const DecayRowRecord&) = default;
};

struct AnalysisReport {
  std::string command;
  std::optional<SystemRecord> system;
  std::vector<BalanceRecord> balances;
  std::vector<ResonanceRecord> resonances;
  std::optional<VerdictRecord> verdict;
  std::vector<BranchRecord> branches;
  std::vector<DecayRowRecord> decay_table;
  std::vector<std::string> notes;
  friend bool operator==(const AnalysisReport&, const AnalysisReport&) = default;
};

SystemRecord system_record(const PolyODESystem& system, const std::string& source);
BalanceRecord balance_record(const PolyODESystem& system, const BalanceCandidate& candidate);
ResonanceRecord resonance_record(int candidate, const ResonanceReport& r, Compatibility c = Compatibility::NotChecked,
                                 const std::string& note = "");
VerdictRecord verdict_record(const PainleveVerdict& v);
VarSeriesRecord series_record(const LaurentSolution& s, int var);
BranchRecord branch_record(const LaurentSolution& s, int candidate);
std::vector<DecayRowRecord> decay_records(const DecayTable& t);

/// Fills system, balances, resonances and (when `with_verdict`) the verdict.
void add_analysis(AnalysisReport& report, const PainleveAnalysis& a, bool with_verdict);

/// Residual, energy, invariant and trajectory checks at truncation N.
std::vector<CheckRecord> standard_checks(const PolyODESystem& system, const LaurentSolution& s, int N,
                                         const std::map<std::string, QuadExt>& params);

// ---------------------------------------------------------------- serialization

enum class Format { JSON, TEXT };

nlohmann::ordered_json to_json(const AnalysisReport& r);
AnalysisReport report_from_json(const nlohmann::ordered_json& j);
std::string serialize(const AnalysisReport& r, Format f);

/// "z = 25/16*sqrt(2)*t^-3 + 125/192*t^-2 + ..."
std::string format_series(const VarSeriesRecord& s);

}  // namespace painleve
