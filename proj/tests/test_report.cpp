#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "painleve/report.hpp"

using namespace painleve;
using nlohmann::ordered_json;

namespace {

QuadExt q(const char* s) { return QuadExt::parse(s); }

PolyODESystem hhz() { return square_substitute(henon_heiles(q("1/9"), q("-16/5")), "x"); }

BalanceCandidate case2(const PolyODESystem& sys) {
  for (const auto& c : find_balances(sys))
    if (c.exponents[0] == BigRational(-3)) return c;
  throw std::logic_error("no Case-2 candidate");
}

const QuadExt kLead = QuadExt::parse("25/16*sqrt(2)");

std::size_t lead_index(const std::vector<LaurentSolution>& sols, const QuadExt& a1) {
  for (std::size_t k = 0; k < sols.size(); ++k)
    if (sols[k].coefficient(0, sols[k].start[0]).as_constant() == a1) return k;
  throw std::logic_error("branch not found");
}

// First significant digit and decimal exponent of "d.dde+XX".
std::pair<int, int> digit_exponent(const std::string& s) {
  const bool neg = s[0] == '-';
  const int d = s[neg ? 1 : 0] - '0';
  const int e = std::stoi(s.substr(s.find('e') + 1));
  return {neg ? -d : d, e};
}

}  // namespace

TEST_CASE("empty report is a valid skeleton") {
  const AnalysisReport r;
  const auto j = ordered_json::parse(serialize(r, Format::JSON));
  CHECK(j.at("schema") == "1");
  for (const char* key : {"system", "balances", "resonances", "verdict", "branches", "decay_table"})
    CHECK(j.contains(key));
  CHECK(j.at("balances").empty());
  CHECK(j.at("branches").empty());
  CHECK(report_from_json(j) == r);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"schema", "command", "system", "balances", "resonances", "verdict",
                                         "branches", "decay_table", "notes"});
}

TEST_CASE("TEXT layout of the series") {
  const auto sys = hhz();
  const auto sols = expand(sys, case2(sys), 7);
  AnalysisReport r;
  r.command = "series";
  r.branches.push_back(branch_record(sols[lead_index(sols, kLead)], 1));
  const std::string text = serialize(r, Format::TEXT);
  const std::string first = text.substr(0, text.find('\n'));
  CHECK(first.rfind("z = 25/16*sqrt(2)*t^-3 + 125/192*t^-2 + 25/768*sqrt(2)*t^-1 + 1625/82944 + cz1*t + "
                    "(21845/47775744 - 1/6*sqrt(2)*cz1)*t^2 + ",
                    0) == 0);
  CHECK(first.size() > 5);
  CHECK(first.substr(first.size() - 6) == " + ...");
  const std::string second = text.substr(first.size() + 1, text.find('\n', first.size() + 1) - first.size() - 1);
  CHECK(second.rfind("y = -15/8*t^-2 + 5/32*sqrt(2)*t^-1 - 205/2304 + 115/13824*sqrt(2)*t - 1819/663552*t^2 + "
                     "(1673/11943936*sqrt(2) + 1/6*cz1)*t^3 + cy4*t^4 + ",
                     0) == 0);
}

TEST_CASE("JSON round trip") {
  const auto sys = hhz();
  AnalysisReport r;
  r.command = "series";
  const auto a = painleve_test(sys);
  add_analysis(r, a, true);
  r.system = system_record(sys, "hh-z");
  const std::map<std::string, QuadExt> zero{{"cz1", 0}, {"cy4", 0}};
  const auto sym = expand(sys, case2(sys), 8);
  for (const auto& s : sym) {
    auto br = branch_record(s, 1);
    br.checks = standard_checks(sys, s, 8, {});
    r.branches.push_back(br);
  }
  const auto ev = expand(sys, case2(sys), 10, SeriesMode::EVALUATED, zero);
  auto br = branch_record(ev[0], 1);
  br.checks = standard_checks(sys, ev[0], 10, zero);
  r.branches.push_back(br);
  r.notes.push_back("a note");
  DecayTable t = decay_table_serial(sys, case2(sys), sym[0], {{QuadExt(0), QuadExt(0)}}, 6);
  r.decay_table = decay_records(t);

  const std::string out = serialize(r, Format::JSON);
  const auto back = report_from_json(ordered_json::parse(out));
  CHECK(back == r);
  CHECK(serialize(back, Format::JSON) == out);
  // Exact strings, never floats.
  const auto j = ordered_json::parse(out);
  CHECK(j.at("branches").at(0).at("series").at("y").at("terms").at(4).at(1) == "-1819/663552");
  CHECK(j.at("branches").at(0).at("a1").is_string());
  CHECK(j.at("branches").at(0).at("checks").contains("residual"));
}

TEST_CASE("branch record contents") {
  const auto sys = hhz();
  const auto sols = expand(sys, case2(sys), 8);
  const auto br = branch_record(sols[lead_index(sols, kLead)], 1);
  CHECK(br.a1 == "25/16*sqrt(2)");
  CHECK(br.status == "OK");
  CHECK(br.mode == "SYMBOLIC");
  REQUIRE(br.parameters.size() == 2);
  CHECK(br.parameters[0].name == "cz1");
  CHECK(br.parameters[0].step == 4);
  CHECK(br.parameters[1].name == "cy4");
  CHECK(br.parameters[1].step == 6);
  REQUIRE(br.series.size() == 2);
  CHECK(br.series[0].var == "z");
  CHECK(br.series[0].start == -3);
}

TEST_CASE("standard checks") {
  const auto sys = hhz();
  const std::map<std::string, QuadExt> zero{{"cz1", 0}, {"cy4", 0}};
  const auto ev = expand(sys, case2(sys), 20, SeriesMode::EVALUATED, zero);
  const auto checks = standard_checks(sys, ev[lead_index(ev, kLead)], 20, zero);
  std::vector<std::string> names;
  for (const auto& c : checks) {
    names.push_back(c.name);
    CHECK(c.passed);
  }
  CHECK(names == std::vector<std::string>{"residual", "energy", "first_order_invariant", "trajectory_relation"});
  const auto plain = henon_heiles(1, -1);
  const auto c1 = find_balances(plain);
  const auto s1 = expand(plain, c1[0], 8);
  const auto pc = standard_checks(plain, s1[0], 8, {});
  REQUIRE(pc.size() == 2);
  CHECK(pc[0].name == "residual");
  CHECK(pc[1].name == "energy");
  CHECK(pc[0].passed);
  CHECK(pc[1].passed);
}

TEST_CASE("display values") {
  CHECK(display_value(QuadExt(0)) == "0");
  CHECK(display_value(q("-1/8")) == "-1.3e-01");
  CHECK(display_value(q("1128")) == "1.1e+03");
  CHECK(display_value(q("1128"), 1) == "1e+03");
  CHECK(display_value(q("sqrt(-2)")) == "sqrt(-2)");
}

TEST_CASE("reference grid") {
  const auto g = reference_decay_grid();
  REQUIRE(g.size() == 30);
  CHECK(g[0] == std::vector<QuadExt>{QuadExt(-1), QuadExt(-1)});
  CHECK(g[1] == std::vector<QuadExt>{QuadExt(0), QuadExt(0)});
  CHECK(std::find(g.begin(), g.end(), std::vector<QuadExt>{q("2/5"), q("4/5")}) != g.end());
  CHECK(g[26] == std::vector<QuadExt>{QuadExt(20), QuadExt(20)});
  CHECK(g[29] == std::vector<QuadExt>{QuadExt(40), QuadExt(40)});
}

TEST_CASE("decay table: parallel equals serial, order kept") {
  const auto sys = hhz();
  const auto cand = case2(sys);
  const auto sym = expand(sys, cand, 8);
  const auto& b = sym[lead_index(sym, kLead)];
  std::vector<std::vector<QuadExt>> grid;
  for (int k = 0; k < 8; ++k) grid.push_back({QuadExt(BigRational(k - 3, 2)), QuadExt(BigRational(5 - k, 3))});
  const auto par = decay_table(sys, cand, b, grid, 20);
  const auto ser = decay_table_serial(sys, cand, b, grid, 20);
  REQUIRE(par.rows.size() == grid.size());
  CHECK(par.parameters == std::vector<std::string>{"cz1", "cy4"});
  CHECK(par.vars == std::vector<std::string>{"z", "y"});
  CHECK(decay_records(par) == decay_records(ser));
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(par.rows[k].values == grid[k]);
    CHECK(par.rows[k].coefficients == ser.rows[k].coefficients);
  }
  CHECK_THROWS_AS(decay_table(sys, cand, b, {{QuadExt(0)}}, 20), std::invalid_argument);
}

TEST_CASE("decay table exactness at twice the precision") {
  const auto sys = hhz();
  const auto cand = case2(sys);
  const auto sym = expand(sys, cand, 8);
  const auto& b = sym[lead_index(sym, kLead)];
  const auto t = decay_table(sys, cand, b, {{QuadExt(0), QuadExt(0)}, {QuadExt(-1), QuadExt(-1)}}, 50);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0].display == std::vector<std::string>{"-1.1e-44", "2.3e-45"});
  for (const auto& row : t.rows) {
    REQUIRE(row.status == BranchStatus::OK);
    for (std::size_t v = 0; v < row.coefficients.size(); ++v) {
      const std::string hi = to_bigfloat(row.coefficients[v], decimal_to_bits(2 * default_decimal_precision())).sci(2);
      CHECK(digit_exponent(hi) == digit_exponent(row.display[v]));
      CHECK(hi == row.display[v]);
    }
  }
}
