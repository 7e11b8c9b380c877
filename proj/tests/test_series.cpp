#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "painleve/series.hpp"
#include "painleve/verify.hpp"

using namespace painleve;

namespace {

QuadExt q(const char* s) { return QuadExt::parse(s); }

PolyODESystem hhz(const QuadExt& lambda = q("1/9")) { return square_substitute(henon_heiles(lambda, q("-16/5")), "x"); }

BalanceCandidate case2(const PolyODESystem& sys) {
  for (const auto& c : find_balances(sys))
    if (c.exponents[0] == BigRational(-3)) return c;
  throw std::logic_error("no Case-2 candidate");
}

const LaurentSolution& by_lead(const std::vector<LaurentSolution>& sols, const QuadExt& a1) {
  for (const auto& s : sols)
    if (s.coefficient(0, s.start[0]).as_constant() == a1) return s;
  throw std::logic_error("branch not found");
}

ParamPoly param(const LaurentSolution& s, const char* name) { return ParamPoly::variable(*s.param_id(name)); }

ParamPoly conj(const ParamPoly& p) {
  ParamPoly out;
  for (const auto& [m, c] : p.terms()) out += ParamPoly::term(m, c.conj());
  return out;
}

}  // namespace

TEST_CASE("Weierstrass model u'' = 6 u^2") {
  const auto sys = parse_system("vars u; u'' = 6*u^2;");
  const auto cs = find_balances(sys);
  REQUIRE(cs.size() == 1);
  CHECK(*cs[0].leading[0] == QuadExt(1));
  const auto sols = expand(sys, cs[0], 6);
  REQUIRE(sols.size() == 1);
  const auto& s = sols[0];
  CHECK(s.status == BranchStatus::OK);
  CHECK(s.coefficient(0, -2) == ParamPoly(1));
  for (int p = -1; p <= 3; ++p) CHECK(s.coefficient(0, p).is_zero());
  REQUIRE(s.registry.size() == 1);
  CHECK(s.registry[0].name == "cu4");
  CHECK(s.registry[0].step == 6);
  CHECK(s.coefficient(0, 4) == param(s, "cu4"));
}

TEST_CASE("low-order series of the a1 = 25/16 sqrt(2) branch") {
  const auto sys = hhz();
  const auto sols = expand(sys, case2(sys), 7);
  REQUIRE(sols.size() == 4);
  const auto& s = by_lead(sols, q("25/16*sqrt(2)"));
  CHECK(s.status == BranchStatus::OK);
  const ParamPoly cz1 = param(s, "cz1"), cy4 = param(s, "cy4");
  const std::vector<ParamPoly> y{q("-15/8"),         q("5/32*sqrt(2)"),
                                 q("-205/2304"),     q("115/13824*sqrt(2)"),
                                 q("-1819/663552"),  ParamPoly(q("1673/11943936*sqrt(2)")) + cz1 * q("1/6"),
                                 cy4};
  const std::vector<ParamPoly> z{q("25/16*sqrt(2)"), q("125/192"), q("25/768*sqrt(2)"), q("1625/82944"), cz1,
                                 ParamPoly(q("21845/47775744")) - cz1 * q("1/6*sqrt(2)")};
  for (std::size_t k = 0; k < y.size(); ++k) CHECK(s.coefficient("y", -2 + static_cast<int>(k)) == y[k]);
  for (std::size_t k = 0; k < z.size(); ++k) CHECK(s.coefficient("z", -3 + static_cast<int>(k)) == z[k]);
  CHECK(s.coefficient("z", 3) ==
        ParamPoly(q("437425/9172942848*sqrt(2)")) - cy4 * q("25/48*sqrt(2)") - cz1 * q("191/3456"));
  CHECK(s.coefficient("y", 5) ==
        ParamPoly(q("1044461/220150628352*sqrt(2)")) - cz1 * q("19/9216") - cy4 * q("23/384*sqrt(2)"));
}

TEST_CASE("coefficient lookup") {
  const auto sys = hhz();
  const auto sols = expand(sys, case2(sys), 7);
  const auto& b1 = by_lead(sols, q("25/16*sqrt(2)"));
  const auto& b2 = by_lead(sols, q("-25/16*sqrt(2)"));
  CHECK(b1.coefficient("y", -2) == ParamPoly(q("-15/8")));
  CHECK(b1.coefficient("z", 1) == param(b1, "cz1"));
  CHECK(b2.coefficient("y", -1) == ParamPoly(q("-5/32*sqrt(2)")));
  CHECK_THROWS_AS(b1.coefficient("y", 6), std::out_of_range);
  CHECK_THROWS_AS(b1.coefficient("y", -3), std::out_of_range);
  CHECK_THROWS_AS(b1.coefficient("w", 0), std::out_of_range);
}

TEST_CASE("second branch pair") {
  const auto sys = hhz();
  const auto sols = expand(sys, case2(sys), 6);
  int found = 0;
  for (const auto& s : sols) {
    const QuadExt a1 = s.coefficient("z", -3).as_constant();
    if (a1 * a1 != q("-8125/23936")) continue;
    ++found;
    CHECK(s.coefficient("y", 2) == ParamPoly(q("-8700683/1364926464")));
    CHECK(s.status == BranchStatus::OK);
  }
  CHECK(found == 2);
  CHECK(by_lead(sols, q("25/16*sqrt(2)")).coefficient("y", 2) == ParamPoly(q("-1819/663552")));
}

TEST_CASE("free parameters: cz1 at step 4, cy4 at step 6") {
  const auto sys = hhz();
  for (const auto& s : expand(sys, case2(sys), 8)) {
    REQUIRE(s.registry.size() == 2);
    CHECK(s.registry[0].name == "cz1");
    CHECK(s.registry[0].step == 4);
    CHECK(s.registry[0].var == 0);
    CHECK(s.registry[0].power == 1);
    CHECK(s.registry[1].name == "cy4");
    CHECK(s.registry[1].step == 6);
    CHECK(s.registry[1].var == 1);
    CHECK(s.registry[1].power == 4);
    REQUIRE(s.log.size() == 2);
    CHECK(s.log[0].step == 4);
    CHECK(s.log[1].step == 6);
    CHECK(s.log[1].resolution == "satisfied identically");
  }
}

TEST_CASE("mirror branch: sqrt(2) terms flip sign") {
  const auto sys = hhz();
  const auto sols = expand(sys, case2(sys), 10);
  const auto& b1 = by_lead(sols, q("25/16*sqrt(2)"));
  const auto& b2 = by_lead(sols, q("-25/16*sqrt(2)"));
  for (int v = 0; v < 2; ++v)
    for (int p = b1.start[v]; p <= b1.start[v] + 10; ++p) {
      CAPTURE(v);
      CAPTURE(p);
      CHECK(b2.coefficient(v, p) == conj(b1.coefficient(v, p)));
    }
}

TEST_CASE("SYMBOLIC and EVALUATED agree through order 20") {
  const auto sys = hhz();
  const auto cand = case2(sys);
  const auto sym = expand(sys, cand, 20);
  for (const auto& params : {std::map<std::string, QuadExt>{{"cz1", q("1/3")}, {"cy4", q("-2/7")}},
                             std::map<std::string, QuadExt>{{"cz1", q("3205/3981312*sqrt(2)")},
                                                            {"cy4", q("-858455/12039487488")}}}) {
    const auto ev = expand(sys, cand, 20, SeriesMode::EVALUATED, params);
    REQUIRE(ev.size() == sym.size());
    int compared = 0;
    for (std::size_t b = 0; b < sym.size(); ++b) {
      CHECK(ev[b].branch_id == sym[b].branch_id);
      CHECK(ev[b].mode == SeriesMode::EVALUATED);
      if (ev[b].status != BranchStatus::OK) {
        // sqrt(2) values on a sqrt(-4862) branch need a field tower.
        CHECK(ev[b].status == BranchStatus::UNRESOLVED);
        CHECK_THROWS_AS(evaluate_coefficients(sym[b], params, 18), FieldTowerError);
        continue;
      }
      ++compared;
      const auto values = evaluate_coefficients(sym[b], params, 18);
      for (const auto& [key, value] : values) {
        CAPTURE(key.first);
        CAPTURE(key.second);
        CHECK(ev[b].coefficient(key.first, key.second) == ParamPoly(value));
      }
      CHECK(values.size() == 2 * 18 + 5 + 1);
    }
    CHECK(compared >= 2);
  }
}

TEST_CASE("step soundness: Q(j) c_j = R_j by re-substitution") {
  const auto sys = hhz();
  const auto cand = case2(sys);
  const std::map<std::string, QuadExt> params{{"cz1", q("2/5")}, {"cy4", q("1/7")}};
  const auto sols = expand(sys, cand, 14, SeriesMode::EVALUATED, params);
  const RMatrix Q = resonance_matrix(leading_terms(sys, cand), cand);
  for (const auto& s : sols) {
    const QuadExt a1 = s.coefficient(0, -3).as_constant();
    for (int j = 1; j <= 14; ++j) {
      std::vector<TruncatedSeries> prior;
      for (int v = 0; v < 2; ++v) prior.push_back(truncated(s, v, j - 1, params, true));
      const auto Qj = evaluate_matrix(Q, QuadExt(j));
      for (int i = 0; i < 2; ++i) {
        const int m = static_cast<int>(cand.equation_orders[static_cast<std::size_t>(i)].numerator().get_si());
        ParamPoly lhs = substitute(sys.equations[static_cast<std::size_t>(i)], prior).at(m + j);
        for (int k = 0; k < 2; ++k)
          lhs += Qj[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].substitute(0, a1) *
                 s.coefficient(k, s.start[k] + j);
        CAPTURE(j);
        CHECK(lhs.is_zero());
      }
    }
  }
}

TEST_CASE("compatibility system at j = 4 reproduces the published constraint pair") {
  for (const char* lam : {"1/9", "1", "-3/4", "5/2"}) {
    CAPTURE(lam);
    const QuadExt lambda = q(lam);
    const auto sys = hhz(lambda);
    const auto steps = compatibility_system(sys, case2(sys), 4);
    REQUIRE(steps.size() == 1);
    const auto& st = steps[0];
    ParamId a1 = -1;
    for (const auto& row : st.Q)
      for (const auto& e : row)
        for (ParamId id : e.variables())
          if (st.namer(id) == "a1") a1 = id;
    for (const auto& e : st.rhs)
      for (ParamId id : e.variables())
        if (st.namer(id) == "a1") a1 = id;
    REQUIRE(a1 >= 0);
    // No cz1 column.
    CHECK(st.Q[0][0].is_zero());
    CHECK(st.Q[1][0].is_zero());
    const ParamId cy2 = 1000;
    const ParamPoly Y = ParamPoly::variable(cy2);
    auto pw = [&](int e) { return ParamPoly::variable(a1, e); };
    const ParamPoly l(lambda);
    const ParamPoly row1 = pw(6) * ParamPoly(557056) + pw(4) * (l * ParamPoly(15552000) - ParamPoly(4860000)) +
                           pw(2) * (Y * ParamPoly(864000000) + l * l * ParamPoly(108000000) -
                                    l * ParamPoly(67500000) + ParamPoly(10546875));
    const ParamPoly row2 = pw(4) * ParamPoly(818176) + pw(2) * (l * ParamPoly(15660000) - ParamPoly(4893750)) -
                           Y * ParamPoly(810000000) - ParamPoly(6328125);
    for (int i = 0; i < 2; ++i) {
      // Row i of Q(4) (c_4 = (cz1, cy2)) minus the right side.
      const ParamPoly ours = st.Q[static_cast<std::size_t>(i)][1] * Y - st.rhs[static_cast<std::size_t>(i)];
      const ParamPoly& target = i == 0 ? row1 : row2;
      const ParamPoly target_y = i == 0 ? pw(2) * ParamPoly(864000000) : ParamPoly(-810000000);
      REQUIRE(st.Q[static_cast<std::size_t>(i)][1].is_single_term());
      const ParamPoly scale = target_y.divided_by_term(st.Q[static_cast<std::size_t>(i)][1]);
      REQUIRE(scale.is_single_term());
      CHECK(ours * scale == target);
    }
  }
}

TEST_CASE("compatibility system at j = 6 is one linear equation") {
  const auto sys = hhz();
  const auto steps = compatibility_system(sys, case2(sys), 6);
  CHECK(steps.size() == 4);
  for (const auto& st : steps) {
    for (const auto& c : st.constraints) CHECK(c.is_zero());
    bool nonzero = false;
    for (const auto& row : st.Q)
      for (const auto& e : row) nonzero = nonzero || !e.is_zero();
    CHECK(nonzero);
    CHECK((st.Q[0][0] * st.Q[1][1] - st.Q[0][1] * st.Q[1][0]).is_zero());
  }
}

TEST_CASE("compatibility system requires a resonance") {
  const auto sys = hhz();
  CHECK_THROWS_AS(compatibility_system(sys, case2(sys), 2), std::invalid_argument);
}

TEST_CASE("evaluate_coefficients") {
  const auto sys = hhz();
  const auto sols = expand(sys, case2(sys), 8);
  const auto& b1 = by_lead(sols, q("25/16*sqrt(2)"));
  CHECK_THROWS_AS(evaluate_coefficients(b1, {}, 5), std::invalid_argument);
  const auto v = evaluate_coefficients(b1, closed_form_parameters(1), 5);
  CHECK(v.at({"y", 4}) == q("-858455/12039487488"));
  CHECK(v.at({"z", 1}) == q("3205/3981312*sqrt(2)"));
  CHECK(v.at({"y", -2}) == q("-15/8"));
  CHECK(v.count({"y", 6}) == 0);
  // Without free parameters evaluation is the identity.
  const auto ev = expand(sys, case2(sys), 8, SeriesMode::EVALUATED, {{"cz1", 0}, {"cy4", 0}});
  const auto& e1 = by_lead(ev, q("25/16*sqrt(2)"));
  const auto w = evaluate_coefficients(e1, {}, 5);
  for (const auto& [key, value] : w) CHECK(e1.coefficient(key.first, key.second) == ParamPoly(value));
}

TEST_CASE("EVALUATED mode needs every registry parameter") {
  const auto sys = hhz();
  CHECK_THROWS_AS(expand(sys, case2(sys), 8, SeriesMode::EVALUATED, {{"cz1", 0}}), std::invalid_argument);
  CHECK_NOTHROW(expand(sys, case2(sys), 6, SeriesMode::EVALUATED, {{"cz1", 0}, {"cy4", 0}}));
}

TEST_CASE("inconsistent resonance gives LOG_REQUIRED") {
  const auto sys = parse_system("vars u; u'' = 6*u^2 + u';");
  const auto sols = expand(sys, find_balances(sys)[0], 8);
  REQUIRE(sols.size() == 1);
  CHECK(sols[0].status == BranchStatus::LOG_REQUIRED);
  CHECK(sols[0].order == 6);
  CHECK(std::string(to_string(BranchStatus::LOG_REQUIRED)) == "LOG_REQUIRED");
}

TEST_CASE("integrable Case 1 at C = -1 expands without constraints failing") {
  const auto sys = henon_heiles(1, -1);
  for (const auto& c : find_balances(sys)) {
    const auto sols = expand(sys, c, 8);
    for (const auto& s : sols) {
      CHECK(s.status == BranchStatus::OK);
      CHECK(s.registry.size() == 3);
      CHECK(residual_order(sys, s, 8).consistent());
    }
  }
}

TEST_CASE("parameter names") {
  CHECK(series_param_name("z", 1) == "cz1");
  CHECK(series_param_name("y", -1) == "cym1");
}
