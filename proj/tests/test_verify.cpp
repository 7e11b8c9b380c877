#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "painleve/verify.hpp"

using namespace painleve;

namespace {

QuadExt q(const char* s) { return QuadExt::parse(s); }

PolyODESystem hhz() { return square_substitute(henon_heiles(q("1/9"), q("-16/5")), "x"); }

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

const QuadExt kLead = QuadExt::parse("25/16*sqrt(2)");
const std::map<std::string, QuadExt> kZero{{"cz1", 0}, {"cy4", 0}};

bool close(const BigFloat& got, const QuadExt& want, int digits) {
  const mpfr_prec_t bits = got.precision();
  const BigFloat w = to_bigfloat(want, bits);
  return abs(got - w) < abs(w) * BigFloat::pow10(-digits, bits);
}

}  // namespace

TEST_CASE("closed-form Laurent coefficients") {
  const auto t = closed_form_laurent(ClosedFormBranch{1, 128}, 50);
  CHECK(t.y_start == -2);
  CHECK(t.z_start == -3);
  REQUIRE(t.y.size() == 53);
  REQUIRE(t.z.size() == 54);
  CHECK(close(t.y[0], q("-15/8"), 120));
  CHECK(close(t.y[4], q("-1819/663552"), 120));
  CHECK(close(t.z[3], q("1625/82944"), 120));
  CHECK(close(t.z[0], kLead, 120));
  const auto m = closed_form_laurent(ClosedFormBranch{-1, 128}, 10);
  CHECK(close(m.z[0], -kLead, 120));
  CHECK(close(m.y[1], q("-5/32*sqrt(2)"), 120));
}

TEST_CASE("closed-form precision precondition") {
  CHECK_THROWS_AS(closed_form_laurent(ClosedFormBranch{1, 60}, 50), std::invalid_argument);
  CHECK_THROWS_AS(closed_form_laurent(ClosedFormBranch{0, 128}, 5), std::invalid_argument);
}

TEST_CASE("closed-form match on both branches") {
  const auto sys = hhz();
  const auto cand = case2(sys);
  for (int sign : {1, -1}) {
    CAPTURE(sign);
    const auto params = closed_form_parameters(sign);
    const auto sols = expand(sys, cand, 53, SeriesMode::EVALUATED, params);
    const auto& b = by_lead(sols, sign > 0 ? kLead : -kLead);
    const auto cmp = compare_closed_form(b, params, ClosedFormBranch{sign, 128}, 50);
    CHECK(cmp.powers_compared == 107);
    CHECK(cmp.within(BigFloat::parse("1e-80", decimal_to_bits(128))));
    // Generic parameters do not reproduce the closed form.
    const auto generic = expand(sys, cand, 53, SeriesMode::EVALUATED, kZero);
    CHECK_FALSE(compare_closed_form(by_lead(generic, sign > 0 ? kLead : -kLead), kZero, ClosedFormBranch{sign, 128}, 50)
                    .within(BigFloat::parse("1e-10", decimal_to_bits(128))));
  }
  CHECK(closed_form_parameters(1).at("cz1") == q("3205/3981312*sqrt(2)"));
  CHECK(closed_form_parameters(-1).at("cz1") == q("-3205/3981312*sqrt(2)"));
  CHECK(closed_form_parameters(-1).at("cy4") == q("-858455/12039487488"));
}

TEST_CASE("residual order grows linearly with N") {
  const auto sys = hhz();
  const auto sols = expand(sys, case2(sys), 50, SeriesMode::EVALUATED, kZero);
  const auto& b = by_lead(sols, kLead);
  for (int N : {10, 25, 50}) {
    CAPTURE(N);
    const auto prof = residual_order(sys, b, N, kZero);
    CHECK(prof.exact);
    CHECK(prof.consistent());
    REQUIRE(prof.equations.size() == 2);
    CHECK(prof.equations[0].matched_power == -8);
    CHECK(prof.equations[1].matched_power == -4);
    CHECK(prof.equations[0].lowest_nonzero == -8 + N + 1);
    CHECK(prof.equations[1].lowest_nonzero == -4 + N + 1);
  }
  const auto ten = residual_order(sys, b, 10, kZero);
  CHECK(*ten.equations[0].lowest_nonzero >= 3);
  CHECK(*ten.equations[1].lowest_nonzero >= 7);
}

TEST_CASE("symbolic residual window") {
  const auto sys = hhz();
  const auto sols = expand(sys, case2(sys), 12);
  const auto prof = residual_order(sys, by_lead(sols, kLead), 12);
  CHECK_FALSE(prof.exact);
  CHECK(prof.consistent());
  for (const auto& e : prof.equations) CHECK_FALSE(e.lowest_nonzero.has_value());
}

TEST_CASE("residual on the original system, Case 1") {
  const auto sys = henon_heiles(1, 1);
  for (const auto& c : find_balances(sys)) {
    for (const auto& s : expand(sys, c, 6)) {
      if (s.status != BranchStatus::OK) continue;
      CHECK(residual_order(sys, s, 6).consistent());
    }
  }
}

TEST_CASE("residual of a polynomial solution is identically zero") {
  const auto sys = parse_system("vars u; u'' = 0;");
  LaurentSolution s;
  s.vars = {"u"};
  s.start = {0};
  s.coeffs = {{ParamPoly(q("3/2")), ParamPoly(-5)}};
  s.order = 1;
  for (int N : {0, 1}) {
    const auto prof = residual_order(sys, s, N);
    CHECK(prof.exact);
    CHECK_FALSE(prof.equations[0].lowest_nonzero.has_value());
  }
}

TEST_CASE("energy is constant through the window") {
  const auto sys = hhz();
  const auto sols = expand(sys, case2(sys), 30, SeriesMode::EVALUATED, kZero);
  const auto& b1 = by_lead(sols, kLead);
  const auto& b2 = by_lead(sols, -kLead);
  for (int N : {10, 20, 30}) {
    CAPTURE(N);
    const auto e1 = energy_series(sys, b1, kZero, N);
    CHECK(e1.nonconstant.vanishes());
    CHECK(e1.nonconstant.window_end == N - 5);
    CHECK(e1.energy == ParamPoly(q("657805/2293235712")));
    CHECK(energy_series(sys, b2, kZero, N).energy == e1.energy);
  }
}

TEST_CASE("symbolic energy") {
  const auto sys = hhz();
  const auto sols = expand(sys, case2(sys), 12);
  for (int sign : {1, -1}) {
    const auto& b = by_lead(sols, sign > 0 ? kLead : -kLead);
    const auto e = energy_series(sys, b, {}, 12);
    CHECK(e.nonconstant.vanishes());
    const ParamPoly cz1 = ParamPoly::variable(*b.param_id("cz1")), cy4 = ParamPoly::variable(*b.param_id("cy4"));
    CHECK(e.energy == ParamPoly(q("657805/2293235712")) + cz1 * (QuadExt(sign) * q("63/64*sqrt(2)")) +
                          cy4 * q("105/4"));
  }
}

TEST_CASE("energy needs a nonzero z leading coefficient") {
  const auto sys = hhz();
  LaurentSolution s;
  s.vars = {"z", "y"};
  s.start = {0, 0};
  s.coeffs = {{ParamPoly(0)}, {ParamPoly(q("5/16"))}};
  CHECK_THROWS_AS(energy_series(sys, s, {}, 0), std::domain_error);
  CHECK_THROWS_AS(energy_series(parse_system("vars u; u'' = 0;"), s, {}, 0), std::invalid_argument);
}

TEST_CASE("squared invariant and trajectory relation") {
  const auto sys = hhz();
  const auto cand = case2(sys);
  for (int sign : {1, -1}) {
    CAPTURE(sign);
    const auto p = closed_form_parameters(sign);
    const auto exact_sols = expand(sys, cand, 20, SeriesMode::EVALUATED, p);
    const auto& exact = by_lead(exact_sols, sign > 0 ? kLead : -kLead);
    const auto inv = first_order_invariant_check(sys, exact, p, 20);
    CHECK(inv.vanishes());
    CHECK(inv.window_end > 0);
    const auto traj = trajectory_relation_check(sys, exact, p, 20);
    CHECK(traj.vanishes());
    CHECK(traj.window_end > 0);

    const auto generic_sols = expand(sys, cand, 20, SeriesMode::EVALUATED, kZero);
    const auto& generic = by_lead(generic_sols, sign > 0 ? kLead : -kLead);
    const auto ginv = first_order_invariant_check(sys, generic, kZero, 20);
    CHECK(ginv.lowest_nonzero == -6);
    CHECK(ginv.coefficient == "-400625/7077888");
    const auto gtraj = trajectory_relation_check(sys, generic, kZero, 20);
    CHECK(gtraj.lowest_nonzero == -2);
    CHECK(gtraj.coefficient == "-80125/15925248");
  }
}

TEST_CASE("relations need the lambda = 1/9 system") {
  const auto sys = square_substitute(henon_heiles(1, q("-16/5")), "x");
  const auto sols = expand(sys, case2(sys), 8);
  CHECK_THROWS_AS(first_order_invariant_check(sys, sols[0], kZero, 8), std::invalid_argument);
  CHECK_FALSE(closed_form_applicable(sys));
  CHECK(closed_form_applicable(hhz()));
  CHECK_FALSE(closed_form_applicable(henon_heiles(q("1/9"), q("-16/5"))));
}

TEST_CASE("leading-order hand check of the relations") {
  // (25 sqrt(2)/16)^2 = -(20/27)(-15/8)^3
  CHECK(kLead * kLead == q("625/128"));
  CHECK(QuadExt(-1) * q("20/27") * q("-15/8").pow(3) == q("625/128"));
  // y = a t^-2: the t^-6 bracket 4a^2 + 32/15 a^3 vanishes, leaving 64/135 a^5 at t^-10.
  const QuadExt a = q("-15/8");
  CHECK(QuadExt(4) * a * a + q("32/15") * a.pow(3) == QuadExt(0));
  TruncatedSeries y;
  y.valuation = -2;
  y.coeffs = {ParamPoly(a)};
  const auto inv = first_order_invariant(y);
  CHECK(inv.at(-12).is_zero());
  CHECK(inv.at(-10) == ParamPoly(q("64/135") * a.pow(5)));
}

TEST_CASE("relations vanish on y = 0") {
  const TruncatedSeries zero = TruncatedSeries::constant(ParamPoly(0));
  CHECK_FALSE(first_order_invariant(zero).lowest_nonzero().has_value());
  CHECK_FALSE(trajectory_relation(zero, zero).lowest_nonzero().has_value());
}

TEST_CASE("truncated series arithmetic") {
  TruncatedSeries a;
  a.valuation = -1;
  a.coeffs = {ParamPoly(1), ParamPoly(2)};
  const auto b = a * a;
  CHECK(b.valuation == -2);
  CHECK(b.at(-2) == ParamPoly(1));
  CHECK(b.at(-1) == ParamPoly(4));
  CHECK(b.at(0) == ParamPoly(4));
  CHECK(a.derivative().at(-2) == ParamPoly(-1));
  a.precision = 3;
  const auto inv = TruncatedSeries::constant(ParamPoly(1)) / a;
  CHECK(inv.at(1) == ParamPoly(1));
  CHECK(inv.at(2) == ParamPoly(-2));
  CHECK(inv.precision == 5);
  TruncatedSeries zero;
  zero.precision = 4;
  CHECK_THROWS_AS(a / zero, std::domain_error);
}
