#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "painleve/report.hpp"
#include "painleve/resonance.hpp"

using namespace painleve;

namespace {

QuadExt q(const char* s) { return QuadExt::parse(s); }

std::vector<QuadExt> exact_roots(const ResonanceReport& rep) {
  std::vector<QuadExt> out;
  for (const auto& root : rep.roots) {
    REQUIRE(root.exact.has_value());
    for (int m = 0; m < root.multiplicity; ++m) out.push_back(*root.exact);
  }
  std::sort(out.begin(), out.end(), QuadExt::canonical_less);
  return out;
}

std::vector<QuadExt> sorted(std::vector<QuadExt> v) {
  std::sort(v.begin(), v.end(), QuadExt::canonical_less);
  return v;
}

const BalanceCandidate& pick(const std::vector<BalanceCandidate>& cs, const char* e0, const char* e1) {
  for (const auto& c : cs)
    if (c.exponents[0] == BigRational::parse(e0) && c.exponents[1] == BigRational::parse(e1)) return c;
  FAIL("candidate not found");
  throw std::logic_error("unreachable");
}

// Case 1 closed form {-1, 6, 5/2 +- sqrt(1 - 24(1 + C))/2}.
std::vector<QuadExt> case1_roots(const QuadExt& C) {
  const QuadExt s = rational_sqrt((QuadExt(1) - QuadExt(24) * (QuadExt(1) + C)).rational_part());
  const QuadExt half = q("1/2");
  return sorted({QuadExt(-1), QuadExt(6), q("5/2") + half * s, q("5/2") - half * s});
}

}  // namespace

TEST_CASE("squared system, C = -16/5") {
  const auto sys = square_substitute(henon_heiles(q("1/9"), q("-16/5")), "x");
  const auto cs = find_balances(sys);
  const auto case1 = analyze_resonances(sys, pick(cs, "-4", "-2"));
  CHECK(exact_roots(case1) == sorted({QuadExt(-1), QuadExt(6), q("5/2 + 1/2*sqrt(269/5)"), q("5/2 - 1/2*sqrt(269/5)")}));
  CHECK(case1.determinant.degree() == 4);
  CHECK(case1.has_minus_one);
  const auto case2 = analyze_resonances(sys, pick(cs, "-3", "-2"));
  CHECK(exact_roots(case2) == sorted({QuadExt(-1), QuadExt(0), QuadExt(4), QuadExt(6)}));
  CHECK(case2.all_integer());
  CHECK(case2.max_positive_integer() == 6);
  CHECK_FALSE(case1.all_rational());
}

TEST_CASE("root classification") {
  const auto sys = square_substitute(henon_heiles(q("1/9"), q("-16/5")), "x");
  const auto rep = analyze_resonances(sys, find_balances(sys)[0]);
  int irr = 0;
  for (const auto& root : rep.roots)
    if (root.kind == RootKind::Irrational) ++irr;
  CHECK(irr == 2);
}

TEST_CASE("Case 1 at C = -1 and Case 2 at C = -6") {
  const auto a = henon_heiles(1, -1);
  CHECK(exact_roots(analyze_resonances(a, pick(find_balances(a), "-2", "-2"))) ==
        sorted({QuadExt(-1), QuadExt(2), QuadExt(3), QuadExt(6)}));
  const auto b = henon_heiles(1, -6);
  const auto roots = exact_roots(analyze_resonances(b, pick(find_balances(b), "-1", "-2")));
  CHECK(roots.size() == 4);
  for (const QuadExt& v : {QuadExt(-1), QuadExt(0), QuadExt(6)})
    CHECK(std::count(roots.begin(), roots.end(), v) == 1);
  CHECK((std::count(roots.begin(), roots.end(), QuadExt(3)) + std::count(roots.begin(), roots.end(), QuadExt(-3))) ==
        1);
}

TEST_CASE("Case 1 closed form, Vieta and det Q(-1) over random C") {
  std::mt19937_64 rng(2024);
  int done = 0;
  while (done < 20) {
    // C in [-20, -1/10]
    const long den = static_cast<long>(rng() % 20) + 1;
    const long num = -static_cast<long>(rng() % static_cast<unsigned long>(20 * den)) - 1;
    const QuadExt C(BigRational(num, den));
    if (!(C.rational_part() >= BigRational(-20)) || !(C.rational_part() <= BigRational(-1, 10))) continue;
    if (C == QuadExt(-2)) continue;
    CAPTURE(C.str());
    const auto sys = henon_heiles(1, C);
    const auto cs = find_balances(sys);
    for (const auto& c : cs) {
      const auto rep = analyze_resonances(sys, c);
      // det Q(-1) = 0
      const auto at_minus_one = evaluate_matrix(rep.matrix, QuadExt(-1));
      const auto det1 = determinant(rep.matrix).eval(ParamPoly(-1));
      CHECK(det1.is_zero());
      CHECK(at_minus_one.size() == 2);
      CHECK(rep.has_minus_one);
      REQUIRE(rep.reduced.has_value());
      const QPoly& p = *rep.reduced;
      // Vieta: sum of roots = -c_{n-1}/c_n
      int count = 0;
      BigComplex sum(decimal_to_bits(60));
      bool all_exact = true;
      QuadExt exact_sum;
      for (const auto& root : rep.roots) {
        count += root.multiplicity;
        for (int m = 0; m < root.multiplicity; ++m) {
          sum = sum + root.approx;
          if (root.exact)
            exact_sum += *root.exact;
          else
            all_exact = false;
        }
      }
      CHECK(count == p.degree());
      const QuadExt expect = -p.coeff(p.degree() - 1) / p.lead();
      if (all_exact) CHECK(exact_sum == expect);
      CHECK(abs(sum.re - to_bigfloat(expect, decimal_to_bits(60))) < BigFloat::parse("1e-40", decimal_to_bits(60)));
      if (c.exponents[0] == BigRational(-2) && c.exponents[1] == BigRational(-2))
        CHECK(exact_roots(rep) == case1_roots(C));
    }
    ++done;
  }
}

TEST_CASE("u'' = 0 with u ~ t gives {-1, 0}") {
  const auto sys = parse_system("vars u; u'' = 0;");
  BalanceCandidate c;
  c.exponents = {BigRational(1)};
  c.leading = {std::nullopt};
  c.leading_terms = {{sys.equations[0].terms().begin()->first}};
  const auto rep = analyze_resonances(sys, c);
  CHECK(exact_roots(rep) == sorted({QuadExt(-1), QuadExt(0)}));
}

TEST_CASE("zero determinant is degenerate") {
  CHECK_THROWS_AS(resonance_roots(QPoly()), std::invalid_argument);
}

TEST_CASE("integrability triage") {
  auto verdict = [](const PolyODESystem& s) { return painleve_test(s).verdict; };
  const auto pass1 = verdict(henon_heiles(1, -1));
  CHECK(pass1.status == VerdictStatus::PASSES);
  CHECK(pass1.conclusive);
  CHECK(verdict(henon_heiles(1, -6)).status == VerdictStatus::PASSES);
  CHECK(verdict(henon_heiles(q("1/2"), -6)).status == VerdictStatus::PASSES);
  const auto weak = verdict(henon_heiles(q("1/16"), -16));
  CHECK(weak.status == VerdictStatus::WEAK);
  const auto fails = verdict(henon_heiles(q("1/9"), q("-16/5")));
  CHECK(fails.status == VerdictStatus::FAILS);
  REQUIRE_FALSE(fails.reasons.empty());
  CHECK(fails.reasons[0].find("irrational resonance") != std::string::npos);
  CHECK(verdict(henon_heiles(1, 1)).status == VerdictStatus::FAILS);
  CHECK(verdict(parse_system("vars u; u'' = 6*u^2;")).status == VerdictStatus::PASSES);
}

TEST_CASE("compatibility at the resonances") {
  const auto a = painleve_test(henon_heiles(1, -1));
  for (auto c : a.compatibility) CHECK(c == Compatibility::Compatible);
  const auto sq = painleve_test(square_substitute(henon_heiles(q("1/9"), q("-16/5")), "x"));
  REQUIRE(sq.compatibility.size() == 2);
  CHECK(sq.compatibility[0] == Compatibility::NotChecked);
  CHECK(sq.compatibility[1] == Compatibility::Compatible);
}

TEST_CASE("token strings") {
  CHECK(std::string(to_string(VerdictStatus::PASSES)) == "PASSES");
  CHECK(std::string(to_string(VerdictStatus::WEAK)) == "WEAK");
  CHECK(std::string(to_string(VerdictStatus::FAILS)) == "FAILS");
  CHECK(std::string(to_string(RootKind::Integer)) == "INTEGER");
  CHECK(std::string(to_string(RootKind::RationalNonInteger)) == "RATIONAL_NONINT");
  CHECK(std::string(to_string(RootKind::Irrational)) == "IRRATIONAL");
  CHECK(std::string(to_string(RootKind::Complex)) == "COMPLEX");
}
