#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "painleve/balance.hpp"

using namespace painleve;

namespace {

QuadExt q(const char* s) { return QuadExt::parse(s); }
BigRational r(const char* s) { return BigRational::parse(s); }

std::vector<BigRational> ex(const char* a, const char* b) { return {r(a), r(b)}; }

const BalanceCandidate* with_exponents(const std::vector<BalanceCandidate>& cs, const std::vector<BigRational>& e,
                                       std::optional<QuadExt> lead0 = std::nullopt) {
  for (const auto& c : cs)
    if (c.exponents == e && (!lead0 || (c.leading[0] && *c.leading[0] == *lead0))) return &c;
  return nullptr;
}

// Leading-order value of each simplified equation under x_v = a_v t^alpha_v.
std::vector<QuadExt> leading_order_residual(const PolyODESystem& simplified, const BalanceCandidate& c,
                                            const QuadExt& arbitrary) {
  std::vector<QuadExt> out;
  for (const auto& eq : simplified.equations) {
    QuadExt sum;
    for (const auto& [mono, coeff] : eq.terms()) {
      QuadExt t = coeff;
      for (const auto& [jv, e] : mono) {
        const BigRational& a = c.exponents[static_cast<std::size_t>(jv.var)];
        BigRational ff(1);
        for (int k = 0; k < jv.order; ++k) ff *= a - BigRational(k);
        const QuadExt lead = c.leading[static_cast<std::size_t>(jv.var)].value_or(arbitrary);
        t *= (lead * QuadExt(ff)).pow(e);
      }
      sum += t;
    }
    out.push_back(sum);
  }
  return out;
}

}  // namespace

TEST_CASE("original Henon-Heiles: Case 1 only") {
  const auto cs = find_balances(henon_heiles(1, 1));
  REQUIRE(cs.size() == 2);
  for (const auto& c : cs) {
    CHECK(c.exponents == ex("-2", "-2"));
    REQUIRE(c.leading[0].has_value());
    CHECK(*c.leading[0] * *c.leading[0] == QuadExt(27));
    CHECK(*c.leading[1] == QuadExt(-3));
    CHECK_FALSE(c.unresolved);
    CHECK(c.integer_exponents());
  }
  CHECK(*cs[0].leading[0] == -*cs[1].leading[0]);
}

TEST_CASE("Case 1 formula a1^2 = 9(C + 2), a2 = -3") {
  for (const char* C : {"1", "-1", "-6", "-16/5", "-16", "7/3"}) {
    CAPTURE(C);
    const auto cs = find_balances(henon_heiles(1, q(C)));
    int found = 0;
    for (const auto& c : cs) {
      if (c.exponents != ex("-2", "-2")) continue;
      ++found;
      REQUIRE(c.leading[0].has_value());
      CHECK(*c.leading[0] * *c.leading[0] == QuadExt(9) * (q(C) + QuadExt(2)));
      CHECK(*c.leading[1] == QuadExt(-3));
    }
    CHECK(found == 2);
  }
}

TEST_CASE("Case 1 degenerates at C = -2") {
  // a1^2 = 9(C + 2) = 0: the x leading coefficient vanishes, so no Case-1 balance.
  const auto cs = find_balances(henon_heiles(1, -2));
  CHECK(with_exponents(cs, ex("-2", "-2")) == nullptr);
}

TEST_CASE("Case 2: alpha(alpha - 1) = -2 a2 with a2 = 6/C") {
  struct Row {
    const char* C;
    const char* alpha;
  };
  for (const Row row : {Row{"-6", "-1"}, Row{"-16", "-1/2"}, Row{"-16/5", "-3/2"}}) {
    CAPTURE(row.C);
    const QuadExt C = q(row.C);
    const auto cs = find_balances(henon_heiles(q("1/9"), C));
    const BalanceCandidate* c = with_exponents(cs, {r(row.alpha), r("-2")});
    REQUIRE(c != nullptr);
    CHECK_FALSE(c->leading[0].has_value());
    const QuadExt a2 = *c->leading[1];
    CHECK(a2 == QuadExt(6) / C);
    const QuadExt alpha(c->exponents[0]);
    CHECK(alpha * (alpha - QuadExt(1)) == QuadExt(-2) * a2);
    // alpha = (1 - sqrt(1 - 48/C))/2
    const QuadExt root = rational_sqrt((QuadExt(1) - QuadExt(48) / C).rational_part());
    CHECK(alpha == (QuadExt(1) - root) / QuadExt(2));
  }
  CHECK(*with_exponents(find_balances(henon_heiles(1, q("-16/5"))), ex("-3/2", "-2"))->leading[1] == q("-15/8"));
}

TEST_CASE("squared system candidates") {
  const auto sys = square_substitute(henon_heiles(q("1/9"), q("-16/5")), "x");
  const auto cs = find_balances(sys);
  REQUIRE(cs.size() == 2);
  CHECK(cs[0].exponents == ex("-4", "-2"));
  CHECK(*cs[0].leading[0] == q("-54/5"));
  CHECK(*cs[0].leading[1] == QuadExt(-3));
  CHECK(cs[1].exponents == ex("-3", "-2"));
  CHECK_FALSE(cs[1].leading[0].has_value());
  CHECK(*cs[1].leading[1] == q("-15/8"));
}

TEST_CASE("leading_terms gives the simplified systems") {
  const auto sys = square_substitute(henon_heiles(q("1/9"), q("-16/5")), "x");
  const auto cs = find_balances(sys);
  REQUIRE(cs.size() == 2);
  CHECK(leading_terms(sys, cs[0]) ==
        parse_system("vars z, y; z*z'' = 1/2*z'^2 - 4*z^2*y; y'' = -z - 16/5*y^2;"));
  CHECK(leading_terms(sys, cs[1]) == parse_system("vars z, y; z*z'' = 1/2*z'^2 - 4*z^2*y; y'' = -16/5*y^2;"));
  CHECK(cs[0].equation_orders == ex("-10", "-4"));
  CHECK(cs[1].equation_orders == ex("-8", "-4"));
}

TEST_CASE("leading_terms keeps a single-term equation") {
  const auto sys = parse_system("vars u; u'' = 0;");
  CHECK(find_balances(sys).empty());
  BalanceCandidate c;
  c.exponents = {BigRational(1)};
  c.leading = {std::nullopt};
  c.leading_terms = {{sys.equations[0].terms().begin()->first}};
  CHECK(leading_terms(sys, c) == sys);
}

TEST_CASE("balance consistency: leading order cancels") {
  const std::vector<PolyODESystem> systems{
      henon_heiles(1, 1),
      henon_heiles(1, -1),
      henon_heiles(q("1/2"), -6),
      henon_heiles(q("1/16"), -16),
      henon_heiles(q("1/9"), q("-16/5")),
      square_substitute(henon_heiles(q("1/9"), q("-16/5")), "x"),
      square_substitute(henon_heiles(q("1/3"), -6), "x"),
      parse_system("vars u; u'' = 6*u^2;"),
      parse_system("vars u; u'' = 2*u^3 + u;"),
      parse_system("vars x; x''' = -x^2*x' + x;"),
  };
  int checked = 0;
  for (const auto& sys : systems) {
    CAPTURE(sys.str());
    for (const auto& c : find_balances(sys)) {
      if (c.unresolved) continue;
      const auto simplified = leading_terms(sys, c);
      for (const QuadExt& arb : {q("7/3"), q("-2")})
        for (const auto& v : leading_order_residual(simplified, c, arb)) CHECK(v.is_zero());
      for (const auto& eq : simplified.equations) CHECK(eq.terms().size() >= 2);
      ++checked;
    }
  }
  CHECK(checked >= 15);
}

TEST_CASE("parallel grid search equals the serial one") {
  for (const auto& sys : {henon_heiles(1, 1), henon_heiles(q("1/9"), q("-16/5")), henon_heiles(1, -6),
                          square_substitute(henon_heiles(q("1/9"), q("-16/5")), "x")}) {
    BalanceOptions opts;
    CHECK(find_balances(sys, opts) == find_balances_serial(sys, opts));
    opts.denominator_bound = 1;
    opts.lo = BigRational(-8);
    CHECK(find_balances(sys, opts) == find_balances_serial(sys, opts));
  }
}

TEST_CASE("candidates are sorted by exponent tuple") {
  const auto cs = find_balances(henon_heiles(1, -6));
  for (std::size_t i = 1; i < cs.size(); ++i) CHECK_FALSE(cs[i].exponents < cs[i - 1].exponents);
}

TEST_CASE("complex Case 2 exponents are diagnosed, not enumerated") {
  const auto sys = henon_heiles(1, 1);
  const auto notes = exponent_diagnostics(sys);
  REQUIRE(notes.size() == 2);
  for (const auto& n : notes) {
    CHECK(n.var == 0);
    CHECK(n.root.kind == RootKind::Complex);
  }
}

TEST_CASE("denominator bound is validated") {
  BalanceOptions opts;
  opts.denominator_bound = 3;
  CHECK_THROWS_AS(find_balances(henon_heiles(1, 1), opts), std::invalid_argument);
}

TEST_CASE("falling factorial") {
  CHECK(falling_factorial(r("-3/2"), 2) == r("15/4"));
  CHECK(falling_factorial(r("-2"), 0) == BigRational(1));
  CHECK(falling_factorial(r("3"), 4) == BigRational(0));
}
