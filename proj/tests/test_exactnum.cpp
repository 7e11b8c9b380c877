#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "painleve/exactnum.hpp"
#include "painleve/parampoly.hpp"
#include "painleve/upoly.hpp"

using namespace painleve;

namespace {

BigInt random_big(std::mt19937_64& rng, int bits) {
  BigInt v = 0;
  for (int i = 0; i < bits; i += 64) {
    v <<= 64;
    v += static_cast<unsigned long>(rng());
  }
  if (bits % 64) v >>= (64 - bits % 64);
  return v;
}

BigRational random_rational(std::mt19937_64& rng, int bits) {
  BigInt n = random_big(rng, 1 + static_cast<int>(rng() % bits));
  BigInt d = random_big(rng, 1 + static_cast<int>(rng() % bits)) + 1;
  if (rng() & 1) n = -n;
  return BigRational(n, d);
}

QuadExt random_quad(std::mt19937_64& rng, long q) {
  return QuadExt::make(random_rational(rng, 40), random_rational(rng, 40), BigRational(q));
}

}  // namespace

TEST_CASE("BigRational parsing and printing") {
  CHECK(BigRational::parse("-1819/663552").str() == "-1819/663552");
  CHECK(BigRational::parse("0.4") == BigRational(2, 5));
  CHECK(BigRational::parse("6/-4") == BigRational(-3, 2));
  CHECK(BigRational::parse("1e-3") == BigRational(1, 1000));
  CHECK(BigRational(0).str() == "0");
  CHECK_THROWS_AS(BigRational(1) / BigRational(0), DivisionByZero);
  CHECK_THROWS(BigRational::parse("abc"));
}

TEST_CASE("rational_sqrt examples") {
  QuadExt v = rational_sqrt(BigRational(1250, 256));
  CHECK(v.str() == "25/16*sqrt(2)");
  CHECK(v * v == QuadExt(BigRational(1250, 256)));
  CHECK(rational_sqrt(0).is_zero());
  QuadExt w = rational_sqrt(BigRational(-8125, 23936));
  CHECK(w.radicand() == BigInt(-4862));
  CHECK(w.radical_part() == BigRational(25, 2992));
  CHECK(w * w == QuadExt(BigRational(-8125, 23936)));
  CHECK(rational_sqrt(BigRational(9, 4)) == QuadExt(BigRational(3, 2)));
  CHECK(rational_sqrt(BigRational(9, 4)).is_rational());
}

TEST_CASE("field operations") {
  QuadExt a = QuadExt::parse("25/16*sqrt(2)");
  CHECK(a * a == QuadExt(BigRational(625, 128)));
  QuadExt b = QuadExt::make(1, 1, 2);
  CHECK(b.inverse() == QuadExt::make(-1, 1, 2));
  QuadExt c = QuadExt::parse("5/32*sqrt(2)");
  CHECK(c * c * QuadExt(4) == QuadExt(BigRational(25, 128)));
  CHECK_THROWS_AS(QuadExt::make(0, 1, 2) + QuadExt::make(0, 1, 3), FieldTowerError);
  CHECK_THROWS_AS(QuadExt(0).inverse(), DivisionByZero);
  CHECK(QuadExt::parse("5/2 - 1/10*sqrt(1345)").str() == "5/2 - 1/10*sqrt(1345)");
  CHECK(QuadExt::parse("-sqrt(2)").str() == "-sqrt(2)");
  CHECK(QuadExt::parse("sqrt(8)") == QuadExt::make(0, 2, 2));
}

TEST_CASE("field axioms over random elements") {
  std::mt19937_64 rng(7);
  for (long q : {2L, -1L, 13L, -4862L, 1345L}) {
    for (int i = 0; i < 30; ++i) {
      QuadExt a = random_quad(rng, q), b = random_quad(rng, q), c = random_quad(rng, q);
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      if (!a.is_zero()) CHECK(a * a.inverse() == QuadExt(1));
      CHECK((a - b) + b == a);
    }
  }
}

TEST_CASE("rational_sqrt squares back for large rationals") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 60; ++i) {
    BigRational s = random_rational(rng, 128);
    QuadExt v = rational_sqrt(s);
    CHECK(v * v == QuadExt(s));
    BigRational r = random_rational(rng, 64);
    CHECK(rational_sqrt(r * r * BigRational(7)) * rational_sqrt(r * r * BigRational(7)) == QuadExt(r * r * BigRational(7)));
  }
}

TEST_CASE("BigFloat conversion agrees with direct arithmetic") {
  const mpfr_prec_t bits = decimal_to_bits(128);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    BigRational a = random_rational(rng, 60), b = random_rational(rng, 60);
    QuadExt v = QuadExt::make(a, b, 2);
    BigFloat direct = BigFloat(a, bits) + BigFloat(b, bits) * sqrt(BigFloat(2, bits));
    BigFloat conv = to_bigfloat(v, bits);
    BigFloat diff = abs(conv - direct);
    BigFloat scale = abs(direct) + BigFloat(BigRational(1), bits) * BigFloat::pow10(-400, bits);
    CHECK((diff / scale) < BigFloat::pow10(-125, bits));
  }
  CHECK(BigFloat(BigRational(-1, 1000), bits).sci(1) == "-1e-03");
  CHECK(BigFloat(BigRational(-1, 1000), bits).sci(2) == "-1.0e-03");
}

TEST_CASE("polynomial roots") {
  // Case 1 resonance polynomial at C = -16/5: (r+1)(r-6)(r^2 - 5r - 36(1+C)/5 ... ) built from roots
  QuadExt r3 = QuadExt::parse("5/2 + 1/10*sqrt(1345)");
  QuadExt r4 = QuadExt::parse("5/2 - 1/10*sqrt(1345)");
  QPoly p = QPoly(std::vector<QuadExt>{1, 1}) * QPoly(std::vector<QuadExt>{-6, 1}) *
            QPoly(std::vector<QuadExt>{r3 * r4, -(r3 + r4), 1});
  CHECK(is_rational(p));
  auto roots = solve_polynomial(p, 60);
  REQUIRE(roots.size() == 4);
  int exact = 0;
  for (const auto& r : roots) {
    REQUIRE(r.exact.has_value());
    ++exact;
  }
  CHECK(exact == 4);
  std::vector<QuadExt> got;
  for (const auto& r : roots) got.push_back(*r.exact);
  CHECK(std::find(got.begin(), got.end(), QuadExt(-1)) != got.end());
  CHECK(std::find(got.begin(), got.end(), QuadExt(6)) != got.end());
  CHECK(std::find(got.begin(), got.end(), r3) != got.end());
  CHECK(std::find(got.begin(), got.end(), r4) != got.end());

  // double root and complex pair
  QPoly q = QPoly(std::vector<QuadExt>{-3, 1}) * QPoly(std::vector<QuadExt>{-3, 1}) * QPoly(std::vector<QuadExt>{12, -1, 1});
  auto qr = solve_polynomial(q, 60);
  int mult3 = 0, complex = 0;
  for (const auto& r : qr) {
    if (r.exact && *r.exact == QuadExt(3)) mult3 = r.multiplicity;
    if (r.kind == RootKind::Complex) ++complex;
  }
  CHECK(mult3 == 2);
  CHECK(complex == 2);

  // irreducible cubic: numeric irrational roots
  auto cr = solve_polynomial(QPoly(std::vector<QuadExt>{-2, 0, 0, 1}), 60);
  int irr = 0, cpx = 0;
  for (const auto& r : cr) {
    if (r.kind == RootKind::Irrational) ++irr;
    if (r.kind == RootKind::Complex) ++cpx;
  }
  CHECK(irr == 1);
  CHECK(cpx == 2);

  // biquadratic in a: a^4 roots of system at j = 4 style
  QPoly bq = QPoly(std::vector<QuadExt>{QuadExt(BigRational(-625, 128)), 0, 1}) *
             QPoly(std::vector<QuadExt>{QuadExt(BigRational(8125, 23936)), 0, 1});
  auto br = solve_polynomial(bq, 60);
  REQUIRE(br.size() == 4);
  for (const auto& r : br) CHECK(r.exact.has_value());
}

TEST_CASE("ParamPoly arithmetic") {
  ParamPoly a = ParamPoly::variable(0), b = ParamPoly::variable(1);
  ParamPoly p = (a + b) * (a - b);
  CHECK(p == a * a - b * b);
  auto name = [](ParamId id) { return id == 0 ? std::string("cz1") : std::string("cy4"); };
  CHECK(ParamPoly(QuadExt::parse("1/6*sqrt(2)")).str(name) == "1/6*sqrt(2)");
  ParamPoly t = ParamPoly(QuadExt(BigRational(21845, 47775744))) - a * QuadExt::parse("1/6*sqrt(2)");
  CHECK(t.str(name) == "21845/47775744 - 1/6*sqrt(2)*cz1");
  ParamPoly d = (a * a * b * QuadExt(3)).divided_by_term(a * QuadExt(3));
  CHECK(d == a * b);
  ParamPoly inv = ParamPoly(1).divided_by_term(a);
  CHECK((inv * a) == ParamPoly(1));
  CHECK(p.evaluate({{0, QuadExt(3)}, {1, QuadExt(2)}}) == QuadExt(5));
  CHECK_THROWS(p.evaluate({{0, QuadExt(3)}}));
  auto [u, shift] = (a * a - inv).to_univariate(0);
  CHECK(shift == 1);
  CHECK(u.degree() == 3);
}
