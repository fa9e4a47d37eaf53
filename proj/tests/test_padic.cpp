#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "qb/errors.hpp"
#include "qb/padic.hpp"

using namespace qb;

namespace {

PadicPolynomial poly(const std::vector<Rational>& c, long p, long n) {
  return to_padic(Polynomial<Rational>(c), p, n);
}

}  // namespace

TEST_CASE("valuation and unit") {
  Padic x = Padic::from_rational(620, 5, 10);
  CHECK(x.valuation() == 1);
  CHECK(x.unit() == 124);
  Padic q = Padic::from_rational(Rational(1, 4), 3, 5);
  CHECK(q.valuation() == 0);
  CHECK(q.unit() == 61);
  Padic z = x - x;
  CHECK(z.is_zero());
  CHECK_THROWS_AS(z.valuation(), PrecisionError);
  CHECK(Padic::from_rational(0, 5, 10).is_exact_zero());
}

TEST_CASE("precision bookkeeping") {
  Padic a = Padic::from_rational(1, 5, 10);
  Padic b = Padic::from_rational(1 + 5 * 5 * 5, 5, 10);
  Padic d = b - a;
  CHECK(d.valuation() == 3);
  CHECK(d.absolute_precision() == 10);
  CHECK(d.relative_precision() == 7);
  Padic tiny = Padic::from_rational(Integer(ipow(5, 12)), 5, 10) - Padic::from_rational(0, 5, 10);
  CHECK(tiny.valuation() == 12);
  Padic zero_ish = a - a;
  CHECK_THROWS_AS(a / zero_ish, PrecisionError);
}

TEST_CASE("ring axioms at certified precision") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> d(-5000, 5000), s(1, 400);
  for (long p : {2L, 3L, 5L, 7L, 13L}) {
    for (int i = 0; i < 60; ++i) {
      auto draw = [&] {
        long n = 0;
        while (n == 0) n = d(rng);
        Rational r(n, s(rng));
        r.canonicalize();
        return r;
      };
      Rational qa = draw(), qb = draw(), qc = draw();
      Padic a = Padic::from_rational(qa, p, 20), b = Padic::from_rational(qb, p, 20), c = Padic::from_rational(qc, p, 20);
      CHECK(((a * b) * c).equals_at_precision(a * (b * c)));
      CHECK((a * (b + c)).equals_at_precision(a * b + a * c));
      CHECK((a + b).equals_at_precision(b + a));
      CHECK(((a / b) * b).equals_at_precision(a));
      CHECK((a * b).valuation() == a.valuation() + b.valuation());
      Padic sum = a + b;
      if (!sum.is_zero()) {
        CHECK(sum.valuation() >= std::min(a.valuation(), b.valuation()));
        if (a.valuation() != b.valuation()) CHECK(sum.valuation() == std::min(a.valuation(), b.valuation()));
      }
      CHECK((a * b).equals_at_precision(Padic::from_rational(qa * qb, p, 20)));
    }
  }
}

TEST_CASE("hensel_root anchors") {
  Padic alpha = hensel_root(poly({-621, 0, 0, 0, 1}, 5, 32), Padic::from_rational(1, 5, 32), 32);
  CHECK((alpha * alpha * alpha * alpha - Padic::from_rational(621, 5, 32)).lower_valuation() >= 32);
  CHECK(alpha.residue(1) == 1);
  Padic i = hensel_root(poly({1, 0, 1}, 5, 10), Padic::from_rational(2, 5, 10), 2);
  CHECK(i.residue(2) == 7);
  Padic c = hensel_root(poly({-Rational(17, 3), 1}, 7, 10), Padic::from_rational(Rational(17, 3) + 7, 7, 10), 10);
  CHECK(c.equals_at_precision(Padic::from_rational(Rational(17, 3), 7, 10)));
  CHECK_THROWS_AS(hensel_root(poly({1, 0, 1}, 3, 10), Padic::from_rational(1, 3, 10), 10), MathError);
}

TEST_CASE("hensel_root is stable under doubling the precision") {
  for (long n : {3L, 7L, 11L, 21L}) {
    auto f = poly({-Rational(1 + 5 * n), 0, 0, 0, 1}, 5, 64);
    Padic r16 = hensel_root(f, Padic::from_rational(1, 5, 64), 16);
    Padic r32 = hensel_root(f, Padic::from_rational(1, 5, 64), 32);
    CHECK(r32.residue(16) == r16.residue(16));
  }
}

TEST_CASE("root finding") {
  auto roots = padic_poly_roots(poly({-1, 0, 0, 0, 1}, 5, 20), 5, 20);
  CHECK(roots.size() == 4);
  CHECK(padic_poly_roots(poly({1, 0, 1}, 3, 20), 3, 20).empty());
  // roots 1/5, 3, 3 + 5^4, 25
  Polynomial<Rational> f({1});
  for (Rational r : {Rational(1, 5), Rational(3), Rational(3 + 625), Rational(25)})
    f = f * Polynomial<Rational>({-r, 1});
  auto rs = padic_poly_roots(to_padic(f, 5, 30), 5, 30);
  CHECK(rs.size() == 4);
  for (const Padic& r : rs) {
    Padic v = to_padic(f, 5, 30)(r);
    CHECK(v.lower_valuation() >= 20);
  }
  // a double root is an unresolvable cluster
  CHECK_THROWS_AS(padic_poly_roots(poly({4, -4, 1}, 5, 20), 5, 20), PrecisionError);
}

TEST_CASE("roots are distinct and re-substitute") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<long> d(-50, 50);
  for (long p : {3L, 5L, 7L}) {
    for (int i = 0; i < 30; ++i) {
      Polynomial<Rational> f({Rational(d(rng)), Rational(d(rng)), Rational(d(rng)), Rational(d(rng)), Rational(1)});
      std::vector<Padic> rs;
      try {
        rs = padic_poly_roots(to_padic(f, p, 30), p, 30);
      } catch (const PrecisionError&) {
        continue;
      }
      CHECK(rs.size() <= 4);
      for (std::size_t a = 0; a < rs.size(); ++a) {
        CHECK(to_padic(f, p, 30)(rs[a]).lower_valuation() >= 20);
        for (std::size_t b = a + 1; b < rs.size(); ++b) CHECK_FALSE(rs[a].equals_at_precision(rs[b]));
      }
    }
  }
}

TEST_CASE("sqrt of -1") {
  CHECK(sqrt_minus_one(5, 1).residue(1) == 2);
  CHECK(sqrt_minus_one(5, 2).residue(2) == 7);
  Integer r13 = sqrt_minus_one(13, 1).residue(1);
  CHECK((r13 == 5 || r13 == 8));
  for (long n : {8L, 32L, 64L}) {
    Padic i = sqrt_minus_one(5, n);
    CHECK((i * i + Padic::from_rational(1, 5, n)).lower_valuation() >= n);
  }
  CHECK_THROWS(sqrt_minus_one(7, 10));
}

TEST_CASE("power classes") {
  CHECK(is_fourth_power(Padic::from_rational(621, 5, 20)));
  CHECK_FALSE(is_fourth_power(Padic::from_rational(2, 5, 20)));
  CHECK(is_fourth_power(Padic::from_rational(17, 2, 20)));
  CHECK_FALSE(is_fourth_power(Padic::from_rational(9, 2, 20)));
  CHECK(in_neg4_coset(Padic::from_rational(-4, 3, 20)));
  CHECK(is_square(Padic::from_rational(-1, 5, 20)));
  CHECK_FALSE(is_square(Padic::from_rational(-1, 3, 20)));
  CHECK(is_square(Padic::from_rational(-7, 2, 20)));
  Padic r = fourth_root(Padic::from_rational(Rational(81 * 621, 16), 5, 30), 30);
  CHECK((r * r * r * r).equals_at_precision(Padic::from_rational(Rational(81 * 621, 16), 5, 30)));
  Padic s = square_root(Padic::from_rational(-7, 2, 30), 30);
  CHECK((s * s).equals_at_precision(Padic::from_rational(-7, 2, 30)));
}
