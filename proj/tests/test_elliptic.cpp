#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "qb/elliptic.hpp"
#include "qb/errors.hpp"

using namespace qb;

namespace {

using RPoint = ECPoint<Rational>;

RPoint pt(Rational x, Rational y) { return RPoint::affine(std::move(x), std::move(y)); }

// A random curve through a random point: m = (x^3 - y^2) / x.
std::pair<Rational, RPoint> random_curve_point(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(-30, 30), s(1, 5);
  for (;;) {
    Rational x(d(rng), s(rng)), y(d(rng), s(rng));
    x.canonicalize();
    y.canonicalize();
    if (x == 0 || y == 0) continue;
    Rational m = (x * x * x - y * y) / x;
    if (m == 0) continue;
    return {m, pt(x, y)};
  }
}

bool same(const RPoint& a, const RPoint& b) {
  if (a.infinity || b.infinity) return a.infinity == b.infinity;
  return a.x == b.x && a.y == b.y;
}

}  // namespace

TEST_CASE("chord law anchors") {
  CurveEm<Rational> e{1156};
  RPoint s = point_add(e, pt(-16, -120), pt(34, 0));
  CHECK(s.x == Rational(-306, 25));
  CHECK(s.y == Rational(13872, 125));
  RPoint t = point_add(e, pt(-16, -120), pt(-34, 0));
  CHECK(t.x == Rational(850, 9));
  CHECK(e.contains(s));
  CHECK(e.contains(t));
  CHECK(same(point_add(e, pt(-16, -120), RPoint::at_infinity()), pt(-16, -120)));
}

TEST_CASE("multiples of (0,0)") {
  CurveEm<Rational> e{7};
  CHECK(scalar_mul(e, 2, pt(0, 0)).infinity);
  CHECK(same(scalar_mul(e, 5, pt(0, 0)), pt(0, 0)));
}

TEST_CASE("8P lies in E_1 over Q_5") {
  auto prof = reduction_profile(Rational(18496), 5);
  CurveEm<Rational> e{18496};
  RPoint r = scalar_mul(e, 8, pt(-64, -960));
  CHECK(filtration_level(prof, r).at_least(1));
  CurveEm<Padic> ep{as_padic(Rational(18496), 5, 32)};
  ECPoint<Padic> rp = ECPoint<Padic>::affine(as_padic(Rational(-64), 5, 32), as_padic(Rational(-960), 5, 32));
  CHECK(filtration_level(prof, scalar_mul(ep, 8, rp)).at_least(1));
}

TEST_CASE("reduction profiles") {
  auto a = reduction_profile(Rational(18496), 5);
  CHECK(a.kind == ReductionKind::Good);
  CHECK(a.smooth_count == 8);
  auto b = reduction_profile(Rational(1156), 3);
  CHECK(b.kind == ReductionKind::Good);
  CHECK(b.smooth_count == 4);
  auto c = reduction_profile(Rational(5), 5);
  CHECK(c.kind == ReductionKind::Additive);
  CHECK_FALSE(c.exceptional);
  CHECK(reduction_profile(Rational(15), 5).exceptional);
  CHECK(reduction_profile(Rational(15 * 625), 5).exceptional);
  auto d = reduction_profile(Rational(3 * 625 * 625), 5);
  CHECK(d.scaling_exponent == 2);
  CHECK(d.minimal_m == "3");
  auto e = reduction_profile(Rational(1, 5 * 5 * 5), 5);
  CHECK(e.scaling_exponent == -1);
  CHECK(e.minimal_valuation == 1);
  CHECK(reduction_profile(Rational(25), 5).component_order == 4);   // 1 is a square mod 5
  CHECK(reduction_profile(Rational(50), 5).component_order == 2);   // 2 is not
  CHECK(reduction_profile(Rational(125), 5).component_order == 2);
  CHECK(reduction_profile(Rational(5), 5).component_order == 2);
  CHECK_THROWS_AS(reduction_profile(Rational(5), 2), MathError);
}

TEST_CASE("smooth counts match enumeration, additive counts are p") {
  for (long p : {3L, 5L, 7L, 11L, 13L}) {
    for (long u = 0; u < p; ++u) {
      long brute = 1;
      for (long x = 0; x < p; ++x)
        for (long y = 0; y < p; ++y) {
          if (((y * y - (x * x * x - u * x)) % p + p) % p != 0) continue;
          // singular iff both partials vanish: 2y and 3x^2 - u
          bool singular = (2 * y) % p == 0 && ((3 * x * x - u) % p + p) % p == 0;
          if (!singular) ++brute;
        }
      CHECK(count_smooth_points(u, p) == brute);
      if (u == 0) CHECK(brute == p);
    }
    CHECK(reduction_profile(Rational(p), p).smooth_count == p);
  }
}

TEST_CASE("filtration anchors") {
  auto prof = reduction_profile(Rational(16), 5);
  CHECK(filtration_level(prof, pt(-4, 0)).level == 0);
  auto prof2 = reduction_profile(Rational(1156), 5);
  CHECK(filtration_level(prof2, pt(Rational(-306, 25), Rational(13872, 125))).level == 1);
  auto add = reduction_profile(Rational(20), 5);
  CHECK_FALSE(filtration_level(add, pt(0, 0)).in_e0);
  CHECK(filtration_level(add, RPoint::at_infinity()).at_least(100));
  // rescaling: m = 5^4 * 16, point (-4 * 25, 0)
  auto big = reduction_profile(Rational(16 * 625), 5);
  CHECK(filtration_level(big, pt(-100, 0)).level == 0);
}

TEST_CASE("precision margin near a level boundary") {
  auto prof = reduction_profile(Rational(16), 5);
  Padic x = Padic::from_rational(Rational(1, 25), 5, 2);
  Padic y = Padic::from_rational(Rational(1, 125), 5, 2);
  CHECK_THROWS_AS(filtration_level(prof, ECPoint<Padic>::affine(x, y)), PrecisionError);
}

TEST_CASE("division polynomials for ell = 3") {
  auto dp = division_polynomials(3, Rational(1));
  CHECK(dp.psi.coefficients() == std::vector<Rational>{-1, 0, -6, 0, 3});
  // phi_3 = x psi_3^2 - psi_4 psi_2 for m = 1
  CHECK(dp.phi.coefficients() == std::vector<Rational>{0, 9, 0, -36, 0, 30, 0, 12, 0, 1});
  auto g = preimage_polynomial(3, Rational(7), Rational(2));
  Polynomial<Rational> t({0, 1});
  Polynomial<Rational> psi3({-49, 0, -42, 0, 3});
  Polynomial<Rational> expected = Polynomial<Rational>({0, 9 * 2401, 0, -36 * 343, 0, 30 * 49, 0, 12 * 7, 0, 1}) -
                                  psi3 * psi3 * Rational(2);
  CHECK(g.coefficients() == expected.coefficients());
}

TEST_CASE("ell = 5 division polynomial degrees") {
  auto dp = division_polynomials(5, Rational(3));
  CHECK(dp.psi.degree() == 12);
  CHECK(dp.phi.degree() == 25);
}

TEST_CASE("division polynomials agree with the group law") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 20; ++i) {
    auto [m, s] = random_curve_point(rng);
    CurveEm<Rational> e{m};
    for (int ell : {3, 5}) {
      RPoint r = scalar_mul(e, ell, s);
      if (r.infinity) continue;
      CHECK(preimage_polynomial(ell, m, r.x)(s.x) == 0);
      auto dp = division_polynomials(ell, m);
      Rational ps = dp.psi(s.x);
      CHECK(dp.phi(s.x) / (ps * ps) == r.x);
    }
  }
}

TEST_CASE("group law properties") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> d(-12, 12);
  int done = 0;
  while (done < 100) {
    auto [m, p1] = random_curve_point(rng);
    CurveEm<Rational> e{m};
    RPoint p2 = point_double(e, p1);
    if (p2.infinity) continue;
    RPoint p3 = point_add(e, p2, pt(0, 0));
    CHECK(e.contains(p2));
    CHECK(e.contains(p3));
    CHECK(same(point_add(e, point_add(e, p1, p2), p3), point_add(e, p1, point_add(e, p2, p3))));
    CHECK(same(point_add(e, p1, p3), point_add(e, p3, p1)));
    CHECK(point_add(e, p1, e.negate(p1)).infinity);
    ++done;
  }
}

TEST_CASE("double-and-add equals repeated addition") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 5; ++i) {
    auto [m, s] = random_curve_point(rng);
    CurveEm<Rational> e{m};
    RPoint acc = RPoint::at_infinity();
    for (long n = 1; n <= 20; ++n) {
      acc = point_add(e, acc, s);
      CHECK(same(scalar_mul(e, n, s), acc));
    }
    CHECK(same(scalar_mul(e, -3, s), e.negate(scalar_mul(e, 3, s))));
  }
}

TEST_CASE("divisibility anchors") {
  CHECK_FALSE(is_divisible_by_ell(Rational(18496), pt(-64, -960), 5, 5));
  CHECK_FALSE(is_divisible_oracle(Rational(18496), pt(-64, -960), 5, 5));
  for (int ell : {3, 5})
    for (long p : {2L, 3L, 5L, 7L}) CHECK(is_divisible_by_ell(Rational(11), RPoint::at_infinity(), ell, p));
  CHECK(is_divisible_by_ell(Rational(18496), pt(-64, -960), 5, 2));
  CHECK_THROWS_AS(is_divisible_oracle(Rational(7), pt(0, 0), 3, 5), MathError);
  auto tr = divisibility_transcript(Rational(18496), pt(-64, -960), 5, 5);
  CHECK(tr.multiplier == 8);
  CHECK(tr.required_level == 2);
  REQUIRE(tr.level.has_value());
  CHECK(tr.level->level == 1);
}

TEST_CASE("multiples of ell are divisible") {
  std::mt19937_64 rng(31);
  int checked = 0;
  for (int i = 0; i < 30; ++i) {
    auto [m, s] = random_curve_point(rng);
    CurveEm<Rational> e{m};
    for (int ell : {3, 5})
      for (long p : {3L, 5L, 7L, 13L}) {
        RPoint r = scalar_mul(e, ell, s);
        if (r.infinity) continue;
        try {
          CHECK(is_divisible_by_ell(m, r, ell, p));
          ++checked;
        } catch (const PrecisionError&) {
        }
      }
  }
  CHECK(checked > 150);
}

TEST_CASE("structural test agrees with the oracle") {
  std::mt19937_64 rng(77);
  int agree = 0, errors = 0;
  for (int i = 0; i < 60; ++i) {
    auto [m, s] = random_curve_point(rng);
    CurveEm<Rational> e{m};
    if (scalar_mul(e, 10, s).infinity || scalar_mul(e, 6, s).infinity) continue;
    for (int ell : {3, 5})
      for (long p : {3L, 5L, 7L, 13L}) {
        try {
          bool a = is_divisible_by_ell(m, s, ell, p);
          bool b = is_divisible_oracle(m, s, ell, p);
          CHECK_MESSAGE(a == b, "m=" << m.get_str() << " x=" << s.x.get_str() << " ell=" << ell << " p=" << p);
          ++agree;
        } catch (const PrecisionError&) {
          ++errors;
        }
      }
  }
  CHECK(agree > 200);
  CHECK(errors * 20 < agree);
}

TEST_CASE("multiplication by p raises the filtration level") {
  std::mt19937_64 rng(4);
  for (long p : {3L, 5L}) {
    int seen = 0;
    for (int i = 0; i < 200 && seen < 10; ++i) {
      auto [m, s] = random_curve_point(rng);
      auto prof = reduction_profile(m, p);
      CurveEm<Rational> e{m};
      RPoint r = scalar_mul(e, prof.kind == ReductionKind::Good ? prof.smooth_count : 4 * prof.component_order, s);
      if (r.infinity) continue;
      auto lvl = filtration_level(prof, r);
      if (!lvl.at_least(1)) continue;
      RPoint pr = scalar_mul(e, p, r);
      CHECK(filtration_level(prof, pr).at_least(lvl.level + 1));
      ++seen;
    }
    CHECK(seen >= 5);
  }
}
