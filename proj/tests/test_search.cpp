#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <numeric>

#include "qb/brauer.hpp"
#include "qb/errors.hpp"
#include "qb/search.hpp"

using namespace qb;

namespace {

bool contains(const std::vector<IntPoint>& pts, IntPoint q) { return std::find(pts.begin(), pts.end(), q) != pts.end(); }

}  // namespace

TEST_CASE("integral point anchors") {
  auto a1 = sign_closure(integral_points(quartic_of(1, -1, 1, -5), 5));
  CHECK(contains(a1, {1, 1, 0, 0}));
  CHECK(contains(a1, {1, -1, 0, 0}));
  auto ones = sign_closure(integral_points(quartic_of(1, 1, 1, 1), 2));
  CHECK(contains(ones, {1, 1, 1, 1}));
  CHECK(contains(ones, {-1, 1, 1, -1}));
  auto d1349 = integral_points(quartic_of(1, 3, 4, 9), 3);
  CHECK(contains(d1349, {1, 1, 1, 0}));
}

TEST_CASE("search is exhaustive in its box") {
  for (auto d : {quartic_of(1, 1, 1, 1), quartic_of(1, 3, 4, 9), quartic_of(1, -1, 3, 9), quartic_of(1, 2, 1, 2)}) {
    auto found = sign_closure(integral_points(d, 6));
    std::vector<IntPoint> brute;
    for (long x = -6; x <= 6; ++x)
      for (long y = -6; y <= 6; ++y)
        for (long z = -6; z <= 6; ++z)
          for (long w = -6; w <= 6; ++w) {
            IntPoint pt{x, y, z, w};
            if (std::gcd(std::gcd(x, y), std::gcd(z, w)) != 1) continue;
            RationalPoint r{{x, y, z, w}};
            if (surface_residual(d, r) == 0) brute.push_back(pt);
          }
    std::sort(brute.begin(), brute.end());
    CHECK(found == brute);
  }
}

TEST_CASE("canonical points are sign-closed and primitive") {
  auto pts = integral_points(quartic_of(1, 2, 1, 2), 20);
  for (auto& pt : pts) {
    for (long t : pt) CHECK(t >= 0);
    CHECK(std::gcd(std::gcd(pt[0], pt[1]), std::gcd(pt[2], pt[3])) == 1);
  }
  auto closed = sign_closure(pts);
  CHECK(sign_closure(closed) == closed);
}

TEST_CASE("parallel and serial searches agree") {
  for (auto d : {quartic_of(1, 2, 1, 2), quartic_of(1, -1, 1, -5), quartic_of(1, 3, 4, 9)}) {
    CHECK(integral_points(d, 25, 1) == integral_points(d, 25, 4));
  }
}

TEST_CASE("corollary searches") {
  auto r = verify_corollary(CorollaryFamily::Co1_1, 1, 0, 20);
  CHECK(r.violations.empty());
  CHECK(r.condition == "25 | xyzw");
  CHECK_FALSE(r.points.empty());
  auto s = verify_corollary(CorollaryFamily::Co3_1, 1, 0, 20);
  CHECK(s.violations.empty());
  CHECK(s.condition == "9 | xyw");
  CHECK_THROWS_AS(verify_corollary(CorollaryFamily::Co3_1, 2, 0, 20), MathError);
  CHECK_THROWS_AS(verify_corollary(CorollaryFamily::Co1_1, 5, 0, 20), MathError);
  for (auto f : {CorollaryFamily::Co1_1, CorollaryFamily::Co1_2, CorollaryFamily::Co3_1, CorollaryFamily::Co3_2})
    for (int eps : {0, 1}) CHECK(verify_corollary(f, f == CorollaryFamily::Co3_1 ? 4 : 2, eps, 12).violations.empty());
  CHECK(parse_family("co3.2") == CorollaryFamily::Co3_2);
  CHECK_THROWS_AS(parse_family("co9"), InputError);
}

TEST_CASE("local solubility") {
  CHECK(is_locally_soluble(quartic_of(1, 3, 4, 9), 3));
  CHECK(is_locally_soluble(quartic_of(1, 1, 1, 1), 5));
  for (long n : {1L, 2L, 3L, 4L, 6L}) CHECK(is_locally_soluble(quartic_of(1, -1, 25 * n, -125 * n * n * n), 5));
  CHECK_FALSE(is_locally_soluble(quartic_of(1, 1, -1, -1), 2));
  CHECK_FALSE(is_locally_soluble(quartic_of(1, 2, -5, -10), 5));
}

TEST_CASE("smooth points with constraints") {
  ValuationConstraints zc{};
  zc[2] = 1;
  auto a1 = quartic_of(1, -1, 1, -5);
  PadicPoint l = find_smooth_point(a1, 5, 32, zc);
  CHECK(on_surface(a1, l));
  CHECK(l.v[1].equals_at_precision(Padic::from_integer(1, 5, 32)));
  CHECK(l.v[2].equals_at_precision(Padic::from_integer(5, 5, 32)));
  CHECK(l.v[3].equals_at_precision(Padic::from_integer(1, 5, 32)));
  CHECK((l.v[0] * l.v[0] * l.v[0] * l.v[0]).equals_at_precision(Padic::from_integer(621, 5, 32)));

  ValuationConstraints yw{};
  yw[1] = 0;
  yw[3] = 0;
  auto d1349 = quartic_of(1, 3, 4, 9);
  PadicPoint m = find_smooth_point(d1349, 3, 32, yw);
  CHECK(on_surface(d1349, m));
  CHECK(m.v[1].valuation() == 0);
  CHECK(m.v[3].valuation() == 0);
  for (auto& c : m.v) CHECK_FALSE(c.is_zero());
  CHECK_FALSE(f_value(d1349, m).is_zero());

  ValuationConstraints deep{};
  deep[0] = 100;
  CHECK_THROWS_AS(find_smooth_point(a1, 5, 32, deep), MathError);
}

TEST_CASE("sampled points") {
  auto d = quartic_of(1, 3, 4, 9);
  for (long p : {2L, 3L, 7L, 13L}) {
    auto pts = sample_points(d, p, 10, 1234);
    CHECK(pts.size() == 10);
    for (auto& l : pts) CHECK(on_surface(d, l));
    auto again = sample_points(d, p, 10, 1234);
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(pts[i].v[0].equals_at_precision(again[i].v[0]));
  }
}
