#include "qb/search.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <thread>

#include "qb/errors.hpp"

namespace qb {

namespace {

using i128 = __int128;

i128 pow4(long v) {
  i128 s = static_cast<i128>(v) * v;
  return s * s;
}

Integer pow4(const Integer& v) {
  Integer s = v * v;
  return s * s;
}

long to_long(const Integer& c) {
  if (!c.fits_slong_p()) throw InputError("coefficient too large for the integral search");
  return c.get_si();
}

long gcd4(const IntPoint& v) {
  long g = 0;
  for (long t : v) g = std::gcd(g, t);
  return g;
}

long val_or_big(long v, long p) {
  if (v == 0) return 1L << 20;
  long k = 0;
  while (v % p == 0) {
    v /= p;
    ++k;
  }
  return k;
}

std::array<Integer, 4> signed_integers(const DiagonalQuartic& d) {
  return {d.coeffs.a(), d.coeffs.b(), Integer(-d.coeffs.c()), Integer(-d.coeffs.d())};
}

Integer mod_pk(const Integer& v, const Integer& pk) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), pk.get_mpz_t());
  return r;
}

// The vector is a point once fixing all but one coordinate leaves a p-adic
// fourth power (or zero) for the last.
bool certifies(const std::array<Integer, 4>& e, const std::array<Integer, 4>& r, long p, long precision) {
  for (std::size_t j = 0; j < 4; ++j) {
    Integer c = 0;
    bool other_nonzero = false;
    for (std::size_t k = 0; k < 4; ++k) {
      if (k == j) continue;
      c += e[k] * pow4(r[k]);
      other_nonzero = other_nonzero || r[k] != 0;
    }
    if (c == 0) {
      if (other_nonzero) return true;
      continue;
    }
    Rational q(Integer(-c), e[j]);
    q.canonicalize();
    if (is_local_fourth_power(q, p, precision)) return true;
  }
  return false;
}

}  // namespace

std::vector<IntPoint> integral_points(const DiagonalQuartic& d, long bound, unsigned threads) {
  if (bound < 1) throw InputError("bound must be at least 1");
  const long a = to_long(d.coeffs.a()), b = to_long(d.coeffs.b()), c = to_long(d.coeffs.c()),
             dd = to_long(d.coeffs.d());
  struct Entry {
    i128 value;
    long x, y;
  };
  std::vector<Entry> lhs;
  lhs.reserve(static_cast<std::size_t>((bound + 1) * (bound + 1)));
  for (long x = 0; x <= bound; ++x)
    for (long y = 0; y <= bound; ++y) lhs.push_back({a * pow4(x) + b * pow4(y), x, y});
  std::sort(lhs.begin(), lhs.end(), [](const Entry& l, const Entry& r) {
    if (l.value != r.value) return l.value < r.value;
    return std::make_pair(l.x, l.y) < std::make_pair(r.x, r.y);
  });

  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(bound + 1)));
  std::vector<std::vector<IntPoint>> parts(threads);
  auto work = [&](unsigned t) {
    for (long z = static_cast<long>(t); z <= bound; z += static_cast<long>(threads)) {
      for (long w = 0; w <= bound; ++w) {
        const i128 rhs = c * pow4(z) + dd * pow4(w);
        auto lo = std::lower_bound(lhs.begin(), lhs.end(), rhs, [](const Entry& e, i128 v) { return e.value < v; });
        for (auto it = lo; it != lhs.end() && it->value == rhs; ++it) {
          IntPoint pt{it->x, it->y, z, w};
          if (gcd4(pt) == 1) parts[t].push_back(pt);
        }
      }
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  std::vector<IntPoint> out;
  for (auto& part : parts) out.insert(out.end(), part.begin(), part.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<IntPoint> sign_closure(const std::vector<IntPoint>& canonical) {
  std::vector<IntPoint> out;
  for (const IntPoint& pt : canonical)
    for (int mask = 0; mask < 16; ++mask) {
      IntPoint q = pt;
      for (std::size_t j = 0; j < 4; ++j)
        if (mask >> j & 1) q[j] = -q[j];
      out.push_back(q);
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

CorollaryFamily parse_family(const std::string& s) {
  if (s == "co1.1") return CorollaryFamily::Co1_1;
  if (s == "co1.2") return CorollaryFamily::Co1_2;
  if (s == "co3.1") return CorollaryFamily::Co3_1;
  if (s == "co3.2") return CorollaryFamily::Co3_2;
  throw InputError("unknown family '" + s + "' (expected co1.1, co1.2, co3.1 or co3.2)");
}

std::string to_string(CorollaryFamily f) {
  switch (f) {
    case CorollaryFamily::Co1_1: return "co1.1";
    case CorollaryFamily::Co1_2: return "co1.2";
    case CorollaryFamily::Co3_1: return "co3.1";
    default: return "co3.2";
  }
}

DiagonalQuartic family_surface(CorollaryFamily f, long n, int eps) {
  if (n == 0) throw MathError("n must be nonzero");
  if (eps != 0 && eps != 1) throw MathError("eps must be 0 or 1");
  const long s = eps ? -4 : 1;
  const long n3 = n * n * n;
  switch (f) {
    case CorollaryFamily::Co1_1: return quartic_of(1, -1, n, -5 * n3 * s);
    case CorollaryFamily::Co1_2: return quartic_of(1, -1, 25 * n, -125 * n3 * s);
    case CorollaryFamily::Co3_1: return quartic_of(1, n, 1, -27 * s * n3);
    default: return quartic_of(1, -1, 3 * n, 9 * s * n3);
  }
}

SearchReport verify_corollary(CorollaryFamily f, long n, int eps, long bound, unsigned threads) {
  const bool five = f == CorollaryFamily::Co1_1 || f == CorollaryFamily::Co1_2;
  const long ell = five ? 5 : 3;
  if (five && n % 5 == 0) throw MathError("n must be coprime to 5");
  if (f == CorollaryFamily::Co3_1 && ((n % 3) + 3) % 3 != 1) throw MathError("n must be 1 mod 3");
  if (f == CorollaryFamily::Co3_2 && n % 3 == 0) throw MathError("n must be coprime to 3");

  SearchReport rep;
  rep.family = f;
  rep.n = n;
  rep.eps = eps;
  rep.bound = bound;
  rep.surface = family_surface(f, n, eps);

  const CoefficientQuadruple norm = normalize_coefficients(
      {rep.surface.a(), rep.surface.b(), rep.surface.c(), rep.surface.d()});
  const Rational prod = Rational(norm.a() * norm.b() * norm.c() * norm.d());
  const Rational cond = five ? Rational(125 * prod) : Rational(-3 * prod);
  if (!in_neg4_coset_global(cond))
    throw MathError(std::string(five ? "125abcd" : "-3abcd") + " is not in <-4>Q^{*4}");
  rep.hypotheses.push_back(std::string(five ? "125abcd = " : "-3abcd = ") + to_string(cond) + " in <-4>Q^{*4}");
  auto unit = [&](const Integer& v) { return v % ell != 0; };
  auto residue = [&](const Integer& v) -> Integer {
    Integer r = v % ell;
    return (r + ell) % ell;
  };
  const std::string L = std::to_string(ell);
  if (f == CorollaryFamily::Co1_1 || f == CorollaryFamily::Co3_1) {
    if (!unit(norm.a()) || !unit(norm.b()) || !unit(norm.c()))
      throw MathError("a, b, c must be units at " + L);
    rep.hypotheses.push_back("a, b, c units at " + L);
    if (five) {
      if (residue(norm.a() + norm.b()) != 0) throw MathError("a + b must be 0 mod 5");
      rep.hypotheses.push_back("a + b = 0 mod 5");
      rep.condition = "25 | xyzw";
    } else {
      if (residue(norm.a()) != residue(norm.b()) || residue(norm.b()) != residue(norm.c()))
        throw MathError("a, b, c must agree mod 3");
      rep.hypotheses.push_back("a = b = c mod 3");
      rep.condition = "9 | xyw";
    }
  } else {
    if (!unit(norm.a()) || !unit(norm.b())) throw MathError("a, b must be units at " + L);
    if (residue(norm.c()) != 0 || residue(norm.d()) != 0) throw MathError("c, d must be divisible by " + L);
    rep.hypotheses.push_back("a, b units at " + L + "; c = d = 0 mod " + L);
    rep.condition = L + " | zw";
  }

  rep.points = integral_points(rep.surface, bound, threads);
  for (const IntPoint& pt : rep.points) {
    long v = 0;
    switch (f) {
      case CorollaryFamily::Co1_1:
        for (long t : pt) v += val_or_big(t, 5);
        if (v < 2) rep.violations.push_back(pt);
        break;
      case CorollaryFamily::Co1_2:
        if (val_or_big(pt[2], 5) + val_or_big(pt[3], 5) < 1) rep.violations.push_back(pt);
        break;
      case CorollaryFamily::Co3_1:
        if (val_or_big(pt[0], 3) + val_or_big(pt[1], 3) + val_or_big(pt[3], 3) < 2) rep.violations.push_back(pt);
        break;
      case CorollaryFamily::Co3_2:
        if (val_or_big(pt[2], 3) + val_or_big(pt[3], 3) < 1) rep.violations.push_back(pt);
        break;
    }
  }
  return rep;
}

bool is_locally_soluble(const DiagonalQuartic& d, long p, long precision) {
  if (!is_prime(p)) throw InputError("p must be prime");
  const auto e = signed_integers(d);
  long vmax = 0;
  for (const Integer& c : e) vmax = std::max(vmax, valuation(Integer(4 * c), p));
  const long depth = std::min(2 * vmax + 3, precision);
  const std::size_t budget = 200000;
  // residues examined; large p with p | abcd would otherwise run for hours
  const long work_budget = 5000000;
  long work = 0;
  auto spend = [&] {
    if (++work > work_budget) throw PrecisionError("local solubility undecided: work budget exhausted");
  };

  struct Node {
    std::array<Integer, 4> r;
    std::size_t fixed;  // coordinate set to exactly 1
  };
  std::vector<Node> level;
  // level 1: the first coordinate prime to p is scaled to 1
  for (std::size_t u = 0; u < 4; ++u) {
    const long free = 3 - static_cast<long>(u);
    long total = 1;
    for (long i = 0; i < free; ++i) total = total > work_budget / p ? work_budget + 1 : total * p;
    for (long idx = 0; idx < total; ++idx) {
      spend();
      Node nd;
      nd.fixed = u;
      long rest = idx;
      for (std::size_t k = 0; k < 4; ++k) {
        if (k < u) nd.r[k] = 0;
        else if (k == u) nd.r[k] = 1;
        else {
          nd.r[k] = rest % p;
          rest /= p;
        }
      }
      Integer F = 0;
      for (std::size_t k = 0; k < 4; ++k) F += e[k] * pow4(nd.r[k]);
      if (F % p != 0) continue;
      if (certifies(e, nd.r, p, precision)) return true;
      level.push_back(nd);
    }
  }
  Integer pk = p;
  for (long k = 1; k < depth; ++k) {
    if (level.empty()) return false;
    const Integer next = pk * p;
    std::vector<Node> children;
    for (const Node& nd : level) {
      std::array<long, 4> t{0, 0, 0, 0};
      const long combos = p > 1000 ? work_budget + 1 : p * p * p;
      for (long idx = 0; idx < combos; ++idx) {
        spend();
        long rest = idx;
        Node ch = nd;
        for (std::size_t j = 0; j < 4; ++j) {
          if (j == nd.fixed) continue;
          t[j] = rest % p;
          rest /= p;
          ch.r[j] = nd.r[j] + pk * t[j];
        }
        Integer F = 0;
        for (std::size_t j = 0; j < 4; ++j) F += e[j] * pow4(ch.r[j]);
        if (mod_pk(F, next) != 0) continue;
        if (certifies(e, ch.r, p, precision)) return true;
        children.push_back(std::move(ch));
        if (children.size() > budget) throw PrecisionError("local solubility undecided: node budget exhausted");
      }
    }
    level = std::move(children);
    pk = next;
  }
  if (level.empty()) return false;
  throw PrecisionError("local solubility undecided at depth " + std::to_string(depth));
}

PadicPoint find_smooth_point(const DiagonalQuartic& d, long p, long precision, const ValuationConstraints& constraints) {
  if (!is_prime(p)) throw InputError("p must be prime");
  for (const auto& c : constraints)
    if (c && (*c < 0 || *c > precision)) throw MathError("valuation constraint beyond the search depth");
  const auto e = d.signed_coefficients();
  const long limit = 40;
  auto candidate = [&](std::size_t k, long i) -> Integer {
    if (!constraints[k]) return Integer(i + 1);
    // i-th unit times p^v
    long u = i + 1 + i / (p - 1);
    return ipow(p, *constraints[k]) * u;
  };
  for (long s = 0; s <= 3 * limit; ++s) {
    for (std::size_t j = 0; j < 4; ++j) {
      std::array<std::size_t, 3> others{};
      for (std::size_t k = 0, o = 0; k < 4; ++k)
        if (k != j) others[o++] = k;
      for (long i0 = 0; i0 <= std::min(s, limit); ++i0)
        for (long i1 = 0; i1 <= std::min(s - i0, limit); ++i1) {
          const long i2 = s - i0 - i1;
          if (i2 > limit) continue;
          std::array<Integer, 4> v;
          v[others[0]] = candidate(others[0], i0);
          v[others[1]] = candidate(others[1], i1);
          v[others[2]] = candidate(others[2], i2);
          Rational c = 0;
          for (std::size_t k : others) c += e[k] * Rational(pow4(v[k]));
          if (c == 0) continue;
          Rational q = -c / e[j];
          const long vq = valuation(q, p);
          if (vq % 4 != 0) continue;
          if (constraints[j] && vq / 4 != *constraints[j]) continue;
          if (!is_local_fourth_power(q, p, precision)) continue;
          PadicPoint pt;
          for (std::size_t k : others) pt.v[k] = Padic::from_integer(v[k], p, precision);
          pt.v[j] = fourth_root(Padic::from_rational(q, p, precision + 8), precision);
          Padic f = f_value(d, pt);
          if (f.is_zero() || f.relative_precision() < 4) continue;
          return pt;
        }
    }
  }
  throw MathError("no point meeting the constraints within the search limits");
}

std::vector<PadicPoint> sample_points(const DiagonalQuartic& d, long p, std::size_t count, std::uint64_t seed,
                                      long precision) {
  std::mt19937_64 rng(seed);
  const auto e = d.signed_coefficients();
  const long span = p * p * p;
  std::uniform_int_distribution<long> unit(1, span - 1), val(0, 4), index(0, 3), sign(0, 1);
  std::vector<PadicPoint> out;
  for (std::size_t attempt = 0; out.size() < count; ++attempt) {
    if (attempt > 2000 * (count + 1)) throw MathError("could not sample enough points");
    const std::size_t j = static_cast<std::size_t>(index(rng));
    std::array<Integer, 4> v;
    Rational c = 0;
    for (std::size_t k = 0; k < 4; ++k) {
      if (k == j) continue;
      long u = unit(rng);
      if (u % p == 0) ++u;
      const long vk = std::max(0L, val(rng) - 2);
      v[k] = ipow(p, vk) * u * (sign(rng) ? -1 : 1);
      c += e[k] * Rational(pow4(v[k]));
    }
    if (c == 0) continue;
    Rational q = -c / e[j];
    if (valuation(q, p) % 4 != 0 || !is_local_fourth_power(q, p, precision)) continue;
    PadicPoint pt;
    for (std::size_t k = 0; k < 4; ++k)
      if (k != j) pt.v[k] = Padic::from_integer(v[k], p, precision);
    pt.v[j] = fourth_root(Padic::from_rational(q, p, precision + 8), precision);
    if (sign(rng)) pt.v[j] = -pt.v[j];
    Padic f = f_value(d, pt);
    if (f.is_zero() || f.relative_precision() < 4) continue;
    out.push_back(pt);
  }
  return out;
}

}  // namespace qb
