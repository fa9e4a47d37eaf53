#include "qb/elliptic.hpp"

#include <sstream>
#include <vector>

#include "qb/errors.hpp"

namespace qb {

namespace {

long low_valuation(const Rational& q, long p) { return q == 0 ? Padic::kExact : valuation(q, p); }
long low_valuation(const Padic& x, long) { return x.lower_valuation(); }

void check_margin(const Rational&) {}
void check_margin(const Padic& x) {
  if (!x.is_zero() && x.relative_precision() < 4)
    throw PrecisionError("valuation certified with fewer than 4 digits of margin");
}

long unit_residue_of(const Rational& q, long p) {
  long v = valuation(q, p);
  Rational u = q;
  if (v >= 0) u /= Rational(ipow(p, v)); else u *= Rational(ipow(p, -v));
  u.canonicalize();
  Integer pm = p;
  Integer inv;
  Integer den = u.get_den();
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), pm.get_mpz_t());
  Integer r;
  Integer num = u.get_num();
  mpz_fdiv_r(r.get_mpz_t(), Integer(num * inv).get_mpz_t(), pm.get_mpz_t());
  return r.get_si();
}
long unit_residue_of(const Padic& x, long p) {
  Integer r = x.unit() % Integer(p);
  return r.get_si();
}

std::string printable(const Rational& q) { return q.get_str(); }
std::string printable(const Padic& x) { return x.str(); }

long floor_div4(long v) { return v >= 0 ? v / 4 : -((-v + 3) / 4); }

template <class K>
K times_p_power(const K& ref, const K& x, long p, long e) {
  Rational c = e >= 0 ? Rational(ipow(p, e)) : Rational(Rational(1) / Rational(ipow(p, -e)));
  return K(x * lift_constant(ref, c));
}

template <class K>
K constant(const K& ref, long v) {
  return lift_constant(ref, Rational(v));
}

// Level of a point already on the minimal model.
template <class K>
FiltrationLevel level_on_minimal(const ReductionProfile& profile, const ECPoint<K>& r) {
  if (r.infinity) return FiltrationLevel::identity();
  const K& x = r.x;
  if (!is_zero(x)) {
    check_margin(x);
    long v = low_valuation(x, profile.p);
    if (v < 0) {
      if (v % 2 != 0) throw MathError("point is not on the curve (odd negative valuation of x)");
      return {true, -v / 2};
    }
    if (profile.kind == ReductionKind::Additive && v > 0) return FiltrationLevel::not_in_e0();
    return {true, 0};
  }
  long a = low_valuation(x, profile.p);
  if (a < Padic::kExact && a < 5) throw PrecisionError("x-coordinate too close to zero to certify its reduction");
  if (profile.kind == ReductionKind::Additive) return FiltrationLevel::not_in_e0();
  return {true, 0};
}

// y^{e} f(x), with y^2 = x^3 - m x.
template <class K>
struct YPoly {
  Polynomial<K> f;
  int e = 0;
};

template <class K>
YPoly<K> ymul(const YPoly<K>& a, const YPoly<K>& b) {
  return {a.f * b.f, a.e + b.e};
}

template <class K>
YPoly<K> lower_to(const YPoly<K>& a, int e, const Polynomial<K>& cubic) {
  YPoly<K> r = a;
  while (r.e > e) {
    r.f = r.f * cubic;
    r.e -= 2;
  }
  return r;
}

template <class K>
YPoly<K> ysub(const YPoly<K>& a, const YPoly<K>& b, const Polynomial<K>& cubic) {
  if ((a.e - b.e) % 2 != 0) throw std::logic_error("division polynomial parity mismatch");
  int e = std::min(a.e, b.e);
  YPoly<K> la = lower_to(a, e, cubic);
  YPoly<K> lb = lower_to(b, e, cubic);
  return {la.f - lb.f, e};
}

template <class K>
std::vector<YPoly<K>> psi_table(int n_max, const K& m) {
  const K zero = constant(m, 0);
  const K one = constant(m, 1);
  auto poly = [&](std::vector<long> c) {
    std::vector<K> out;
    for (long v : c) out.push_back(constant(m, v));
    return Polynomial<K>(std::move(out));
  };
  const K m2 = K(m * m);
  const K m3 = K(m2 * m);
  Polynomial<K> cubic(std::vector<K>{zero, K(-m), zero, one});

  std::vector<YPoly<K>> psi(static_cast<std::size_t>(std::max(n_max, 4) + 1));
  psi[0] = {poly({0}), 0};
  psi[1] = {poly({1}), 0};
  psi[2] = {poly({2}), 1};
  // 3x^4 - 6m x^2 - m^2
  psi[3] = {Polynomial<K>(std::vector<K>{K(-m2), zero, K(constant(m, -6) * m), zero, constant(m, 3)}), 0};
  // 4y (x^6 - 5m x^4 - 5m^2 x^2 + m^3)
  psi[4] = {Polynomial<K>(std::vector<K>{K(constant(m, 4) * m3), zero, K(constant(m, -20) * m2), zero,
                                         K(constant(m, -20) * m), zero, constant(m, 4)}),
            1};
  for (int n = 5; n <= n_max; ++n) {
    const int k = n / 2;
    if (n % 2 == 1) {
      YPoly<K> a = ymul(psi[k + 2], ymul(psi[k], ymul(psi[k], psi[k])));
      YPoly<K> b = ymul(psi[k - 1], ymul(psi[k + 1], ymul(psi[k + 1], psi[k + 1])));
      psi[n] = ysub(a, b, cubic);
    } else {
      YPoly<K> a = ymul(psi[k + 2], ymul(psi[k - 1], psi[k - 1]));
      YPoly<K> b = ymul(psi[k - 2], ymul(psi[k + 1], psi[k + 1]));
      YPoly<K> bracket = ymul(psi[k], ysub(a, b, cubic));
      if (bracket.e < 1) throw std::logic_error("division polynomial recursion lost its y factor");
      bracket.e -= 1;
      bracket.f = bracket.f * lift_constant(m, Rational(1, 2));
      psi[n] = bracket;
    }
    psi[n] = lower_to(psi[n], psi[n].e % 2, cubic);
  }
  return psi;
}

}  // namespace

std::string FiltrationLevel::str() const {
  if (!in_e0) return "not-in-E0";
  if (level >= kInfinite) return "identity";
  return std::to_string(level);
}

Padic as_padic(const Rational& q, long p, long precision) {
  if (q == 0) return Padic::zero(p);
  return Padic::from_rational(q, p, precision);
}

Padic as_padic(const Padic& x, long p, long) {
  if (x.prime() != p && x.prime() != 0) throw MathError("p-adic element over the wrong prime");
  return x;
}

template <class K>
bool CurveEm<K>::contains(const ECPoint<K>& r) const {
  if (r.infinity) return true;
  K lhs = K(r.y * r.y);
  K rhs = K(K(K(r.x * r.x) * r.x) - K(m * r.x));
  return is_zero(K(lhs - rhs));
}

template <class K>
ECPoint<K> CurveEm<K>::negate(const ECPoint<K>& r) const {
  if (r.infinity) return r;
  return ECPoint<K>::affine(r.x, K(-r.y));
}

template <class K>
ECPoint<K> point_double(const CurveEm<K>& e, const ECPoint<K>& r) {
  if (r.infinity || is_zero(r.y)) return ECPoint<K>::at_infinity();
  K num = K(K(constant(e.m, 3) * K(r.x * r.x)) - e.m);
  K lambda = K(num / K(constant(e.m, 2) * r.y));
  K x3 = K(K(lambda * lambda) - K(constant(e.m, 2) * r.x));
  K y3 = K(K(lambda * K(r.x - x3)) - r.y);
  return ECPoint<K>::affine(x3, y3);
}

template <class K>
ECPoint<K> point_add(const CurveEm<K>& e, const ECPoint<K>& r1, const ECPoint<K>& r2) {
  if (r1.infinity) return r2;
  if (r2.infinity) return r1;
  K dx = K(r2.x - r1.x);
  if (is_zero(dx)) {
    if (is_zero(K(r1.y + r2.y))) return ECPoint<K>::at_infinity();
    if (is_zero(K(r1.y - r2.y))) return point_double(e, r1);
    throw PrecisionError("points with equal x-coordinates but unrelated y-coordinates");
  }
  K lambda = K(K(r2.y - r1.y) / dx);
  K x3 = K(K(K(lambda * lambda) - r1.x) - r2.x);
  K y3 = K(K(lambda * K(r1.x - x3)) - r1.y);
  return ECPoint<K>::affine(x3, y3);
}

template <class K>
ECPoint<K> scalar_mul(const CurveEm<K>& e, long n, const ECPoint<K>& r) {
  ECPoint<K> base = n < 0 ? e.negate(r) : r;
  unsigned long k = static_cast<unsigned long>(n < 0 ? -n : n);
  ECPoint<K> acc = ECPoint<K>::at_infinity();
  while (k) {
    if (k & 1UL) acc = point_add(e, acc, base);
    k >>= 1;
    if (k) base = point_double(e, base);
  }
  return acc;
}

long count_smooth_points(long u_mod_p, long p) {
  std::vector<long> squares(static_cast<std::size_t>(p), 0);
  for (long y = 0; y < p; ++y) squares[static_cast<std::size_t>((y * y) % p)] += 1;
  long u = ((u_mod_p % p) + p) % p;
  long total = 1;
  for (long x = 0; x < p; ++x) {
    Integer rhs = Integer(x) * x * x - Integer(u) * x;
    Integer r;
    Integer pm = p;
    mpz_fdiv_r(r.get_mpz_t(), rhs.get_mpz_t(), pm.get_mpz_t());
    total += squares[static_cast<std::size_t>(r.get_si())];
  }
  if (u == 0) total -= 1;  // the cusp (0,0)
  return total;
}

template <class K>
ReductionProfile reduction_profile(const K& m, long p) {
  if (p == 2) throw MathError("no reduction profile at p = 2");
  if (!is_prime(p)) throw InputError("p must be prime");
  if (is_zero(m)) throw PrecisionError("curve coefficient indistinguishable from zero");
  ReductionProfile prof;
  prof.p = p;
  const long v = low_valuation(m, p);
  prof.scaling_exponent = floor_div4(v);
  prof.minimal_valuation = v - 4 * prof.scaling_exponent;
  const K m0 = times_p_power(m, m, p, -4 * prof.scaling_exponent);
  prof.minimal_m = printable(m0);
  prof.unit_residue = unit_residue_of(m0, p);
  prof.kind = prof.minimal_valuation == 0 ? ReductionKind::Good : ReductionKind::Additive;
  prof.smooth_count = count_smooth_points(prof.kind == ReductionKind::Good ? prof.unit_residue : 0, p);
  switch (prof.minimal_valuation) {
    case 0: prof.component_order = 1; break;
    case 2: {
      Integer u = prof.unit_residue;
      Integer pm = p;
      prof.component_order = mpz_legendre(u.get_mpz_t(), pm.get_mpz_t()) == 1 ? 4 : 2;
      break;
    }
    default: prof.component_order = 2; break;
  }
  prof.exceptional = p == 5 && prof.minimal_valuation == 1 && prof.unit_residue == 3;
  return prof;
}

template <class K>
K minimal_coefficient(const ReductionProfile& profile, const K& m) {
  return times_p_power(m, m, profile.p, -4 * profile.scaling_exponent);
}

template <class K>
ECPoint<K> to_minimal_model(const ReductionProfile& profile, const ECPoint<K>& r) {
  if (r.infinity) return r;
  const long k = profile.scaling_exponent;
  return ECPoint<K>::affine(times_p_power(r.x, r.x, profile.p, -2 * k), times_p_power(r.x, r.y, profile.p, -3 * k));
}

template <class K>
FiltrationLevel filtration_level(const ReductionProfile& profile, const ECPoint<K>& r) {
  return level_on_minimal(profile, to_minimal_model(profile, r));
}

template <class K>
DivisionPolynomials<K> division_polynomials(int ell, const K& m) {
  if (ell != 3 && ell != 5) throw InputError("division polynomials are provided for ell = 3, 5");
  auto psi = psi_table(ell + 1, m);
  const K zero = constant(m, 0);
  const K one = constant(m, 1);
  Polynomial<K> cubic(std::vector<K>{zero, K(-m), zero, one});
  Polynomial<K> x(std::vector<K>{zero, one});
  YPoly<K> xpsi2{x * psi[ell].f * psi[ell].f, 0};
  YPoly<K> cross = ymul(psi[ell + 1], psi[ell - 1]);
  YPoly<K> phi = ysub(xpsi2, cross, cubic);
  phi = lower_to(phi, 0, cubic);
  return {psi[ell].f.trimmed(), phi.f.trimmed()};
}

template <class K>
Polynomial<K> preimage_polynomial(int ell, const K& m, const K& x_r) {
  DivisionPolynomials<K> dp = division_polynomials(ell, m);
  Polynomial<K> sq = dp.psi * dp.psi;
  return (dp.phi - sq * x_r).trimmed();
}

template <class K>
bool has_rational_torsion(const K& m, int ell, long p, long precision) {
  Padic mp = as_padic(m, p, precision);
  DivisionPolynomials<Padic> dp = division_polynomials(ell, mp);
  for (const Padic& t : padic_poly_roots(dp.psi, p, precision)) {
    Padic y2 = t * t * t - mp * t;
    if (y2.is_zero()) throw PrecisionError("torsion point with undetermined y-coordinate");
    if (is_square(y2)) return true;
  }
  return false;
}

template <class K>
bool is_divisible_oracle(const K& m, const ECPoint<K>& r, int ell, long p, long precision) {
  if (ell != 3 && ell != 5) throw InputError("ell must be 3 or 5");
  CurveEm<K> e{m};
  if (r.infinity || scalar_mul(e, 2L * ell, r).infinity)
    throw MathError("oracle precondition violated: 2*ell*R must be nonzero");
  if (is_zero(m)) throw PrecisionError("curve coefficient indistinguishable from zero");
  ReductionProfile scale;
  scale.p = p;
  scale.scaling_exponent = floor_div4(low_valuation(m, p));
  const K m0 = minimal_coefficient(scale, m);
  const ECPoint<K> r0 = to_minimal_model(scale, r);
  // Preimage x-coordinates of nearby points can agree to many digits; the
  // search is retried with more digits before giving up.
  for (long n = precision;; n *= 2) {
    try {
      Padic mp = as_padic(m0, p, n);
      Padic xp = as_padic(r0.x, p, n);
      if (xp.is_zero() && !xp.is_exact_zero()) throw PrecisionError("x-coordinate indistinguishable from zero");
      return !padic_poly_roots(preimage_polynomial(ell, mp, xp), p, n).empty();
    } catch (const PrecisionError&) {
      if (n >= 4 * precision) throw;
    }
  }
}

namespace {

template <class K>
DivisibilityTranscript transcript_at(const K& m, const ECPoint<K>& r, int ell, long p, long precision) {
  DivisibilityTranscript t;
  if (r.infinity) {
    t.divisible = true;
    t.method = "identity";
    return t;
  }
  if (p == 2) {
    t.divisible = true;
    t.method = "p=2: E^m(Q_2) is divisible by every odd prime";
    return t;
  }
  ReductionProfile prof = reduction_profile(m, p);
  t.profile = prof;
  const K m0 = minimal_coefficient(prof, m);
  const ECPoint<K> r0 = to_minimal_model(prof, r);
  CurveEm<K> e0{m0};
  auto oracle = [&](const std::string& why) {
    t.method = "oracle (" + why + ")";
    t.divisible = is_divisible_oracle(m0, r0, ell, p, precision);
  };
  if (p == ell) {
    if (prof.kind == ReductionKind::Good) {
      if (prof.smooth_count % ell == 0) {
        oracle("ell divides the number of points of the reduction");
        return t;
      }
      // [E : E_1] = n is prime to ell and ell E_1 = E_2.
      t.multiplier = prof.smooth_count;
      t.required_level = 2;
      t.method = "structural: good reduction";
    } else {
      if (prof.exceptional) {
        oracle("exceptional additive case m0 = 15 mod 25");
        return t;
      }
      // [E : E_0] divides 4, E_0 = Z_p and ell E_0 = E_1.
      t.multiplier = 4;
      t.required_level = 1;
      t.method = "structural: additive reduction";
    }
    ECPoint<K> multiple = scalar_mul(e0, t.multiplier, r0);
    t.level = level_on_minimal(prof, multiple);
    t.divisible = t.level->at_least(t.required_level);
    return t;
  }
  if (!has_rational_torsion(m0, ell, p, precision)) {
    t.divisible = true;
    t.method = "structural: no Q_p-rational ell-torsion and E_1 is pro-p";
    return t;
  }
  oracle("Q_p-rational ell-torsion present");
  return t;
}

}  // namespace

template <class K>
DivisibilityTranscript divisibility_transcript(const K& m, const ECPoint<K>& r, int ell, long p, long precision) {
  if (ell != 3 && ell != 5) throw InputError("ell must be 3 or 5");
  if (!is_prime(p)) throw InputError("p must be prime");
  try {
    return transcript_at(m, r, ell, p, precision);
  } catch (const PrecisionError&) {
    return transcript_at(m, r, ell, p, 2 * precision);
  }
}

template <class K>
bool is_divisible_by_ell(const K& m, const ECPoint<K>& r, int ell, long p, long precision) {
  return divisibility_transcript(m, r, ell, p, precision).divisible;
}

#define QB_INSTANTIATE(K)                                                                                  \
  template struct CurveEm<K>;                                                                             \
  template ECPoint<K> point_add(const CurveEm<K>&, const ECPoint<K>&, const ECPoint<K>&);                 \
  template ECPoint<K> point_double(const CurveEm<K>&, const ECPoint<K>&);                                 \
  template ECPoint<K> scalar_mul(const CurveEm<K>&, long, const ECPoint<K>&);                             \
  template ReductionProfile reduction_profile(const K&, long);                                            \
  template K minimal_coefficient(const ReductionProfile&, const K&);                                      \
  template ECPoint<K> to_minimal_model(const ReductionProfile&, const ECPoint<K>&);                       \
  template FiltrationLevel filtration_level(const ReductionProfile&, const ECPoint<K>&);                  \
  template DivisionPolynomials<K> division_polynomials(int, const K&);                                    \
  template Polynomial<K> preimage_polynomial(int, const K&, const K&);                                    \
  template bool has_rational_torsion(const K&, int, long, long);                                          \
  template bool is_divisible_oracle(const K&, const ECPoint<K>&, int, long, long);                        \
  template DivisibilityTranscript divisibility_transcript(const K&, const ECPoint<K>&, int, long, long);  \
  template bool is_divisible_by_ell(const K&, const ECPoint<K>&, int, long, long);

QB_INSTANTIATE(Rational)
QB_INSTANTIATE(Padic)

#undef QB_INSTANTIATE

}  // namespace qb
