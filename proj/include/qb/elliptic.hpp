#pragma once

#include <optional>
#include <string>

#include "qb/number.hpp"
#include "qb/padic.hpp"
#include "qb/polynomial.hpp"

namespace qb {

template <class K>
struct ECPoint {
  bool infinity = true;
  K x{};
  K y{};

  static ECPoint at_infinity() { return ECPoint{}; }
  static ECPoint affine(K x, K y) { return ECPoint{false, std::move(x), std::move(y)}; }
};

/// y^2 = x^3 - m x over K (Rational or Padic).
template <class K>
struct CurveEm {
  K m;

  bool contains(const ECPoint<K>& r) const;
  ECPoint<K> negate(const ECPoint<K>& r) const;
};

template <class K>
ECPoint<K> point_add(const CurveEm<K>& e, const ECPoint<K>& r1, const ECPoint<K>& r2);
template <class K>
ECPoint<K> point_double(const CurveEm<K>& e, const ECPoint<K>& r);
/// Double-and-add; negative n multiplies the negated point.
template <class K>
ECPoint<K> scalar_mul(const CurveEm<K>& e, long n, const ECPoint<K>& r);

enum class ReductionKind { Good, Additive };

struct ReductionProfile {
  long p = 0;
  long scaling_exponent = 0;    // m = p^{4k} m0
  long minimal_valuation = 0;   // val_p(m0), in 0..3
  long unit_residue = 0;        // unit part of m0 modulo p
  std::string minimal_m;        // printable m0
  ReductionKind kind = ReductionKind::Good;
  long smooth_count = 0;        // #smooth points of the reduction over F_p, infinity included
  int component_order = 1;      // [E : E_0]
  bool exceptional = false;     // p = 5 and m0 = 15 mod 25
};

/// p odd. Counts are by enumeration over F_p.
template <class K>
ReductionProfile reduction_profile(const K& m, long p);

/// Brute-force count of smooth F_p-points (infinity included) of
/// y^2 = x^3 - u x, for u given modulo p; u = 0 gives the cuspidal cubic.
long count_smooth_points(long u_mod_p, long p);

struct FiltrationLevel {
  static constexpr long kInfinite = 1L << 30;
  bool in_e0 = true;
  long level = 0;  // kInfinite for the identity

  static FiltrationLevel not_in_e0() { return {false, 0}; }
  static FiltrationLevel identity() { return {true, kInfinite}; }
  bool at_least(long n) const { return in_e0 && level >= n; }
  std::string str() const;
};

/// Point on the minimal model E^{m0} from a point on E^m (m = p^{4k} m0).
template <class K>
ECPoint<K> to_minimal_model(const ReductionProfile& profile, const ECPoint<K>& r);
template <class K>
K minimal_coefficient(const ReductionProfile& profile, const K& m);

/// Level of a point given on the original model E^m; the rescaling to the
/// minimal model is done here.
template <class K>
FiltrationLevel filtration_level(const ReductionProfile& profile, const ECPoint<K>& r);

template <class K>
struct DivisionPolynomials {
  Polynomial<K> psi;  // psi_ell as a polynomial in x (ell odd)
  Polynomial<K> phi;  // x o [ell] = phi / psi^2
};

template <class K>
DivisionPolynomials<K> division_polynomials(int ell, const K& m);

/// phi_ell(t) - x_R psi_ell(t)^2; its roots are the x-coordinates of the
/// points R' with ell R' = R. For ell = 3 this is
/// t^9 + 12 m t^7 + 30 m^2 t^5 - 36 m^3 t^3 + 9 m^4 t - x_R (3t^4 - 6mt^2 - m^2)^2.
template <class K>
Polynomial<K> preimage_polynomial(int ell, const K& m, const K& x_r);

struct DivisibilityTranscript {
  bool divisible = false;
  std::string method;
  std::optional<ReductionProfile> profile;
  long multiplier = 0;
  std::optional<FiltrationLevel> level;
  long required_level = 0;
};

/// Structural decision of R in ell E^m(Q_p) through the valuation filtration,
/// deferring to the division-polynomial oracle in the corner cases
/// (ell | n for good reduction, the exceptional additive case, Q_p-rational
/// ell-torsion for p != ell).
template <class K>
DivisibilityTranscript divisibility_transcript(const K& m, const ECPoint<K>& r, int ell, long p,
                                               long precision = kDefaultPrecision);
template <class K>
bool is_divisible_by_ell(const K& m, const ECPoint<K>& r, int ell, long p, long precision = kDefaultPrecision);

/// Independent check: does phi_ell - x_R psi_ell^2 have a root in Q_p?
/// Requires 2 ell R != 0, so that the y-coordinate of a preimage is rational
/// together with its x-coordinate.
template <class K>
bool is_divisible_oracle(const K& m, const ECPoint<K>& r, int ell, long p, long precision = kDefaultPrecision);

/// Whether E^m(Q_p) has a point of exact order ell.
template <class K>
bool has_rational_torsion(const K& m, int ell, long p, long precision = kDefaultPrecision);

Padic as_padic(const Rational& q, long p, long precision);
Padic as_padic(const Padic& x, long p, long precision);

}  // namespace qb
