#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace qb {

using Integer = mpz_class;
using Rational = mpq_class;

inline constexpr std::uint64_t kDefaultTrialBound = 1'000'000;

/// sign * prod p^e. Exponents are nonzero.
struct FactoredRational {
  int sign = 1;
  std::map<Integer, long> factors;

  Rational value() const;
  long exponent(const Integer& p) const;
};

/// Trial division up to `bound`. A leftover cofactor is accepted only when it
/// is provably prime (below bound^2) or a probable prime; otherwise throws
/// MathError.
FactoredRational factor(const Rational& q, std::uint64_t bound = kDefaultTrialBound);
std::map<Integer, long> factor_integer(Integer n, std::uint64_t bound = kDefaultTrialBound);

/// p-adic valuation of a nonzero rational.
long valuation(const Rational& q, long p);
long valuation(const Integer& n, long p);

bool is_prime(long p);

bool is_rational_fourth_power(const Rational& q);

// <-4>Q^{*4} = Q^{*4} u (-4)Q^{*4}, since (-4)^2 = 2^4 lies in Q^{*4}.
bool in_neg4_coset_global(const Rational& q);

/// Membership of a unit-carrying rational in the local coset groups over Q_p.
/// `precision` bounds how many p-adic digits of the unit may be consulted;
/// p = 2 needs 5 digits (Hensel for t^4 at an odd seed).
bool is_local_fourth_power(const Rational& q, long p, long precision);
bool in_neg4_coset_local(const Rational& q, long p, long precision);

/// A projective change of variables for diagonal quartics
///   sum_j t_j v'_j^4 = mu * sum_i e_i v_i^4,   v'_j = lambda_j * v_{perm[j]},
/// where e = (a, b, -c, -d) is the signed coefficient vector of the source and
/// t the one of the target. Scalars are taken in the field `Scalar`.
template <class Scalar>
struct SurfaceTransform {
  std::array<int, 4> perm{0, 1, 2, 3};
  std::array<Scalar, 4> lambda;
  Rational mu = 1;
};

struct CoefficientQuadruple {
  std::array<Integer, 4> coeffs;  // a, b, c, d
  std::array<Rational, 4> original;
  SurfaceTransform<Rational> transform;

  const Integer& a() const { return coeffs[0]; }
  const Integer& b() const { return coeffs[1]; }
  const Integer& c() const { return coeffs[2]; }
  const Integer& d() const { return coeffs[3]; }
};

/// Integral, fourth-power-free, gcd 1. Throws MathError on a zero coefficient.
CoefficientQuadruple normalize_coefficients(const std::array<Rational, 4>& abcd,
                                            std::uint64_t bound = kDefaultTrialBound);

/// Largest r >= 0 with r^4 <= n, and whether equality holds.
bool exact_fourth_root(const Integer& n, Integer& root);

std::string to_string(const Rational& q);
Rational parse_rational(const std::string& s);

}  // namespace qb
