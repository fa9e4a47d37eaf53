#pragma once

#include <string>
#include <vector>

#include "qb/number.hpp"
#include "qb/polynomial.hpp"

namespace qb {

inline constexpr long kDefaultPrecision = 32;

/// Integer p^k.
Integer ipow(long p, long k);

/// An element of Q_p known to finite precision.
///
/// A nonzero element is p^valuation * unit with unit known modulo
/// p^relative_precision. Zero is never exact unless it came from an exact
/// rational zero; otherwise it means "divisible by p^absolute_precision" and is
/// reported by is_zero() but not by is_exact_zero().
class Padic {
 public:
  static constexpr long kExact = 1L << 40;

  Padic() = default;

  static Padic from_rational(const Rational& q, long p, long precision);
  static Padic from_integer(const Integer& n, long p, long precision);
  static Padic zero(long p, long absolute_precision = kExact);

  long prime() const { return p_; }
  bool is_zero() const { return zero_; }
  bool is_exact_zero() const { return zero_ && val_ >= kExact; }

  /// Throws PrecisionError for an element indistinguishable from zero.
  long valuation() const;
  /// The valuation, or for a zero element the power of p it is known to be
  /// divisible by.
  long lower_valuation() const { return val_; }
  long relative_precision() const { return zero_ ? 0 : prec_; }
  long absolute_precision() const { return zero_ ? val_ : val_ + prec_; }
  const Integer& unit() const { return unit_; }

  /// Representative p^v * unit as a rational (exact zero for zero elements).
  Rational to_rational() const;
  /// The value modulo p^k; requires lower_valuation() >= 0 and enough digits.
  Integer residue(long k) const;

  Padic with_absolute_precision(long a) const;
  Padic with_relative_precision(long r) const;

  /// A constant in the same field, carried with enough digits not to limit
  /// arithmetic against this element.
  Padic constant(const Rational& q) const;

  Padic operator-() const;
  Padic& operator+=(const Padic& o) { return *this = *this + o; }
  Padic& operator-=(const Padic& o) { return *this = *this - o; }
  Padic& operator*=(const Padic& o) { return *this = *this * o; }
  Padic& operator/=(const Padic& o) { return *this = *this / o; }

  friend Padic operator+(const Padic& x, const Padic& y);
  friend Padic operator-(const Padic& x, const Padic& y) { return x + (-y); }
  friend Padic operator*(const Padic& x, const Padic& y);
  friend Padic operator/(const Padic& x, const Padic& y);

  /// True when x - y is indistinguishable from zero.
  bool equals_at_precision(const Padic& o) const { return (*this - o).is_zero(); }

  std::string str() const;

 private:
  long p_ = 0;
  bool zero_ = true;
  long val_ = kExact;
  Integer unit_ = 0;
  long prec_ = 0;
};

inline bool is_zero(const Padic& x) { return x.is_zero(); }
inline Padic lift_constant(const Padic& like, const Rational& c) { return like.constant(c); }

using PadicPolynomial = Polynomial<Padic>;

PadicPolynomial to_padic(const Polynomial<Rational>& f, long p, long precision);

/// Newton lift of a simple root. Requires val f(seed) > 2 val f'(seed).
Padic hensel_root(const PadicPolynomial& f, const Padic& seed, long precision);

/// All roots of f in Q_p. Roots of negative valuation are found on the
/// reversed polynomial. Throws PrecisionError on a root cluster that stays
/// unresolved at the available precision.
std::vector<Padic> padic_poly_roots(const PadicPolynomial& f, long p, long precision);

/// Roots in Z_p only.
std::vector<Padic> padic_integral_roots(const PadicPolynomial& f, long p);

/// i with i^2 = -1; the branch with the least positive residue mod p, which for
/// p = 5 is the one with i = 2 mod 5.
Padic sqrt_minus_one(long p, long precision);

bool is_fourth_power(const Padic& x);
bool in_neg4_coset(const Padic& x);
bool is_square(const Padic& x);

/// A fourth root of x (x must be a fourth power). The branch is the one whose
/// unit part has the least positive seed residue.
Padic fourth_root(const Padic& x, long precision);
Padic square_root(const Padic& x, long precision);

}  // namespace qb
