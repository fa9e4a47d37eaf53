#pragma once

#include <array>
#include <string>

#include "qb/elliptic.hpp"
#include "qb/number.hpp"
#include "qb/padic.hpp"

namespace qb {

/// ax^4 + by^4 = cz^4 + dw^4 with normalized coefficients.
struct DiagonalQuartic {
  CoefficientQuadruple coeffs;

  static DiagonalQuartic from_rationals(const std::array<Rational, 4>& abcd);
  Rational a() const { return Rational(coeffs.a()); }
  Rational b() const { return Rational(coeffs.b()); }
  Rational c() const { return Rational(coeffs.c()); }
  Rational d() const { return Rational(coeffs.d()); }
  /// (a, b, -c, -d)
  std::array<Rational, 4> signed_coefficients() const;
  std::string str() const;
};

/// Builds a quartic from already normalized integers without touching them.
DiagonalQuartic quartic_of(long a, long b, long c, long d);

template <class K>
struct SurfacePoint {
  std::array<K, 4> v;
  const K& x() const { return v[0]; }
  const K& y() const { return v[1]; }
  const K& z() const { return v[2]; }
  const K& w() const { return v[3]; }
};

using PadicPoint = SurfacePoint<Padic>;
using RationalPoint = SurfacePoint<Rational>;

PadicPoint to_padic_point(const RationalPoint& l, long p, long precision);
std::string to_string(const PadicPoint& l, long digits = 0);
std::string to_string(const RationalPoint& l);

/// ax^4 + by^4 - cz^4 - dw^4.
template <class K>
K surface_residual(const DiagonalQuartic& d, const SurfacePoint<K>& l);

/// Exact over Q; at the certified precision for p-adic points.
template <class K>
bool on_surface(const DiagonalQuartic& d, const SurfacePoint<K>& l);

/// f = ax^4 + by^4.
template <class K>
K f_value(const DiagonalQuartic& d, const SurfacePoint<K>& l);

/// The twisted curves y^2 = x^3 - m1 x and y^2 = x^3 - m2 x with
/// m1 = 4ab f^2, m2 = 4cd f^2 and the points
///   P = (-4ab x^2 y^2, 4ab xy (ax^4 - by^4)),
///   Q = (-4cd z^2 w^2, 4cd zw (cz^4 - dw^4)).
template <class K>
struct TwistData {
  K f;
  K m1;
  K m2;
  ECPoint<K> p;
  ECPoint<K> q;
};

/// Requires xyzw * f != 0.
template <class K>
TwistData<K> twist_data(const DiagonalQuartic& d, const SurfacePoint<K>& l);

/// A point (X, T, Y) on Y^2 = (X^3 - 4ab X)(T^3 - 4cd T).
template <class K>
struct KummerPoint {
  K x;
  K t;
  K y;
};

/// X = -4ab x^2 y^2 / f, T = -4cd z^2 w^2 / f,
/// Y = 16abcd xyzw (ax^4 - by^4)(cz^4 - dw^4) / f^3.
template <class K>
KummerPoint<K> kummer_image(const DiagonalQuartic& d, const SurfacePoint<K>& l);

/// (P, Q) -> (x_P / f, x_Q / f, y_P y_Q / f^3).
template <class K>
KummerPoint<K> product_to_kummer(const TwistData<K>& t);

/// Is (-4ab x^2 y^2, 4ab xy (ax^4 - by^4)) divisible by ell on
/// Y^2 = X^3 - 4ab f^2 X over Q_p, with f = ax^4 + by^4.
template <class K>
DivisibilityTranscript s_test(const K& a, const K& b, const K& x, const K& y, long p, int ell,
                              long precision = kDefaultPrecision);

/// A local change of variables onto one of the reference surfaces
///   ell = 5: A_n = [1,-1,n,-5n^3], B_n = [1,-1,25n,-125n^3], C = [2,2,4,5]
///   ell = 3: A = [1,1,1,+-27], B = [1,-1,3,+-9], C = [1,1,2,+-27]
/// found by exhaustive search over variable permutations and the classes of
/// the common constant in Q_ell^* / Q_ell^{*4}.
struct LocalNormalForm {
  int ell = 0;
  std::string family;      // "A", "B" or "C"
  long parameter = 0;      // n for A_n and B_n
  DiagonalQuartic target;  // the reference surface
  SurfaceTransform<Padic> transform;

  std::string label() const;
  /// Point of the source surface to the reference surface.
  PadicPoint forward(const PadicPoint& l) const;
  PadicPoint backward(const PadicPoint& l) const;
};

/// Throws MathError when the classifying condition fails at ell or when no
/// reference surface matches.
LocalNormalForm local_normal_form(const DiagonalQuartic& d, int ell, long precision = kDefaultPrecision);

/// m lies in (1+2i)Q_5^{*4} or (1-2i)Q_5^{*4}.
bool in_forbidden_class(const Padic& m);

/// Checks the per-point hypotheses of the evaluation criterion: for ell = 5
/// neither m1 nor m2 lies in (1 +- 2i)Q_5^{*4}; for ell = 3,
/// -3 m1 m2 lies in <-4>Q_3^{*4}. Throws MathError on violation.
void check_guards(const TwistData<Padic>& t, int ell);

}  // namespace qb
