#include "qb/quartic.hpp"

#include <algorithm>
#include <sstream>
#include <vector>

#include "qb/errors.hpp"

namespace qb {

namespace {

template <class K>
K pow4(const K& x) {
  K s = K(x * x);
  return K(s * s);
}

// A constant carried alongside the coordinates of l.
template <class K>
K coef(const SurfacePoint<K>& l, const Rational& c) {
  for (const K& t : l.v)
    if (!is_zero(t)) return lift_constant(t, c);
  return lift_constant(l.v[0], c);
}

void require_nonzero(const Rational& x, const char* what) {
  if (x == 0) throw MathError(std::string(what) + " vanishes; deform the point first");
}

void require_nonzero(const Padic& x, const char* what) {
  if (x.is_exact_zero()) throw MathError(std::string(what) + " vanishes; deform the point first");
  if (x.is_zero()) throw PrecisionError(std::string(what) + " is indistinguishable from zero");
}

long ell_free_part(const Integer& n, long ell) {
  Integer m = n;
  while (m % ell == 0) m /= ell;
  if (!m.fits_slong_p()) return 0;
  return m.get_si();
}

struct Reference {
  std::string family;
  long parameter;
  std::array<long, 4> abcd;
};

std::vector<Reference> references(const DiagonalQuartic& d, int ell) {
  std::vector<Reference> out;
  if (ell == 3) {
    for (long s : {27L, -27L}) out.push_back({"A", 0, {1, 1, 1, s}});
    for (long s : {9L, -9L}) out.push_back({"B", 0, {1, -1, 3, s}});
    for (long s : {27L, -27L}) out.push_back({"C", 0, {1, 1, 2, s}});
    return out;
  }
  std::vector<long> ns;
  auto add = [&](long n) {
    if (n != 0 && std::abs(n) < 1'000'000 && std::find(ns.begin(), ns.end(), n) == ns.end()) ns.push_back(n);
  };
  for (int idx : {2, 3, 0, 1}) {
    long q = ell_free_part(d.coeffs.coeffs[static_cast<std::size_t>(idx)], ell);
    add(q);
    add(-q);
  }
  for (long n = 1; n <= 4; ++n) add(n);
  for (long n : ns) {
    out.push_back({"A", n, {1, -1, n, -5 * n * n * n}});
    out.push_back({"B", n, {1, -1, 25 * n, -125 * n * n * n}});
  }
  out.push_back({"C", 0, {2, 2, 4, 5}});
  return out;
}

// Representatives of Q_ell^* / Q_ell^{*4}.
std::vector<Rational> fourth_power_classes(int ell) {
  std::vector<long> units = ell == 5 ? std::vector<long>{1, 2, 3, 4} : std::vector<long>{1, -1};
  std::vector<Rational> out;
  for (long j = 0; j < 4; ++j)
    for (long u : units) out.push_back(Rational(Integer(u) * ipow(ell, j)));
  return out;
}

}  // namespace

DiagonalQuartic DiagonalQuartic::from_rationals(const std::array<Rational, 4>& abcd) {
  return DiagonalQuartic{normalize_coefficients(abcd)};
}

std::array<Rational, 4> DiagonalQuartic::signed_coefficients() const { return {a(), b(), -c(), -d()}; }

std::string DiagonalQuartic::str() const {
  std::ostringstream os;
  os << "[" << coeffs.a().get_str() << "," << coeffs.b().get_str() << "," << coeffs.c().get_str() << ","
     << coeffs.d().get_str() << "]";
  return os.str();
}

DiagonalQuartic quartic_of(long a, long b, long c, long d) {
  DiagonalQuartic q;
  q.coeffs.coeffs = {Integer(a), Integer(b), Integer(c), Integer(d)};
  q.coeffs.original = {Rational(a), Rational(b), Rational(c), Rational(d)};
  q.coeffs.transform.lambda = {Rational(1), Rational(1), Rational(1), Rational(1)};
  return q;
}

PadicPoint to_padic_point(const RationalPoint& l, long p, long precision) {
  PadicPoint out;
  for (std::size_t i = 0; i < 4; ++i) out.v[i] = as_padic(l.v[i], p, precision);
  return out;
}

std::string to_string(const PadicPoint& l, long digits) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < 4; ++i) {
    if (i) os << ", ";
    const Padic& t = l.v[i];
    if (digits > 0 && !t.is_zero() && t.valuation() >= 0 && t.absolute_precision() >= digits)
      os << t.residue(digits).get_str() << " mod " << t.prime() << "^" << digits;
    else
      os << t.str();
  }
  os << ")";
  return os.str();
}

std::string to_string(const RationalPoint& l) {
  std::ostringstream os;
  os << "(" << l.v[0].get_str() << ", " << l.v[1].get_str() << ", " << l.v[2].get_str() << ", "
     << l.v[3].get_str() << ")";
  return os.str();
}

template <class K>
K surface_residual(const DiagonalQuartic& d, const SurfacePoint<K>& l) {
  auto e = d.signed_coefficients();
  K acc = coef(l, 0);
  for (std::size_t i = 0; i < 4; ++i) acc = K(acc + K(coef(l, e[i]) * pow4(l.v[i])));
  return acc;
}

template <class K>
bool on_surface(const DiagonalQuartic& d, const SurfacePoint<K>& l) {
  return is_zero(surface_residual(d, l));
}

template <class K>
K f_value(const DiagonalQuartic& d, const SurfacePoint<K>& l) {
  return K(K(coef(l, d.a()) * pow4(l.x())) + K(coef(l, d.b()) * pow4(l.y())));
}

template <class K>
TwistData<K> twist_data(const DiagonalQuartic& d, const SurfacePoint<K>& l) {
  for (std::size_t i = 0; i < 4; ++i) require_nonzero(l.v[i], "a coordinate");
  TwistData<K> t;
  t.f = f_value(d, l);
  require_nonzero(t.f, "f");
  const K f2 = K(t.f * t.f);
  const K ab4 = coef(l, 4 * d.a() * d.b());
  const K cd4 = coef(l, 4 * d.c() * d.d());
  t.m1 = K(ab4 * f2);
  t.m2 = K(cd4 * f2);
  const K x2y2 = K(K(l.x() * l.x()) * K(l.y() * l.y()));
  const K z2w2 = K(K(l.z() * l.z()) * K(l.w() * l.w()));
  const K diff1 = K(K(coef(l, d.a()) * pow4(l.x())) - K(coef(l, d.b()) * pow4(l.y())));
  const K diff2 = K(K(coef(l, d.c()) * pow4(l.z())) - K(coef(l, d.d()) * pow4(l.w())));
  t.p = ECPoint<K>::affine(K(-K(ab4 * x2y2)), K(K(ab4 * K(l.x() * l.y())) * diff1));
  t.q = ECPoint<K>::affine(K(-K(cd4 * z2w2)), K(K(cd4 * K(l.z() * l.w())) * diff2));
  return t;
}

template <class K>
KummerPoint<K> kummer_image(const DiagonalQuartic& d, const SurfacePoint<K>& l) {
  const K f = f_value(d, l);
  require_nonzero(f, "f");
  const K ab4 = coef(l, 4 * d.a() * d.b());
  const K cd4 = coef(l, 4 * d.c() * d.d());
  KummerPoint<K> k;
  k.x = K(K(-K(ab4 * K(K(l.x() * l.x()) * K(l.y() * l.y())))) / f);
  k.t = K(K(-K(cd4 * K(K(l.z() * l.z()) * K(l.w() * l.w())))) / f);
  const K diff1 = K(K(coef(l, d.a()) * pow4(l.x())) - K(coef(l, d.b()) * pow4(l.y())));
  const K diff2 = K(K(coef(l, d.c()) * pow4(l.z())) - K(coef(l, d.d()) * pow4(l.w())));
  const K xyzw = K(K(l.x() * l.y()) * K(l.z() * l.w()));
  k.y = K(K(K(K(coef(l, 16 * d.a() * d.b() * d.c() * d.d()) * xyzw) * diff1) * diff2) / K(K(f * f) * f));
  return k;
}

template <class K>
KummerPoint<K> product_to_kummer(const TwistData<K>& t) {
  if (t.p.infinity || t.q.infinity) throw MathError("twist points must be affine");
  return {K(t.p.x / t.f), K(t.q.x / t.f), K(K(t.p.y * t.q.y) / K(K(t.f * t.f) * t.f))};
}

template <class K>
DivisibilityTranscript s_test(const K& a, const K& b, const K& x, const K& y, long p, int ell, long precision) {
  require_nonzero(x, "x");
  require_nonzero(y, "y");
  const K x4 = pow4(x), y4 = pow4(y);
  const K f = K(K(a * x4) + K(b * y4));
  require_nonzero(f, "f");
  const K ab4 = K(K(lift_constant(a, Rational(4)) * a) * b);
  const K m = K(ab4 * K(f * f));
  ECPoint<K> pt = ECPoint<K>::affine(K(-K(ab4 * K(K(x * x) * K(y * y)))), K(K(ab4 * K(x * y)) * K(K(a * x4) - K(b * y4))));
  return divisibility_transcript(m, pt, ell, p, precision);
}

std::string LocalNormalForm::label() const {
  std::string s = family;
  if (family != "C" && ell == 5) s += "_" + std::to_string(parameter);
  return s + target.str();
}

PadicPoint LocalNormalForm::forward(const PadicPoint& l) const {
  PadicPoint out;
  for (std::size_t j = 0; j < 4; ++j)
    out.v[j] = transform.lambda[j] * l.v[static_cast<std::size_t>(transform.perm[j])];
  return out;
}

PadicPoint LocalNormalForm::backward(const PadicPoint& l) const {
  PadicPoint out;
  for (std::size_t j = 0; j < 4; ++j)
    out.v[static_cast<std::size_t>(transform.perm[j])] = l.v[j] / transform.lambda[j];
  return out;
}

LocalNormalForm local_normal_form(const DiagonalQuartic& d, int ell, long precision) {
  if (ell != 3 && ell != 5) throw InputError("ell must be 3 or 5");
  const Rational prod = d.a() * d.b() * d.c() * d.d();
  const Rational cond = ell == 5 ? Rational(125 * prod) : Rational(-3 * prod);
  if (!in_neg4_coset_local(cond, ell, precision))
    throw MathError("the surface carries no " + std::to_string(ell) + "-torsion class locally at " +
                    std::to_string(ell));
  const auto e = d.signed_coefficients();
  const auto classes = fourth_power_classes(ell);
  for (const Reference& ref : references(d, ell)) {
    const std::array<Rational, 4> t{Rational(ref.abcd[0]), Rational(ref.abcd[1]), Rational(-ref.abcd[2]),
                                    Rational(-ref.abcd[3])};
    std::array<int, 4> perm{0, 1, 2, 3};
    do {
      for (const Rational& mu : classes) {
        bool ok = true;
        for (std::size_t j = 0; j < 4 && ok; ++j)
          ok = is_local_fourth_power(mu * e[static_cast<std::size_t>(perm[j])] / t[j], ell, precision);
        if (!ok) continue;
        LocalNormalForm nf;
        nf.ell = ell;
        nf.family = ref.family;
        nf.parameter = ref.parameter;
        nf.target = quartic_of(ref.abcd[0], ref.abcd[1], ref.abcd[2], ref.abcd[3]);
        nf.transform.perm = perm;
        nf.transform.mu = mu;
        for (std::size_t j = 0; j < 4; ++j) {
          Rational r = mu * e[static_cast<std::size_t>(perm[j])] / t[j];
          nf.transform.lambda[j] = fourth_root(Padic::from_rational(r, ell, precision + 8), precision);
        }
        return nf;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  throw MathError("no reference surface matches " + d.str() + " over Q_" + std::to_string(ell));
}

bool in_forbidden_class(const Padic& m) {
  const long n = std::max(8L, m.relative_precision());
  Padic i = sqrt_minus_one(5, n + 4);
  Padic one = Padic::from_integer(1, 5, n + 4);
  Padic two = Padic::from_integer(2, 5, n + 4);
  for (const Padic& g : {one + two * i, one - two * i}) {
    Padic r = m / g;
    if (r.valuation() % 4 == 0 && is_fourth_power(r)) return true;
  }
  return false;
}

void check_guards(const TwistData<Padic>& t, int ell) {
  if (ell == 5) {
    if (in_forbidden_class(t.m1) || in_forbidden_class(t.m2))
      throw MathError("guard violated: a twist coefficient lies in (1+-2i)Q_5^{*4}");
    return;
  }
  Padic v = t.m1.constant(-3) * t.m1 * t.m2;
  if (!in_neg4_coset(v)) throw MathError("guard violated: -3 m1 m2 is not in <-4>Q_3^{*4}");
}

#define QB_INSTANTIATE(K)                                                                        \
  template K surface_residual(const DiagonalQuartic&, const SurfacePoint<K>&);                  \
  template bool on_surface(const DiagonalQuartic&, const SurfacePoint<K>&);                     \
  template K f_value(const DiagonalQuartic&, const SurfacePoint<K>&);                           \
  template TwistData<K> twist_data(const DiagonalQuartic&, const SurfacePoint<K>&);             \
  template KummerPoint<K> kummer_image(const DiagonalQuartic&, const SurfacePoint<K>&);         \
  template KummerPoint<K> product_to_kummer(const TwistData<K>&);                               \
  template DivisibilityTranscript s_test(const K&, const K&, const K&, const K&, long, int, long);

QB_INSTANTIATE(Rational)
QB_INSTANTIATE(Padic)

#undef QB_INSTANTIATE

}  // namespace qb
