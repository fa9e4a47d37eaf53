#include "qb/padic.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "qb/errors.hpp"

namespace qb {

Integer ipow(long p, long k) {
  if (k < 0) throw MathError("negative exponent in ipow");
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
  return r;
}

namespace {

Integer mod_floor(const Integer& a, const Integer& m) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

Integer inverse_mod(const Integer& a, const Integer& m) {
  Integer r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
    throw MathError("element is not invertible modulo " + m.get_str());
  return r;
}

long strip_p(Integer& n, long p) {
  Integer pp = p;
  return static_cast<long>(mpz_remove(n.get_mpz_t(), n.get_mpz_t(), pp.get_mpz_t()));
}

long sat_add(long a, long b) {
  if (a >= Padic::kExact || b >= Padic::kExact) return Padic::kExact;
  return std::min(a + b, Padic::kExact);
}

}  // namespace

Padic Padic::zero(long p, long absolute_precision) {
  Padic z;
  z.p_ = p;
  z.zero_ = true;
  z.val_ = std::min(absolute_precision, kExact);
  z.unit_ = 0;
  z.prec_ = 0;
  return z;
}

Padic Padic::from_rational(const Rational& q, long p, long precision) {
  if (precision < 1) throw PrecisionError("relative precision must be positive");
  if (q == 0) return zero(p);
  Padic x;
  x.p_ = p;
  x.zero_ = false;
  Integer num = q.get_num();
  Integer den = q.get_den();
  x.val_ = strip_p(num, p) - strip_p(den, p);
  x.prec_ = precision;
  Integer mod = ipow(p, precision);
  x.unit_ = mod_floor(num * inverse_mod(den, mod), mod);
  return x;
}

Padic Padic::from_integer(const Integer& n, long p, long precision) {
  return from_rational(Rational(n), p, precision);
}

long Padic::valuation() const {
  if (zero_) throw PrecisionError("valuation of an element indistinguishable from zero");
  return val_;
}

Rational Padic::to_rational() const {
  if (zero_) return 0;
  Rational r(unit_);
  if (val_ >= 0) r *= Rational(ipow(p_, val_));
  else r /= Rational(ipow(p_, -val_));
  return r;
}

Integer Padic::residue(long k) const {
  if (k <= 0) return 0;
  if (zero_) {
    if (val_ < k) throw PrecisionError("residue needs more digits than are known");
    return 0;
  }
  if (val_ < 0) throw MathError("residue of a non-integral element");
  if (val_ + prec_ < k) throw PrecisionError("residue needs more digits than are known");
  return mod_floor(unit_ * ipow(p_, val_), ipow(p_, k));
}

Padic Padic::with_absolute_precision(long a) const {
  if (zero_) return zero(p_, std::min(val_, a));
  if (a <= val_) return zero(p_, a);
  Padic x = *this;
  x.prec_ = std::min(prec_, a - val_);
  x.unit_ = mod_floor(unit_, ipow(p_, x.prec_));
  return x;
}

Padic Padic::with_relative_precision(long r) const {
  if (zero_) return *this;
  Padic x = *this;
  x.prec_ = std::max(1L, std::min(prec_, r));
  x.unit_ = mod_floor(unit_, ipow(p_, x.prec_));
  return x;
}

Padic Padic::constant(const Rational& q) const {
  if (q == 0) return zero(p_);
  long ctx;
  if (zero_) ctx = is_exact_zero() ? kDefaultPrecision : std::max(val_, 1L);
  else ctx = std::max(prec_, val_ + prec_);
  long vq = qb::valuation(q, p_);
  return from_rational(q, p_, std::max(ctx, 1L) + 16 + (vq < 0 ? -vq : vq));
}

Padic Padic::operator-() const {
  if (zero_) return *this;
  Padic x = *this;
  x.unit_ = mod_floor(-unit_, ipow(p_, prec_));
  return x;
}

Padic operator+(const Padic& x, const Padic& y) {
  if (x.p_ == 0) return y;
  if (y.p_ == 0) return x;
  if (x.p_ != y.p_) throw MathError("adding elements of different p-adic fields");
  const long p = x.p_;
  if (x.zero_ && y.zero_) return Padic::zero(p, std::min(x.val_, y.val_));
  const long a = std::min(x.absolute_precision(), y.absolute_precision());
  const Padic* terms[2] = {&x, &y};
  long vmin = Padic::kExact;
  int live = 0;
  for (const Padic* t : terms) {
    if (!t->zero_ && t->val_ < a) {
      vmin = std::min(vmin, t->val_);
      ++live;
    }
  }
  if (live == 0) return Padic::zero(p, a);
  Integer mod = ipow(p, a - vmin);
  Integer s = 0;
  for (const Padic* t : terms) {
    if (!t->zero_ && t->val_ < a) s += t->unit_ * ipow(p, t->val_ - vmin);
  }
  s = mod_floor(s, mod);
  if (s == 0) return Padic::zero(p, a);
  long vs = strip_p(s, p);
  Padic r;
  r.p_ = p;
  r.zero_ = false;
  r.val_ = vmin + vs;
  r.prec_ = a - r.val_;
  r.unit_ = mod_floor(s, ipow(p, r.prec_));
  return r;
}

Padic operator*(const Padic& x, const Padic& y) {
  if (x.p_ == 0 || y.p_ == 0) return Padic::zero(x.p_ ? x.p_ : y.p_);
  if (x.p_ != y.p_) throw MathError("multiplying elements of different p-adic fields");
  if (x.zero_ || y.zero_) return Padic::zero(x.p_, sat_add(x.val_, y.val_));
  Padic r;
  r.p_ = x.p_;
  r.zero_ = false;
  r.val_ = x.val_ + y.val_;
  r.prec_ = std::min(x.prec_, y.prec_);
  r.unit_ = mod_floor(x.unit_ * y.unit_, ipow(r.p_, r.prec_));
  return r;
}

Padic operator/(const Padic& x, const Padic& y) {
  if (y.is_exact_zero() || y.p_ == 0) throw MathError("division by zero");
  if (y.zero_) throw PrecisionError("division by an element indistinguishable from zero");
  if (x.p_ == 0) return Padic::zero(y.p_);
  if (x.p_ != y.p_) throw MathError("dividing elements of different p-adic fields");
  if (x.zero_) return Padic::zero(x.p_, x.is_exact_zero() ? Padic::kExact : x.val_ - y.val_);
  Padic r;
  r.p_ = x.p_;
  r.zero_ = false;
  r.val_ = x.val_ - y.val_;
  r.prec_ = std::min(x.prec_, y.prec_);
  Integer mod = ipow(r.p_, r.prec_);
  r.unit_ = mod_floor(x.unit_ * inverse_mod(y.unit_, mod), mod);
  return r;
}

std::string Padic::str() const {
  std::ostringstream os;
  if (is_exact_zero()) return "0";
  if (zero_) {
    os << "O(" << p_ << "^" << val_ << ")";
    return os.str();
  }
  os << unit_.get_str() << "*" << p_ << "^" << val_ << " + O(" << p_ << "^" << val_ + prec_ << ")";
  return os.str();
}

PadicPolynomial to_padic(const Polynomial<Rational>& f, long p, long precision) {
  std::vector<Padic> c;
  for (const Rational& q : f.coefficients()) c.push_back(Padic::from_rational(q, p, precision));
  return PadicPolynomial(std::move(c));
}

Padic hensel_root(const PadicPolynomial& f, const Padic& seed, long precision) {
  const long p = seed.prime();
  PadicPolynomial df = f.derivative();
  Padic fv = f(seed);
  Padic dv = df(seed);
  if (dv.is_zero()) throw MathError("Hensel criterion fails: derivative vanishes at the seed");
  const long vd = dv.valuation();
  if (!fv.is_zero() && fv.valuation() <= 2 * vd)
    throw MathError("Hensel criterion fails at the seed");
  const long vr = seed.is_zero() ? 0 : std::min(0L, seed.valuation());
  // The coefficients pin the root down to p^(A - vd), where A bounds the
  // absolute precision of f near the root.
  long known = Padic::kExact;
  const auto& coeffs = f.coefficients();
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    known = std::min(known, coeffs[i].absolute_precision() + static_cast<long>(i) * vr);
  const long certified = known >= Padic::kExact ? precision : known - vd;
  if (certified < precision) throw PrecisionError("coefficients too imprecise for the requested root precision");
  // Newton on representatives carried with spare digits.
  const long work = precision + 2 * vd + 8 - std::min(vr, 0L) * static_cast<long>(coeffs.size());
  std::vector<Padic> wide;
  for (const Padic& c : coeffs)
    wide.push_back(c.is_zero() ? Padic::zero(p) : Padic::from_rational(c.to_rational(), p, work + 8));
  PadicPolynomial g(std::move(wide));
  PadicPolynomial dg = g.derivative();
  Padic t = seed.is_zero() ? Padic::zero(p) : Padic::from_rational(seed.to_rational(), p, work);
  for (int iter = 0; iter < 256; ++iter) {
    fv = g(t);
    if (fv.is_zero() || fv.lower_valuation() >= precision + vd + 2) break;
    t = t - fv / dg(t);
  }
  fv = g(t);
  if (!fv.is_zero() && fv.lower_valuation() < precision + vd)
    throw PrecisionError("Newton iteration did not converge");
  return t.with_absolute_precision(precision);
}

namespace {

struct RootNode {
  Integer t0;              // prefix of the root
  long k = 0;              // t = t0 + p^k s
  std::vector<Integer> h;  // h(s), known modulo p^w
  long w = 0;
};

Integer eval_mod(const std::vector<Integer>& h, const Integer& s, const Integer& mod) {
  Integer acc = 0;
  for (std::size_t i = h.size(); i-- > 0;) acc = mod_floor(acc * s + h[i], mod);
  return acc;
}

Integer deriv_mod(const std::vector<Integer>& h, const Integer& s, const Integer& mod) {
  Integer acc = 0;
  for (std::size_t i = h.size(); i-- > 1;) acc = mod_floor(acc * s + h[i] * static_cast<unsigned long>(i), mod);
  return acc;
}

// Coefficients of h(r + p u) modulo mod.
std::vector<Integer> shift_scale(std::vector<Integer> h, const Integer& r, long p, const Integer& mod) {
  const std::size_t n = h.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = n - 1; j > i; --j) h[j - 1] = mod_floor(h[j - 1] + r * h[j], mod);
  Integer pj = 1;
  for (std::size_t j = 0; j < n; ++j) {
    h[j] = mod_floor(h[j] * pj, mod);
    pj *= p;
  }
  return h;
}

}  // namespace

std::vector<Padic> padic_integral_roots(const PadicPolynomial& f_in, long p) {
  PadicPolynomial f = f_in.trimmed();
  long vmin = Padic::kExact;
  long amin = Padic::kExact;
  for (const Padic& c : f.coefficients()) {
    if (!c.is_zero()) vmin = std::min(vmin, c.valuation());
    amin = std::min(amin, c.absolute_precision());
  }
  if (vmin >= Padic::kExact) throw PrecisionError("polynomial indistinguishable from zero");
  const long width = amin - vmin;
  if (width < 1) throw PrecisionError("polynomial coefficients too imprecise for root finding");
  if (f.degree() < 1) return {};

  RootNode root;
  root.t0 = 0;
  root.k = 0;
  root.w = width;
  Integer mod = ipow(p, width);
  for (const Padic& c : f.coefficients()) {
    Rational q = c.to_rational();
    if (vmin >= 0) q /= Rational(ipow(p, vmin)); else q *= Rational(ipow(p, -vmin));
    q.canonicalize();
    root.h.push_back(mod_floor(q.get_num() * inverse_mod(q.get_den(), mod), mod));
  }

  const std::size_t cap = static_cast<std::size_t>(f.degree());
  std::vector<Padic> roots;
  std::vector<RootNode> level{root};
  while (!level.empty()) {
    if (level.size() > cap) throw PrecisionError("root search exceeded the branch cap");
    std::vector<RootNode> next;
    for (RootNode& node : level) {
      Integer wmod = ipow(p, node.w);
      long c = node.w;
      for (const Integer& hi : node.h) {
        if (hi == 0) continue;
        Integer tmp = hi;
        c = std::min(c, strip_p(tmp, p));
      }
      if (c >= node.w) throw PrecisionError("ambiguous root cluster at the available precision");
      Integer pc = ipow(p, c);
      node.w -= c;
      wmod = ipow(p, node.w);
      for (Integer& hi : node.h) hi = mod_floor(hi / pc, wmod);

      Integer pm = p;
      bool nonconstant = false;
      for (std::size_t i = 1; i < node.h.size(); ++i)
        if (mod_floor(node.h[i], pm) != 0) nonconstant = true;
      if (!nonconstant) continue;

      for (long r = 0; r < p; ++r) {
        Integer rr = r;
        if (eval_mod(node.h, rr, pm) != 0) continue;
        if (deriv_mod(node.h, rr, pm) != 0) {
          Integer s = rr;
          for (long it = 0; it < 4 * node.w + 8; ++it) {
            Integer hv = eval_mod(node.h, s, wmod);
            if (hv == 0) break;
            s = mod_floor(s - hv * inverse_mod(deriv_mod(node.h, s, wmod), wmod), wmod);
          }
          Integer t = node.t0 + ipow(p, node.k) * s;
          long abs_prec = node.k + node.w;
          roots.push_back(Padic::from_integer(t, p, abs_prec + 1).with_absolute_precision(abs_prec));
        } else {
          if (node.w <= 1) throw PrecisionError("ambiguous root cluster at the available precision");
          RootNode child;
          child.t0 = node.t0 + ipow(p, node.k) * rr;
          child.k = node.k + 1;
          child.w = node.w;
          child.h = shift_scale(node.h, rr, p, wmod);
          next.push_back(std::move(child));
        }
      }
    }
    level = std::move(next);
  }
  return roots;
}

std::vector<Padic> padic_poly_roots(const PadicPolynomial& f_in, long p, long precision) {
  PadicPolynomial f = f_in.trimmed();
  std::vector<Padic> roots = padic_integral_roots(f, p);
  for (const Padic& s : padic_integral_roots(f.reversed(), p)) {
    if (s.lower_valuation() < 1) continue;
    if (s.is_zero()) throw PrecisionError("root of unbounded size at the available precision");
    Padic one = s.constant(1);
    roots.push_back(one / s);
  }
  for (Padic& r : roots) {
    if (!r.is_zero()) r = r.with_relative_precision(std::max(precision, 1L));
  }
  return roots;
}

namespace {

bool unit_fourth_power_residue(const Padic& u) {
  const long p = u.prime();
  if (p == 2) {
    if (u.relative_precision() < 5) throw PrecisionError("2-adic fourth power test needs 5 digits");
    unsigned long r = mpz_class(u.unit() % 32).get_ui();
    for (unsigned long t = 1; t < 32; t += 2)
      if ((t * t * t * t) % 32 == r) return true;
    return false;
  }
  long g = std::gcd(4L, p - 1);
  Integer res;
  Integer pm = p;
  Integer e = (p - 1) / g;
  Integer base = u.unit() % pm;
  mpz_powm(res.get_mpz_t(), base.get_mpz_t(), e.get_mpz_t(), pm.get_mpz_t());
  return res == 1;
}

}  // namespace

bool is_fourth_power(const Padic& x) {
  if (x.is_exact_zero()) throw MathError("zero is not in Q_p^*");
  if (x.valuation() % 4 != 0) return false;
  return unit_fourth_power_residue(x);
}

bool in_neg4_coset(const Padic& x) {
  return is_fourth_power(x) || is_fourth_power(x / x.constant(-4));
}

bool is_square(const Padic& x) {
  if (x.is_exact_zero()) throw MathError("zero is not in Q_p^*");
  if (x.valuation() % 2 != 0) return false;
  const long p = x.prime();
  if (p == 2) {
    if (x.relative_precision() < 3) throw PrecisionError("2-adic square test needs 3 digits");
    return x.unit() % 8 == 1;
  }
  Integer pm = p;
  Integer base = x.unit() % pm;
  return mpz_legendre(base.get_mpz_t(), pm.get_mpz_t()) == 1;
}

namespace {

Padic power_root(const Padic& x, int n, long precision) {
  const long p = x.prime();
  const long v = x.valuation();
  if (v % n != 0) throw MathError("element is not an n-th power (valuation)");
  Padic scale = v >= 0 ? Padic::from_rational(Rational(1) / Rational(ipow(p, v)), p, x.relative_precision() + 4)
                       : Padic::from_integer(ipow(p, -v), p, x.relative_precision() + 4);
  Padic u = x * scale;
  const long vn = valuation(Integer(n), p);
  const long target = std::min(precision, u.relative_precision() - vn);
  if (target < 1) throw PrecisionError("too few digits to extract a root");
  const long seed_digits = p == 2 ? (n == 4 ? 5 : 3) : 1;
  if (u.relative_precision() < seed_digits) throw PrecisionError("too few digits to seed a root");
  Integer seed_mod = ipow(p, seed_digits);
  Integer ures = u.unit() % seed_mod;
  long found = -1;
  for (long t = 1; t < seed_mod.get_si(); ++t) {
    if (t % p == 0) continue;
    Integer tn;
    Integer tt = t;
    mpz_powm_ui(tn.get_mpz_t(), tt.get_mpz_t(), static_cast<unsigned long>(n), seed_mod.get_mpz_t());
    if (tn == ures) { found = t; break; }
  }
  if (found < 0) throw MathError("unit is not an n-th power");
  std::vector<Padic> c(static_cast<std::size_t>(n + 1), Padic::zero(p));
  c[0] = -u;
  c[static_cast<std::size_t>(n)] = u.constant(1);
  Padic r = hensel_root(PadicPolynomial(c), Padic::from_integer(found, p, 1), target);
  Padic pk = Padic::from_integer(ipow(p, v >= 0 ? v / n : -v / n), p, target + 4);
  return v >= 0 ? r * pk : r / pk;
}

}  // namespace

Padic fourth_root(const Padic& x, long precision) { return power_root(x, 4, precision); }
Padic square_root(const Padic& x, long precision) { return power_root(x, 2, precision); }

Padic sqrt_minus_one(long p, long precision) {
  if (p % 4 != 1) throw MathError("-1 is a square in Q_p only for p = 1 mod 4");
  return square_root(Padic::from_integer(-1, p, precision + 4), precision);
}

}  // namespace qb
