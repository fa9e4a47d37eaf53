#include "qb/number.hpp"

#include <numeric>
#include <sstream>

#include "qb/errors.hpp"

namespace qb {

Rational FactoredRational::value() const {
  Rational r = sign;
  for (const auto& [p, e] : factors) {
    Integer pe;
    mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(e > 0 ? e : -e));
    if (e > 0) r *= pe; else r /= pe;
  }
  return r;
}

long FactoredRational::exponent(const Integer& p) const {
  auto it = factors.find(p);
  return it == factors.end() ? 0 : it->second;
}

std::map<Integer, long> factor_integer(Integer n, std::uint64_t bound) {
  std::map<Integer, long> out;
  if (n < 0) n = -n;
  if (n == 0) throw MathError("cannot factor zero");
  auto strip = [&](unsigned long p) {
    long e = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
      ++e;
    }
    if (e) out[Integer(p)] += e;
  };
  strip(2);
  for (std::uint64_t p = 3; p <= bound; p += 2) {
    if (n == 1) break;
    if (Integer(p) * Integer(p) > n) break;
    strip(static_cast<unsigned long>(p));
  }
  if (n > 1) {
    Integer b2 = Integer(static_cast<unsigned long>(bound)) * Integer(static_cast<unsigned long>(bound));
    if (n >= b2 && mpz_probab_prime_p(n.get_mpz_t(), 30) == 0)
      throw MathError("unfactored composite cofactor " + n.get_str() + " beyond trial bound");
    out[n] += 1;
  }
  return out;
}

FactoredRational factor(const Rational& q, std::uint64_t bound) {
  if (q == 0) throw MathError("cannot factor zero");
  FactoredRational f;
  f.sign = sgn(q) < 0 ? -1 : 1;
  for (const auto& [p, e] : factor_integer(q.get_num(), bound)) f.factors[p] += e;
  for (const auto& [p, e] : factor_integer(q.get_den(), bound)) f.factors[p] -= e;
  return f;
}

long valuation(const Integer& n, long p) {
  if (n == 0) throw MathError("valuation of zero");
  Integer pp = p;
  Integer m = n;
  return static_cast<long>(mpz_remove(m.get_mpz_t(), m.get_mpz_t(), pp.get_mpz_t()));
}

long valuation(const Rational& q, long p) {
  if (q == 0) throw MathError("valuation of zero");
  return valuation(q.get_num(), p) - valuation(q.get_den(), p);
}

bool is_prime(long p) {
  if (p < 2) return false;
  Integer n = p;
  return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
}

bool exact_fourth_root(const Integer& n, Integer& root) {
  if (n < 0) return false;
  int exact = mpz_root(root.get_mpz_t(), n.get_mpz_t(), 4);
  return exact != 0;
}

bool is_rational_fourth_power(const Rational& q) {
  if (q == 0) throw MathError("zero is not in Q^*");
  if (q < 0) return false;
  Integer r;
  return exact_fourth_root(q.get_num(), r) && exact_fourth_root(q.get_den(), r);
}

bool in_neg4_coset_global(const Rational& q) {
  return is_rational_fourth_power(q) || is_rational_fourth_power(-q / 4);
}

namespace {

// Unit part of q at p reduced modulo p^k.
Integer unit_residue(const Rational& q, long p, long k) {
  long v = valuation(q, p);
  Integer pk;
  mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
  Integer pv;
  mpz_ui_pow_ui(pv.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(v >= 0 ? v : -v));
  Rational u = v >= 0 ? Rational(q / pv) : Rational(q * pv);
  u.canonicalize();
  Integer den_inv;
  Integer den = u.get_den();
  if (mpz_invert(den_inv.get_mpz_t(), den.get_mpz_t(), pk.get_mpz_t()) == 0)
    throw MathError("unit part is not a unit");
  Integer r = (u.get_num() * den_inv) % pk;
  if (r < 0) r += pk;
  return r;
}

}  // namespace

bool is_local_fourth_power(const Rational& q, long p, long precision) {
  if (q == 0) throw MathError("zero is not in Q_p^*");
  if (!is_prime(p)) throw InputError("p must be prime");
  if (valuation(q, p) % 4 != 0) return false;
  if (p == 2) {
    if (precision < 5) throw PrecisionError("2-adic fourth power test needs 5 digits");
    // t^4 = u lifts from an odd t once t^4 = u mod 2^5 (derivative valuation 2).
    Integer u = unit_residue(q, 2, 5);
    for (unsigned long t = 1; t < 32; t += 2) {
      if ((t * t * t * t) % 32 == u.get_ui()) return true;
    }
    return false;
  }
  if (precision < 1) throw PrecisionError("fourth power test needs one digit");
  Integer u = unit_residue(q, p, 1);
  long g = std::gcd(4L, p - 1);
  Integer r;
  Integer pm = p;
  Integer e = (p - 1) / g;
  mpz_powm(r.get_mpz_t(), u.get_mpz_t(), e.get_mpz_t(), pm.get_mpz_t());
  return r == 1;
}

bool in_neg4_coset_local(const Rational& q, long p, long precision) {
  return is_local_fourth_power(q, p, precision) || is_local_fourth_power(-q / 4, p, precision);
}

CoefficientQuadruple normalize_coefficients(const std::array<Rational, 4>& abcd, std::uint64_t bound) {
  CoefficientQuadruple out;
  out.original = abcd;
  std::array<Integer, 4> reduced;
  for (int i = 0; i < 4; ++i) {
    if (abcd[i] == 0) throw MathError("diagonal quartic coefficients must be nonzero");
    FactoredRational f = factor(abcd[i], bound);
    Integer value = f.sign;
    Rational lambda = 1;
    for (const auto& [p, e] : f.factors) {
      long r = ((e % 4) + 4) % 4;
      long shift = (e - r) / 4;  // q = p^r * (p^shift)^4
      Integer pr;
      mpz_pow_ui(pr.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(r));
      value *= pr;
      Integer ps;
      mpz_pow_ui(ps.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(shift >= 0 ? shift : -shift));
      if (shift >= 0) lambda *= ps; else lambda /= ps;
    }
    reduced[i] = value;
    out.transform.lambda[i] = lambda;
  }
  Integer g = 0;
  for (const auto& r : reduced) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), r.get_mpz_t());
  for (int i = 0; i < 4; ++i) out.coeffs[i] = reduced[i] / g;
  out.transform.mu = Rational(1, 1) / Rational(g);
  out.transform.mu.canonicalize();
  return out;
}

std::string to_string(const Rational& q) {
  return q.get_str();
}

Rational parse_rational(const std::string& s) {
  if (s.empty()) throw InputError("empty number");
  Rational q;
  if (q.set_str(s, 10) != 0) throw InputError("not a rational number: " + s);
  if (q.get_den() == 0) throw InputError("zero denominator: " + s);
  q.canonicalize();
  return q;
}

}  // namespace qb
