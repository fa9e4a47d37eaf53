#include "qb/brauer.hpp"

#include "qb/errors.hpp"

namespace qb {

namespace {

long prime_of(const PadicPoint& l) {
  for (const Padic& t : l.v)
    if (t.prime() != 0) return t.prime();
  throw InputError("point carries no prime");
}

bool degenerate(const DiagonalQuartic& d, const PadicPoint& l) {
  for (const Padic& t : l.v)
    if (t.is_zero()) return true;
  return f_value(d, l).is_zero();
}

// The verdict at places other than ell, or nullopt when p = ell.
std::optional<EvaluationVerdict> away_from_ell(int ell, long p, long precision) {
  EvaluationVerdict v;
  v.ell = ell;
  v.p = p;
  v.precision_used = precision;
  v.value = Verdict::Zero;
  if (p == 0) {
    v.rule = "real place: odd-order classes vanish in Br(R)";
    return v;
  }
  if (p < 0 || !is_prime(p)) throw InputError("p must be 0 or a prime");
  if (p == ell) return std::nullopt;
  v.rule = p == 2 ? "p = 2: every E^m(Q_2) is divisible by odd primes, so the map is zero"
                  : "p != ell: the evaluation map is constant and vanishes";
  return v;
}

Padic fourth_root_of(const Rational& q, long p, long precision) {
  return fourth_root(Padic::from_rational(q, p, precision + 8), precision);
}

}  // namespace

int OddBrauerClass::ell() const {
  switch (value) {
    case OddClass::Z3: return 3;
    case OddClass::Z5: return 5;
    default: return 0;
  }
}

std::string OddBrauerClass::str() const {
  switch (value) {
    case OddClass::Z3: return "Z/3";
    case OddClass::Z5: return "Z/5";
    case OddClass::Both: return "Z/3+Z/5";
    default: return "0";
  }
}

OddBrauerClass classify_odd(const DiagonalQuartic& d, long local_prime, long precision) {
  const Rational prod = d.a() * d.b() * d.c() * d.d();
  const Rational q3 = -3 * prod;
  const Rational q5 = 125 * prod;
  OddBrauerClass out;
  out.prime = local_prime;
  if (local_prime == 0) {
    out.z3_condition = in_neg4_coset_global(q3);
    out.z5_condition = in_neg4_coset_global(q5);
  } else {
    if (!is_prime(local_prime)) throw InputError("local test needs a prime");
    out.z3_condition = in_neg4_coset_local(q3, local_prime, precision);
    out.z5_condition = in_neg4_coset_local(q5, local_prime, precision);
  }
  const std::string group = local_prime == 0 ? "<-4>Q^{*4}" : "<-4>Q_" + std::to_string(local_prime) + "^{*4}";
  if (out.z3_condition && out.z5_condition) {
    if (local_prime == 0) throw std::logic_error("both global coset conditions hold");
    out.value = OddClass::Both;
    out.witness_condition = "-3abcd and 125abcd both lie in " + group;
  } else if (out.z3_condition) {
    out.value = OddClass::Z3;
    out.witness_condition = "-3abcd = " + to_string(q3) + " lies in " + group;
  } else if (out.z5_condition) {
    out.value = OddClass::Z5;
    out.witness_condition = "125abcd = " + to_string(q5) + " lies in " + group;
  } else {
    out.value = OddClass::Trivial;
    out.witness_condition = "neither -3abcd nor 125abcd lies in " + group;
  }
  return out;
}

std::string to_string(Verdict v) { return v == Verdict::Zero ? "zero" : "nonzero"; }

PadicPoint primitive(const PadicPoint& l) {
  const long p = prime_of(l);
  long v = Padic::kExact;
  for (const Padic& t : l.v)
    if (!t.is_zero()) v = std::min(v, t.valuation());
  if (v >= Padic::kExact) throw MathError("the zero vector is not a point");
  if (v == 0) return l;
  const Rational s = v > 0 ? Rational(1) / Rational(ipow(p, v)) : Rational(ipow(p, -v));
  PadicPoint out;
  for (std::size_t i = 0; i < 4; ++i) out.v[i] = l.v[i].is_exact_zero() ? l.v[i] : Padic(l.v[i] * l.v[i].constant(s));
  return out;
}

PadicPoint deform_point(const DiagonalQuartic& d, const PadicPoint& l, long step, long precision) {
  const long p = prime_of(l);
  const auto e = d.signed_coefficients();
  const long work = precision + 8 * step;
  std::size_t j = 4;
  long best = Padic::kExact;
  for (std::size_t k = 0; k < 4; ++k) {
    if (l.v[k].is_zero()) continue;
    Padic t = l.v[k];
    long v = (t * t * t * t.constant(4 * e[k])).valuation();
    if (v < best) {
      best = v;
      j = k;
    }
  }
  if (j == 4) throw MathError("cannot deform the zero vector");
  const bool f_zero = f_value(d, l).is_zero();
  std::array<Rational, 4> r;
  for (std::size_t k = 0; k < 4; ++k) r[k] = l.v[k].is_zero() ? Rational(0) : l.v[k].to_rational();
  const Rational shift(ipow(p, step));
  bool moved_xy = false;
  for (std::size_t k = 0; k < 4; ++k) {
    if (k == j || r[k] != 0) continue;
    r[k] = shift;
    moved_xy = moved_xy || k < 2;
  }
  if (f_zero && !moved_xy) {
    std::size_t k = j == 0 ? 1 : 0;
    r[k] += shift;
  }
  std::vector<Padic> c(5, Padic::zero(p));
  Rational rest = 0;
  for (std::size_t k = 0; k < 4; ++k)
    if (k != j) rest += e[k] * r[k] * r[k] * r[k] * r[k];
  c[0] = rest == 0 ? Padic::zero(p) : Padic::from_rational(rest, p, work + 16);
  c[4] = Padic::from_rational(e[j], p, work + 16);
  Padic root = hensel_root(PadicPolynomial(c), Padic::from_rational(r[j], p, work + 16), work);
  PadicPoint out;
  for (std::size_t k = 0; k < 4; ++k) out.v[k] = k == j ? root : Padic::from_rational(r[k], p, work);
  if (degenerate(d, out)) throw MathError("deformation did not leave the locus xyzw * f = 0");
  return out;
}

EvaluationVerdict evaluate_on_normal_form(const LocalNormalForm& nf, const PadicPoint& m, long precision) {
  const DiagonalQuartic& t = nf.target;
  TwistData<Padic> td = twist_data(t, m);
  check_guards(td, nf.ell);
  EvaluationVerdict v;
  v.ell = nf.ell;
  v.p = nf.ell;
  v.precision_used = precision;
  v.normal_form = nf;
  v.evaluated_point = m;
  auto k = [&](const Rational& q) { return m.x().constant(q); };
  v.s_ab = s_test(k(t.a()), k(t.b()), m.x(), m.y(), nf.ell, nf.ell, precision);
  v.s_cd = s_test(k(t.c()), k(t.d()), m.z(), m.w(), nf.ell, nf.ell, precision);
  if (v.s_ab->divisible) {
    v.value = Verdict::Zero;
    v.rule = "S(a,b:x,y) holds";
  } else if (v.s_cd->divisible) {
    v.value = Verdict::Zero;
    v.rule = "S(c,d:z,w) holds";
  } else {
    v.value = Verdict::Nonzero;
    v.rule = "neither S(a,b:x,y) nor S(c,d:z,w) holds";
  }
  return v;
}

EvaluationVerdict evaluate(const DiagonalQuartic& d, long p, const PadicPoint& l, long precision) {
  const OddBrauerClass cls = classify_odd(d);
  if (cls.value == OddClass::Trivial) throw MathError("the odd part of the Brauer group is trivial");
  const int ell = cls.ell();
  if (auto v = away_from_ell(ell, p, precision)) return *v;
  if (prime_of(l) != p) throw InputError("point is over the wrong prime");
  if (!on_surface(d, l)) throw MathError("point is not on the surface");
  const LocalNormalForm nf = local_normal_form(d, ell, precision);
  const PadicPoint m = primitive(nf.forward(primitive(l)));
  if (!degenerate(nf.target, m)) return evaluate_on_normal_form(nf, m, precision);
  const long step = 8;
  EvaluationVerdict first = evaluate_on_normal_form(nf, deform_point(nf.target, m, step, precision), precision);
  EvaluationVerdict second =
      evaluate_on_normal_form(nf, deform_point(nf.target, m, step + 4, precision), precision);
  if (first.value != second.value)
    throw MathError("verdict changed between deformation steps " + std::to_string(step) + " and " +
                    std::to_string(step + 4));
  first.deformed = true;
  first.deformation_step = step;
  return first;
}

EvaluationVerdict evaluate(const DiagonalQuartic& d, long p, const RationalPoint& l, long precision) {
  if (!on_surface(d, l)) throw MathError("point is not on the surface");
  const OddBrauerClass cls = classify_odd(d);
  if (cls.value == OddClass::Trivial) throw MathError("the odd part of the Brauer group is trivial");
  if (auto v = away_from_ell(cls.ell(), p, precision)) return *v;
  try {
    return evaluate(d, p, to_padic_point(l, p, precision), precision);
  } catch (const PrecisionError&) {
    return evaluate(d, p, to_padic_point(l, p, 2 * precision), 2 * precision);
  }
}

PadicPoint reference_witness(const LocalNormalForm& nf, long precision, std::string* recipe) {
  const long p = nf.ell;
  auto one = [&](long v) { return Padic::from_integer(v, p, precision); };
  const Integer n = nf.parameter;
  PadicPoint m;
  std::string how;
  if (nf.ell == 5) {
    if (nf.family == "A") {
      Rational q = Rational(1 + 625 * n - 5 * n * n * n);
      m.v = {fourth_root_of(q, p, precision), one(1), one(5), one(1)};
      how = "(alpha,1,5,1) with alpha^4 = " + to_string(q);
    } else if (nf.family == "B") {
      Rational q = Rational(1 + 25 * n - 125 * n * n * n);
      m.v = {fourth_root_of(q, p, precision), one(1), one(1), one(1)};
      how = "(alpha,1,1,1) with alpha^4 = " + to_string(q);
    } else {
      Rational q(29, 4);
      m.v = {one(1), one(2), fourth_root_of(q, p, precision), one(1)};
      how = "(1,2,z,1) with z^4 = 29/4";
    }
  } else {
    const long s = nf.target.coeffs.d() > 0 ? 1 : -1;
    if (nf.family == "A") {
      Rational q(1 + 27 * s - 81);
      m.v = {fourth_root_of(q, p, precision), one(3), one(1), one(1)};
      how = "(alpha,3,1,1) with alpha^4 = " + to_string(q);
    } else if (nf.family == "B") {
      Rational q(4 + 9 * s);
      m.v = {fourth_root_of(q, p, precision), one(1), one(1), one(1)};
      how = "(alpha,1,1,1) with alpha^4 = " + to_string(q);
    } else {
      Rational q(17 - 27 * s, 2);
      m.v = {one(1), one(2), fourth_root_of(q, p, precision), one(1)};
      how = "(1,2,z,1) with z^4 = " + to_string(q);
    }
  }
  if (!on_surface(nf.target, m)) throw std::logic_error("reference witness is off its surface");
  if (recipe) *recipe = how;
  return m;
}

WitnessSet witness_orbit(const DiagonalQuartic& d, const PadicPoint& base, long precision) {
  const OddBrauerClass cls = classify_odd(d);
  if (cls.value == OddClass::Trivial) throw MathError("the odd part of the Brauer group is trivial");
  const int ell = cls.ell();
  EvaluationVerdict v0 = evaluate(d, ell, base, precision);
  if (v0.value != Verdict::Nonzero) throw MathError("the base point evaluates to zero; it has no orbit of witnesses");
  WitnessSet ws;
  ws.ell = ell;
  ws.base = base;
  if (v0.normal_form) ws.normal_form = v0.normal_form->label();
  if (ell == 5) {
    const Padic i = sqrt_minus_one(5, precision + 8);
    Padic ik = i.constant(1);
    int mult = 1;
    for (int k = 0; k < 4; ++k) {
      OrbitEntry e;
      e.point = base;
      e.point.v[0] = base.v[0] * ik;
      e.multiplier = mult;
      e.move = k == 0 ? "L" : "(i^" + std::to_string(k) + " x, y, z, w)";
      e.verdict = k == 0 ? v0 : evaluate(d, ell, e.point, precision);
      ws.orbit.push_back(std::move(e));
      ik = ik * i;
      mult = mult * 2 % 5;
    }
  } else {
    OrbitEntry e0{base, 1, "L", v0};
    OrbitEntry e1;
    e1.point = base;
    e1.point.v[0] = -base.v[0];
    e1.multiplier = -1;
    e1.move = "(-x, y, z, w)";
    e1.verdict = evaluate(d, ell, e1.point, precision);
    ws.orbit = {e0, e1};
  }
  return ws;
}

WitnessSet surjectivity_witnesses(const DiagonalQuartic& d, long precision) {
  const OddBrauerClass cls = classify_odd(d);
  if (cls.value == OddClass::Trivial) throw MathError("the odd part of the Brauer group is trivial");
  const LocalNormalForm nf = local_normal_form(d, cls.ell(), precision);
  std::string recipe;
  const PadicPoint m = reference_witness(nf, precision + 8, &recipe);
  WitnessSet ws = witness_orbit(d, nf.backward(m), precision);
  ws.recipe = recipe + " on " + nf.label();
  ws.normal_form = nf.label();
  return ws;
}

}  // namespace qb
