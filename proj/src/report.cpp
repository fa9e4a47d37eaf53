#include "qb/report.hpp"

#include "qb/errors.hpp"

namespace qb {

namespace {

std::string kind_name(ReductionKind k) { return k == ReductionKind::Good ? "good" : "additive"; }

Json coefficients(const DiagonalQuartic& d) {
  return Json::array({d.coeffs.a().get_str(), d.coeffs.b().get_str(), d.coeffs.c().get_str(), d.coeffs.d().get_str()});
}

}  // namespace

Json to_json(const Padic& x) {
  Json j;
  j["p"] = x.prime();
  if (x.is_zero()) {
    j["zero"] = true;
    if (!x.is_exact_zero()) j["absolute_precision"] = x.absolute_precision();
  } else {
    j["valuation"] = x.valuation();
    j["unit"] = x.unit().get_str();
    j["relative_precision"] = x.relative_precision();
  }
  j["display"] = x.str();
  return j;
}

Padic padic_from_json(const Json& j) {
  const long p = j.at("p").get<long>();
  if (j.value("zero", false)) return Padic::zero(p, j.value("absolute_precision", Padic::kExact));
  const long v = j.at("valuation").get<long>();
  const long n = j.at("relative_precision").get<long>();
  Integer u(j.at("unit").get<std::string>());
  Rational q(u);
  if (v >= 0) q *= Rational(ipow(p, v));
  else q /= Rational(ipow(p, -v));
  return Padic::from_rational(q, p, n);
}

Json to_json(const PadicPoint& l) {
  Json a = Json::array();
  for (const Padic& t : l.v) a.push_back(to_json(t));
  return a;
}

PadicPoint padic_point_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 4) throw InputError("a point needs four coordinates");
  PadicPoint l;
  for (std::size_t i = 0; i < 4; ++i) l.v[i] = padic_from_json(j[i]);
  return l;
}

Json to_json(const ReductionProfile& r) {
  return Json{{"p", r.p},
              {"scaling_exponent", r.scaling_exponent},
              {"minimal_m", r.minimal_m},
              {"minimal_valuation", r.minimal_valuation},
              {"kind", kind_name(r.kind)},
              {"smooth_count", r.smooth_count},
              {"component_order", r.component_order},
              {"exceptional", r.exceptional}};
}

Json to_json(const FiltrationLevel& l) { return Json(l.str()); }

Json to_json(const DivisibilityTranscript& t) {
  Json j{{"divisible", t.divisible}, {"method", t.method}};
  if (t.profile) j["profile"] = to_json(*t.profile);
  if (t.multiplier) j["multiplier"] = t.multiplier;
  if (t.level) j["level_of_multiple"] = to_json(*t.level);
  if (t.required_level) j["required_level"] = t.required_level;
  return j;
}

Json to_json(const OddBrauerClass& c) {
  Json j{{"class", c.str()},
         {"z3_condition", c.z3_condition},
         {"z5_condition", c.z5_condition},
         {"witness_condition", c.witness_condition}};
  if (c.prime) j["local_prime"] = c.prime;
  return j;
}

Json to_json(const LocalNormalForm& nf) {
  Json lam = Json::array();
  for (const Padic& l : nf.transform.lambda) lam.push_back(to_json(l));
  return Json{{"ell", nf.ell},
              {"label", nf.label()},
              {"family", nf.family},
              {"parameter", nf.parameter},
              {"target", coefficients(nf.target)},
              {"perm", nf.transform.perm},
              {"mu", to_string(nf.transform.mu)},
              {"lambda", lam}};
}

Json to_json(const EvaluationVerdict& v) {
  Json j{{"verdict", to_string(v.value)}, {"ell", v.ell}, {"p", v.p}, {"rule", v.rule}};
  if (v.normal_form) j["normal_form"] = to_json(*v.normal_form);
  if (v.evaluated_point) j["point_on_normal_form"] = to_json(*v.evaluated_point);
  if (v.deformed) j["deformation_step"] = v.deformation_step;
  if (v.s_ab) j["s_ab"] = to_json(*v.s_ab);
  if (v.s_cd) j["s_cd"] = to_json(*v.s_cd);
  j["precision_used"] = v.precision_used;
  return j;
}

Json to_json(const WitnessSet& w) {
  Json orbit = Json::array();
  for (const OrbitEntry& e : w.orbit)
    orbit.push_back(Json{{"move", e.move},
                         {"multiplier", e.multiplier},
                         {"point", to_json(e.point)},
                         {"verdict", to_string(e.verdict.value)},
                         {"certificate", to_json(e.verdict)}});
  return Json{{"ell", w.ell},
              {"recipe", w.recipe},
              {"normal_form", w.normal_form},
              {"base", to_json(w.base)},
              {"orbit", orbit},
              {"multipliers_verified", w.multipliers_verified},
              {"multiplier_source", "orbit relations; not independently computed"}};
}

Json to_json(const SearchReport& r) {
  return Json{{"family", to_string(r.family)},
              {"n", r.n},
              {"eps", r.eps},
              {"bound", r.bound},
              {"surface", coefficients(r.surface)},
              {"condition", r.condition},
              {"hypotheses", r.hypotheses},
              {"points_found", r.points.size()},
              {"points", r.points},
              {"violations", r.violations}};
}

Json envelope(const std::string& command, Json inputs, Json result, Json certificate, long precision_used) {
  return Json{{"schema", kSchema},
              {"command", command},
              {"inputs", std::move(inputs)},
              {"result", std::move(result)},
              {"certificate", std::move(certificate)},
              {"precision_used", precision_used}};
}

Verdict recheck_evaluation_certificate(const Json& certificate) {
  if (!certificate.contains("normal_form")) {
    // zero by rule away from ell
    if (certificate.at("verdict") != "zero") throw MathError("a verdict without a normal form must be zero");
    const long p = certificate.at("p").get<long>();
    const int ell = certificate.at("ell").get<int>();
    if (p == ell) throw MathError("certificate at p = ell lacks its normal form");
    return Verdict::Zero;
  }
  const Json& nfj = certificate.at("normal_form");
  const Json& t = nfj.at("target");
  LocalNormalForm nf;
  nf.ell = nfj.at("ell").get<int>();
  nf.family = nfj.at("family").get<std::string>();
  nf.parameter = nfj.at("parameter").get<long>();
  nf.target = quartic_of(std::stol(t[0].get<std::string>()), std::stol(t[1].get<std::string>()),
                         std::stol(t[2].get<std::string>()), std::stol(t[3].get<std::string>()));
  const PadicPoint m = padic_point_from_json(certificate.at("point_on_normal_form"));
  if (!on_surface(nf.target, m)) throw MathError("certificate point is not on its reference surface");
  const long n = certificate.at("precision_used").get<long>();
  return evaluate_on_normal_form(nf, m, n).value;
}

}  // namespace qb
