#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qb/acceptance.hpp"
#include "qb/errors.hpp"

namespace qb::cli {

namespace {

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ',')) {
    auto b = cur.find_first_not_of(" \t");
    auto e = cur.find_last_not_of(" \t");
    parts.push_back(b == std::string::npos ? "" : cur.substr(b, e - b + 1));
  }
  return parts;
}

Rational rational_arg(const std::string& s) {
  try {
    return parse_rational(s);
  } catch (const std::exception&) {
    throw InputError("not a rational number: '" + s + "'");
  }
}

std::array<Rational, 4> surface_arg(const Json& j) {
  if (!j.is_array() || j.size() != 4) throw InputError("--surface needs four comma-separated coefficients");
  std::array<Rational, 4> r;
  for (std::size_t i = 0; i < 4; ++i) {
    r[i] = rational_arg(j[i].get<std::string>());
    if (r[i] == 0) throw InputError("surface coefficients must be nonzero");
  }
  return r;
}

long prime_arg(const Json& j, const char* what, bool allow_real = false) {
  const long p = j.get<long>();
  if (allow_real && p == 0) return 0;
  if (p < 2 || !is_prime(p)) throw InputError(std::string(what) + " must be a prime");
  return p;
}

Json text_array(const std::vector<std::string>& v) {
  Json a = Json::array();
  for (const auto& s : v) a.push_back(s);
  return a;
}

Json classify(const Json& in, long n) {
  auto d = DiagonalQuartic::from_rationals(surface_arg(in.at("surface")));
  const long lp = in.value("local_prime", 0L);
  if (lp != 0) prime_arg(in.at("local_prime"), "--local-prime");
  auto c = classify_odd(d, lp, n);
  Json cert = to_json(c);
  cert["normalized_surface"] = d.str();
  return envelope("classify", in, c.str(), cert, n);
}

// The point is given on the surface as typed; it is carried to the
// normalized surface through the normalization record.
Json evaluate_cmd(const Json& in, long n) {
  const auto raw = surface_arg(in.at("surface"));
  auto d = DiagonalQuartic::from_rationals(raw);
  const long p = prime_arg(in.at("prime"), "--prime", true);
  const auto& pt = in.at("point");
  if (!pt.is_array() || pt.size() != 4) throw InputError("--point needs four comma-separated coordinates");
  const bool lift = in.value("lift_first", false);
  const auto& tr = d.coeffs.transform;
  int symbolic = -1;
  std::array<Rational, 4> known;
  for (std::size_t i = 0; i < 4; ++i) {
    const std::string s = pt[i].get<std::string>();
    if (s == "a") {
      if (symbolic >= 0) throw InputError("at most one coordinate can be symbolic");
      symbolic = static_cast<int>(i);
      known[i] = 0;
    } else {
      known[i] = rational_arg(s);
    }
  }
  Json cert;
  EvaluationVerdict v;
  if (symbolic >= 0) {
    if (!lift) throw InputError("a symbolic coordinate needs --lift-first");
    if (p == 0) throw InputError("--lift-first needs a finite prime");
    const std::array<Rational, 4> e{raw[0], raw[1], -raw[2], -raw[3]};
    Rational rest = 0;
    for (std::size_t k = 0; k < 4; ++k) rest += e[k] * known[k] * known[k] * known[k] * known[k];
    const auto j = static_cast<std::size_t>(symbolic);
    const Rational value = -rest / e[j];
    if (value == 0) throw MathError("the symbolic coordinate would vanish");
    Padic root = fourth_root(Padic::from_rational(value, p, n + 8), n);
    PadicPoint l;
    for (std::size_t k = 0; k < 4; ++k) l.v[k] = k == j ? root : Padic::from_rational(known[k], p, n + 8);
    PadicPoint moved;
    for (std::size_t k = 0; k < 4; ++k) {
      const Padic& src = l.v[static_cast<std::size_t>(tr.perm[k])];
      moved.v[k] = src * src.constant(tr.lambda[k]);
    }
    v = evaluate(d, p, moved, n);
    cert = to_json(v);
    cert["lifted"] = Json{{"index", symbolic}, {"fourth_power", to_string(value)}, {"root", to_json(root)}};
  } else {
    RationalPoint l;
    for (std::size_t k = 0; k < 4; ++k) l.v[k] = tr.lambda[k] * known[static_cast<std::size_t>(tr.perm[k])];
    v = evaluate(d, p, l, n);
    cert = to_json(v);
  }
  cert["normalized_surface"] = d.str();
  return envelope("evaluate", in, to_string(v.value), cert, v.precision_used);
}

Json witnesses_cmd(const Json& in, long n) {
  auto d = DiagonalQuartic::from_rationals(surface_arg(in.at("surface")));
  auto ws = surjectivity_witnesses(d, n);
  Json result = Json::array();
  for (const auto& e : ws.orbit)
    result.push_back(Json{{"move", e.move}, {"multiplier", e.multiplier}, {"verdict", to_string(e.verdict.value)}});
  Json cert = to_json(ws);
  cert["normalized_surface"] = d.str();
  return envelope("witnesses", in, result, cert, n);
}

Json corollary_cmd(const Json& in, long n) {
  auto f = parse_family(in.at("family").get<std::string>());
  const long param = in.at("n").get<long>();
  const int eps = in.value("eps", 0);
  const long bound = in.at("bound").get<long>();
  if (param < 1) throw InputError("--n must be positive");
  if (eps != 0 && eps != 1) throw InputError("--eps must be 0 or 1");
  if (bound < 1) throw InputError("--bound must be at least 1");
  auto r = verify_corollary(f, param, eps, bound, in.value("threads", 1u));
  return envelope("verify-corollary", in, r.violations.empty(), to_json(r), n);
}

Json divisible_cmd(const Json& in, long n) {
  const Rational m = rational_arg(in.at("m").get<std::string>());
  if (m == 0) throw InputError("--m must be nonzero");
  const long p = prime_arg(in.at("prime"), "--prime");
  const long ell = prime_arg(in.at("ell"), "--ell");
  if (ell == 2) throw InputError("--ell must be odd");
  const auto& pt = in.at("point");
  CurveEm<Rational> e{m};
  ECPoint<Rational> r;
  if (pt.is_string() && pt.get<std::string>() == "O") {
    r = ECPoint<Rational>::at_infinity();
  } else {
    if (!pt.is_array() || pt.size() != 2) throw InputError("--point needs x,y or O");
    r = ECPoint<Rational>::affine(rational_arg(pt[0].get<std::string>()), rational_arg(pt[1].get<std::string>()));
  }
  if (!e.contains(r)) throw MathError("point is not on y^2 = x^3 - m x");
  auto t = divisibility_transcript(m, r, static_cast<int>(ell), p, n);
  return envelope("divisible", in, t.divisible, to_json(t), n);
}

Json solvable_cmd(const Json& in, long n) {
  auto d = DiagonalQuartic::from_rationals(surface_arg(in.at("surface")));
  const long p = prime_arg(in.at("prime"), "--prime");
  const bool ok = is_locally_soluble(d, p, n);
  Json cert{{"method", "lifting of primitive solutions modulo powers of p"}, {"normalized_surface", d.str()}};
  if (ok) {
    try {
      cert["point"] = to_json(find_smooth_point(d, p, n));
    } catch (const std::exception& e) {
      cert["point_note"] = std::string("no smooth point with small coordinates: ") + e.what();
    }
  }
  return envelope("solvable", in, ok, cert, n);
}

Json selftest_cmd(const Json& in, long n, std::ostream* progress) {
  AcceptanceOptions opt;
  opt.precision = n;
  opt.seed = in.value("seed", opt.seed);
  std::ostringstream sink;
  auto results = run_acceptance(opt, progress ? *progress : sink);
  bool all = true;
  Json cert = Json::array();
  for (const auto& r : results) {
    all = all && r.passed;
    cert.push_back(Json{{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"detail", r.detail}, {"seconds", r.seconds}});
  }
  return envelope("selftest", in, all, cert, n);
}

Json run(const std::string& command, const Json& inputs, std::ostream* progress) {
  const long n = inputs.at("precision").get<long>();
  if (n < 16) throw InputError("precision must be at least 16");
  if (command == "classify") return classify(inputs, n);
  if (command == "evaluate") return evaluate_cmd(inputs, n);
  if (command == "witnesses") return witnesses_cmd(inputs, n);
  if (command == "verify-corollary") return corollary_cmd(inputs, n);
  if (command == "divisible") return divisible_cmd(inputs, n);
  if (command == "solvable") return solvable_cmd(inputs, n);
  if (command == "selftest") return selftest_cmd(inputs, n, progress);
  throw InputError("unknown command '" + command + "'");
}

void flatten(const Json& j, const std::string& path, std::ostringstream& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), out);
  } else if (j.is_array()) {
    if (j.empty()) out << path << ": []\n";
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", out);
  } else {
    out << path << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

Json verify_certificate(const std::string& file) {
  Json doc;
  try {
    if (file == "-") {
      doc = Json::parse(std::cin);
    } else {
      std::ifstream in(file);
      if (!in) throw InputError("cannot open " + file);
      doc = Json::parse(in);
    }
  } catch (const Json::exception& e) {
    throw InputError(std::string("not a JSON document: ") + e.what());
  }
  if (doc.value("schema", "") != kSchema) throw InputError("unknown schema; expected qb-1");
  if (!doc.contains("command") || !doc.contains("inputs") || !doc.contains("result"))
    throw InputError("document lacks command, inputs or result");
  const std::string command = doc.at("command").get<std::string>();
  Json again = run(command, doc.at("inputs"), nullptr);
  bool match = again.at("result") == doc.at("result");
  Json cert{{"original_command", command}, {"original_result", doc.at("result")}, {"recomputed_result", again.at("result")}};
  // evaluation certificates are also replayed on their own, without the inputs
  auto replay = [&](const Json& c, const Json& want, const std::string& key) {
    std::string got = to_string(recheck_evaluation_certificate(c));
    cert[key] = got;
    match = match && got == want.get<std::string>();
  };
  try {
    if (command == "evaluate") replay(doc.at("certificate"), doc.at("result"), "certificate_replay");
    if (command == "witnesses") {
      const auto& orbit = doc.at("certificate").at("orbit");
      for (std::size_t i = 0; i < orbit.size(); ++i)
        replay(orbit[i].at("certificate"), orbit[i].at("verdict"), "orbit_replay[" + std::to_string(i) + "]");
    }
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed certificate: ") + e.what());
  }
  return envelope("verify-certificate", Json{{"file", file}}, match, cert, again.value("precision_used", 0L));
}

long default_precision() {
  const char* env = std::getenv("QB_PRECISION");
  if (!env || !*env) return kDefaultPrecision;
  char* end = nullptr;
  long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 16) throw InputError("QB_PRECISION must be an integer >= 16");
  return n;
}

}  // namespace

Json run_command(const std::string& command, const Json& inputs) { return run(command, inputs, nullptr); }

std::string render_text(const Json& doc) {
  std::ostringstream out;
  const std::vector<std::string> order{"schema", "command", "result", "error", "precision_used", "inputs", "certificate"};
  for (const auto& key : order)
    if (doc.contains(key)) flatten(doc.at(key), key, out);
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (std::find(order.begin(), order.end(), it.key()) == order.end()) flatten(it.value(), it.key(), out);
  return out.str();
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  long precision = 0;
  try {
    precision = default_precision();
  } catch (const InputError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }

  CLI::App app{"Odd-order Brauer classes of diagonal quartic surfaces ax^4 + by^4 = cz^4 + dw^4", "qb"};
  app.fallthrough();
  std::string format = "json", verify_file;
  app.add_option("--precision,-N", precision, "p-adic working precision (default 32, or QB_PRECISION)")
      ->check(CLI::Range(16L, 100000L));
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--verify-certificate", verify_file, "re-derive the result of a saved JSON report ('-' for stdin)");

  std::string surface, point, m, family = "co1.1";
  long prime = 0, ell = 0, local_prime = 0, n = 1, bound = 20;
  int eps = 0;
  unsigned threads = 1;
  bool lift_first = false;
  std::uint64_t seed = AcceptanceOptions{}.seed;

  auto* classify = app.add_subcommand("classify", "odd part of Br(D)/Br_0(D): 0, Z/3 or Z/5");
  classify->add_option("--surface", surface, "a,b,c,d")->required();
  classify->add_option("--local-prime", local_prime, "test the coset conditions over Q_p instead of Q");

  auto* evaluate = app.add_subcommand("evaluate", "zero/nonzero verdict of the odd Brauer class at a local point");
  evaluate->add_option("--surface", surface, "a,b,c,d")->required();
  evaluate->add_option("--prime", prime, "p, or 0 for the real place")->required();
  evaluate->add_option("--point", point, "x,y,z,w; one coordinate may be 'a'")->required();
  evaluate->add_flag("--lift-first", lift_first, "solve for the coordinate marked 'a' first");

  auto* witnesses = app.add_subcommand("witnesses", "nonzero witness points and their orbit at p = ell");
  witnesses->add_option("--surface", surface, "a,b,c,d")->required();

  auto* corollary = app.add_subcommand("verify-corollary", "search a family for points violating its divisibility");
  corollary->add_option("--family", family, "co1.1, co1.2, co3.1 or co3.2")->required();
  corollary->add_option("--n", n, "family parameter")->required();
  corollary->add_option("--eps", eps, "0 or 1");
  corollary->add_option("--bound", bound, "search box max |coordinate| (default 20)");
  corollary->add_option("--threads", threads, "worker threads");

  auto* divisible = app.add_subcommand("divisible", "is R divisible by ell on y^2 = x^3 - m x over Q_p");
  divisible->add_option("--m", m, "curve coefficient")->required();
  divisible->add_option("--prime", prime, "p")->required();
  divisible->add_option("--ell", ell, "odd prime ell")->required();
  divisible->add_option("--point", point, "x,y or O")->required();

  auto* solvable = app.add_subcommand("solvable", "is D(Q_p) nonempty");
  solvable->add_option("--surface", surface, "a,b,c,d")->required();
  solvable->add_option("--prime", prime, "p")->required();

  auto* selftest = app.add_subcommand("selftest", "run the acceptance checks");
  selftest->add_option("--seed", seed, "seed for the randomized checks");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  const bool text = format == "text";
  std::string command;
  Json inputs;
  auto emit = [&](const Json& doc) {
    if (text)
      out << render_text(doc);
    else
      out << doc.dump(2) << "\n";
  };
  try {
    if (!verify_file.empty()) {
      Json doc = verify_certificate(verify_file);
      emit(doc);
      return doc.at("result").get<bool>() ? kExitOk : kExitMath;
    }
    auto subs = app.get_subcommands();
    if (subs.empty()) {
      err << app.help();
      return kExitUsage;
    }
    command = subs.front()->get_name();
    inputs = Json{{"precision", precision}};
    if (command == "classify") {
      inputs["surface"] = text_array(split(surface));
      if (local_prime != 0) inputs["local_prime"] = local_prime;
    } else if (command == "evaluate") {
      inputs["surface"] = text_array(split(surface));
      inputs["prime"] = prime;
      inputs["point"] = text_array(split(point));
      inputs["lift_first"] = lift_first;
    } else if (command == "witnesses") {
      inputs["surface"] = text_array(split(surface));
    } else if (command == "verify-corollary") {
      inputs["family"] = family;
      inputs["n"] = n;
      inputs["eps"] = eps;
      inputs["bound"] = bound;
      inputs["threads"] = threads;
    } else if (command == "divisible") {
      inputs["m"] = m;
      inputs["prime"] = prime;
      inputs["ell"] = ell;
      inputs["point"] = point == "O" ? Json("O") : text_array(split(point));
    } else if (command == "solvable") {
      inputs["surface"] = text_array(split(surface));
      inputs["prime"] = prime;
    } else if (command == "selftest") {
      inputs["seed"] = seed;
    }
    Json doc = run(command, inputs, text && command == "selftest" ? &out : nullptr);
    if (!(text && command == "selftest")) emit(doc);
    if (command == "selftest" && !doc.at("result").get<bool>()) return kExitMath;
    return kExitOk;
  } catch (const InputError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const MathError& e) {
    emit(Json{{"schema", kSchema}, {"command", command}, {"inputs", inputs}, {"error", {{"kind", "math"}, {"message", e.what()}}}});
    return kExitMath;
  } catch (const PrecisionError& e) {
    emit(Json{{"schema", kSchema}, {"command", command}, {"inputs", inputs},
              {"error", {{"kind", "precision"}, {"message", e.what()}}}});
    return kExitPrecision;
  }
}

}  // namespace qb::cli
