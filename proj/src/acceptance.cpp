#include "qb/acceptance.hpp"

#include <chrono>
#include <functional>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>

#include "qb/brauer.hpp"
#include "qb/errors.hpp"
#include "qb/search.hpp"

namespace qb {

namespace {

using RPoint = ECPoint<Rational>;

// Verdicts keyed by a short description, plus the checks that went wrong.
struct Sheet {
  std::map<std::string, std::string> verdicts;
  std::vector<std::string> failures;
  long checks = 0;

  void record(const std::string& key, const std::string& verdict, bool ok) {
    verdicts[key] = verdict;
    ++checks;
    if (!ok) failures.push_back(key + " -> " + verdict);
  }
  void error(const std::string& key, const std::exception& e) {
    verdicts[key] = std::string("error: ") + e.what();
    ++checks;
    failures.push_back(key + " -> " + e.what());
  }
  std::string summary() const {
    std::ostringstream s;
    s << checks - static_cast<long>(failures.size()) << "/" << checks << " checks";
    if (!failures.empty()) s << "; first failure: " << failures.front();
    return s.str();
  }
};

struct Surface {
  std::string name;
  DiagonalQuartic d;
};

std::vector<Surface> reference_surfaces() {
  return {{"A1", quartic_of(1, -1, 1, -5)},      {"B1", quartic_of(1, -1, 25, -125)},
          {"C5", quartic_of(2, 2, 4, 5)},        {"A3", quartic_of(1, 1, 1, -27)},
          {"B3", quartic_of(1, -1, 3, 9)},       {"C3", quartic_of(1, 1, 2, -216)}};
}

std::string point_key(const IntPoint& q) {
  std::ostringstream s;
  s << "(" << q[0] << "," << q[1] << "," << q[2] << "," << q[3] << ")";
  return s.str();
}

std::string bool_word(bool b) { return b ? "true" : "false"; }

// 1
CriterionResult classifier_anchors() {
  Sheet sh;
  auto check = [&](const std::string& key, const DiagonalQuartic& d, OddClass want) {
    try {
      auto c = classify_odd(d);
      sh.record(key, c.str(), c.value == want);
    } catch (const std::exception& e) {
      sh.error(key, e);
    }
  };
  check("[1,3,4,9]", quartic_of(1, 3, 4, 9), OddClass::Z3);
  for (long n : {1L, 2L, 3L, 7L})
    check("A_" + std::to_string(n), DiagonalQuartic::from_rationals({1, -1, n, Rational(-5 * n * n * n)}), OddClass::Z5);
  for (int eps : {0, 1}) check("co3.1 n=1 eps=" + std::to_string(eps), family_surface(CorollaryFamily::Co3_1, 1, eps), OddClass::Z3);
  check("[1,1,1,1]", quartic_of(1, 1, 1, 1), OddClass::Trivial);
  return {1, "classifier anchors", sh.failures.empty(), sh.summary(), 0};
}

// 2
CriterionResult reduction_counts() {
  Sheet sh;
  auto r5 = reduction_profile(Rational(18496), 5);
  sh.record("#E(F_5), m=18496", std::to_string(r5.smooth_count), r5.smooth_count == 8 && r5.kind == ReductionKind::Good);
  auto r3 = reduction_profile(Rational(1156), 3);
  sh.record("#E(F_3), m=1156", std::to_string(r3.smooth_count), r3.smooth_count == 4 && r3.kind == ReductionKind::Good);
  sh.record("enumeration F_5", std::to_string(count_smooth_points(18496 % 5, 5)), count_smooth_points(18496 % 5, 5) == 8);
  sh.record("enumeration F_3", std::to_string(count_smooth_points(1156 % 3, 3)), count_smooth_points(1156 % 3, 3) == 4);
  return {2, "reduction counts", sh.failures.empty(), sh.summary(), 0};
}

// 3
CriterionResult valuation_anchors() {
  Sheet sh;
  CurveEm<Rational> e{Rational(1156)};
  RPoint p = RPoint::affine(-16, -120);
  RPoint s = point_add(e, p, RPoint::affine(34, 0));
  RPoint t = point_add(e, p, RPoint::affine(-34, 0));
  sh.record("x(P+(34,0))", to_string(s.x), !s.infinity && s.x == Rational(-306, 25) && e.contains(s));
  sh.record("val_5", std::to_string(valuation(s.x, 5)), valuation(s.x, 5) == -2);
  sh.record("x(P+(-34,0))", to_string(t.x), !t.infinity && t.x == Rational(850, 9) && e.contains(t));
  sh.record("val_3", std::to_string(valuation(t.x, 3)), valuation(t.x, 3) == -2);
  return {3, "valuation anchors", sh.failures.empty(), sh.summary(), 0};
}

// 4
Sheet divisibility_sheet(long n, std::uint64_t seed) {
  Sheet sh;
  try {
    bool div = is_divisible_by_ell(Rational(18496), RPoint::affine(-64, -960), 5, 5, n);
    sh.record("P on m=18496 at 5", bool_word(div), !div);
  } catch (const std::exception& e) {
    sh.error("P on m=18496 at 5", e);
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> d(1, 40);
  for (int i = 0; i < 20;) {
    Rational a = d(rng), b = -d(rng), x = d(rng), y = d(rng);
    if (a * x * x * x * x + b * y * y * y * y == 0) continue;
    for (int ell : {3, 5}) {
      std::string key = "S_2 ell=" + std::to_string(ell) + " " + to_string(a) + "," + to_string(b) + ":" +
                        to_string(x) + "," + to_string(y);
      try {
        bool div = s_test(a, b, x, y, 2, ell, n).divisible;
        sh.record(key, bool_word(div), div);
      } catch (const std::exception& e) {
        sh.error(key, e);
      }
    }
    ++i;
  }
  // ab a square in Z_5: S_5(a,b:x,y) holds iff val(xy) = r > 1
  std::uniform_int_distribution<int> u(1, 124);
  for (int sampled = 0; sampled < 20;) {
    Rational x0 = u(rng), y0 = u(rng);
    if (x0.get_num() % 5 == 0 || y0.get_num() % 5 == 0) continue;
    for (auto [a, b] : {std::pair<Rational, Rational>{1, -1}, {2, -2}, {1, -4}}) {
      for (long r = 1; r <= 3; ++r) {
        Rational x = x0 * Rational(ipow(5, r));
        std::string key = "r=" + std::to_string(r) + " " + to_string(a) + "," + to_string(b) + ":" + to_string(x) +
                          "," + to_string(y0);
        try {
          bool div = s_test(a, b, x, y0, 5, 5, n).divisible;
          bool swapped = s_test(a, b, y0, x, 5, 5, n).divisible;
          sh.record(key, bool_word(div) + "/" + bool_word(swapped), div == (r > 1) && swapped == (r > 1));
        } catch (const std::exception& e) {
          sh.error(key, e);
        }
      }
    }
    ++sampled;
  }
  return sh;
}

// 5 and 6 share the witness sets.
struct WitnessRun {
  std::string name;
  WitnessSet set;
  std::string error;
};

std::vector<WitnessRun> witness_runs(long n) {
  std::vector<WitnessRun> out;
  for (const auto& s : reference_surfaces()) {
    WitnessRun w{s.name, {}, {}};
    try {
      w.set = surjectivity_witnesses(s.d, n);
    } catch (const std::exception& e) {
      w.error = e.what();
    }
    out.push_back(std::move(w));
  }
  return out;
}

using PointCache = std::map<std::string, std::vector<IntPoint>>;

PointCache rational_points(long height, unsigned threads) {
  PointCache c;
  for (const auto& s : reference_surfaces()) c[s.name] = sign_closure(integral_points(s.d, height, threads));
  return c;
}

Sheet evaluation_sheet(long n, std::uint64_t seed, const PointCache& points, const std::vector<WitnessRun>& ws) {
  Sheet sh;
  for (const auto& s : reference_surfaces()) {
    int ell = classify_odd(s.d).ell();
    // (a) rational points at p = ell
    for (const IntPoint& q : points.at(s.name)) {
      std::string key = "(a) " + s.name + " " + point_key(q);
      try {
        RationalPoint l{{Rational(q[0]), Rational(q[1]), Rational(q[2]), Rational(q[3])}};
        auto v = evaluate(s.d, ell, l, n);
        sh.record(key, to_string(v.value), v.value == Verdict::Zero);
      } catch (const std::exception& e) {
        sh.error(key, e);
      }
    }
    // (b) sampled points away from ell
    for (long p : {2L, 7L, 13L}) {
      std::vector<PadicPoint> pts;
      try {
        pts = sample_points(s.d, p, 20, seed + static_cast<std::uint64_t>(p), n);
      } catch (const std::exception& e) {
        sh.error("(b) " + s.name + " sampling at " + std::to_string(p), e);
        continue;
      }
      if (pts.size() < 20) sh.record("(b) " + s.name + " sample count at " + std::to_string(p), std::to_string(pts.size()), false);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        std::string key = "(b) " + s.name + " p=" + std::to_string(p) + " #" + std::to_string(i);
        try {
          auto v = evaluate(s.d, p, pts[i], n);
          sh.record(key, to_string(v.value), v.value == Verdict::Zero);
        } catch (const std::exception& e) {
          sh.error(key, e);
        }
      }
    }
  }
  // (c) reference witnesses
  for (const auto& w : ws) {
    std::string key = "(c) " + w.name;
    if (!w.error.empty()) {
      sh.record(key, "error: " + w.error, false);
      continue;
    }
    const auto& v = w.set.orbit.front().verdict;
    sh.record(key + " " + w.set.recipe, to_string(v.value), v.value == Verdict::Nonzero);
  }
  return sh;
}

Sheet orbit_sheet(const std::vector<WitnessRun>& ws) {
  Sheet sh;
  for (const auto& w : ws) {
    if (!w.error.empty()) {
      sh.record(w.name, "error: " + w.error, false);
      continue;
    }
    std::vector<int> want = w.set.ell == 5 ? std::vector<int>{1, 2, 4, 3} : std::vector<int>{1, -1};
    std::vector<int> got;
    for (const auto& e : w.set.orbit) {
      got.push_back(e.multiplier);
      sh.record(w.name + " " + e.move, to_string(e.verdict.value), e.verdict.value == Verdict::Nonzero);
    }
    std::ostringstream m;
    for (int g : got) m << g << " ";
    sh.record(w.name + " multipliers", m.str(), got == want && !w.set.multipliers_verified);
  }
  return sh;
}

// 7
CriterionResult corollary_searches(long bound, unsigned threads) {
  Sheet sh;
  std::vector<std::pair<CorollaryFamily, long>> runs = {{CorollaryFamily::Co1_1, 1}, {CorollaryFamily::Co1_1, 2},
                                                        {CorollaryFamily::Co1_2, 1}, {CorollaryFamily::Co3_1, 1},
                                                        {CorollaryFamily::Co3_1, 4}, {CorollaryFamily::Co3_2, 1}};
  long total = 0;
  for (auto [f, n] : runs)
    for (int eps : {0, 1}) {
      std::string key = to_string(f) + " n=" + std::to_string(n) + " eps=" + std::to_string(eps);
      try {
        auto r = verify_corollary(f, n, eps, bound, threads);
        total += static_cast<long>(r.points.size());
        sh.record(key, std::to_string(r.points.size()) + " points, " + std::to_string(r.violations.size()) + " violations",
                  r.violations.empty());
      } catch (const std::exception& e) {
        sh.error(key, e);
      }
    }
  return {7, "corollary searches (B=" + std::to_string(bound) + ")", sh.failures.empty(),
          sh.summary() + ", " + std::to_string(total) + " canonical points", 0};
}

// 8
CriterionResult oracle_equivalence(long n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(-30, 30), den(1, 5);
  auto random_rational = [&] {
    Rational q(num(rng), den(rng));
    q.canonicalize();
    return q;
  };
  long agree = 0, disagree = 0, errors = 0, cases = 0;
  std::string first_disagreement;
  const int per_cell = 7;
  for (int ell : {3, 5})
    for (long p : {3L, 5L, 7L, 13L})
      for (bool additive : {false, true})
        for (bool multiple : {false, true}) {
          int done = 0;
          for (int attempt = 0; attempt < 5000 && done < per_cell; ++attempt) {
            Rational x = random_rational(), y = random_rational();
            if (additive) {
              // m = p^2 x^2 - p y^2 / x has valuation 1 when p divides neither
              x *= Rational(p);
              y *= Rational(p);
            }
            if (x == 0 || y == 0) continue;
            Rational m = (x * x * x - y * y) / x;
            if (m == 0) continue;
            auto prof = reduction_profile(m, p);
            if ((prof.kind == ReductionKind::Additive) != additive) continue;
            CurveEm<Rational> e{m};
            RPoint r = RPoint::affine(x, y);
            if (multiple) r = scalar_mul(e, ell, r);
            if (r.infinity || scalar_mul(e, 2 * ell, r).infinity) continue;
            ++cases;
            ++done;
            try {
              bool a = is_divisible_by_ell(m, r, ell, p, n);
              bool b = is_divisible_oracle(m, r, ell, p, n);
              if (a == b && (!multiple || a)) {
                ++agree;
              } else {
                ++disagree;
                if (first_disagreement.empty())
                  first_disagreement = "m=" + to_string(m) + " x=" + to_string(r.x) + " ell=" + std::to_string(ell) +
                                       " p=" + std::to_string(p);
              }
            } catch (const std::exception&) {
              ++errors;
            }
          }
        }
  std::ostringstream s;
  s << cases << " cases, " << agree << " agree, " << disagree << " disagree, " << errors << " errors";
  if (!first_disagreement.empty()) s << "; first disagreement " << first_disagreement;
  bool ok = cases >= 200 && disagree == 0 && errors * 20 < cases;
  return {8, "structural test vs division-polynomial oracle", ok, s.str(), 0};
}

std::string compare(const Sheet& lo, const Sheet& hi, long& compared) {
  for (const auto& [key, v] : lo.verdicts) {
    ++compared;
    auto it = hi.verdicts.find(key);
    if (it == hi.verdicts.end()) return key + " missing at the higher precision";
    if (it->second != v) return key + ": " + v + " vs " + it->second;
  }
  if (hi.verdicts.size() != lo.verdicts.size()) return "different numbers of checks";
  return {};
}

}  // namespace

std::string format_line(const CriterionResult& r) {
  std::ostringstream s;
  s << (r.passed ? "PASS" : "FAIL") << "  " << r.id << ". " << r.title << " [" << std::fixed << std::setprecision(1)
    << r.seconds << "s] " << r.detail;
  return s.str();
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, std::ostream& out) {
  std::vector<CriterionResult> results;
  auto timed = [&](const std::function<CriterionResult()>& run) {
    auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = run();
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("uncaught: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out << format_line(r) << std::endl;
    results.push_back(r);
  };
  const long n = options.precision;
  const std::uint64_t seed = options.seed;

  timed(classifier_anchors);
  timed(reduction_counts);
  timed(valuation_anchors);

  Sheet div_lo, eval_lo, orbit_lo;
  PointCache points;
  timed([&] {
    div_lo = divisibility_sheet(n, seed);
    return CriterionResult{4, "divisibility anchors", div_lo.failures.empty(), div_lo.summary(), 0};
  });
  std::vector<WitnessRun> ws_lo;
  timed([&] {
    points = rational_points(options.rational_height, options.threads);
    ws_lo = witness_runs(n);
    eval_lo = evaluation_sheet(n, seed, points, ws_lo);
    long rational = 0;
    for (const auto& [k, v] : points) rational += static_cast<long>(v.size());
    return CriterionResult{5, "evaluation properties", eval_lo.failures.empty(),
                           eval_lo.summary() + ", " + std::to_string(rational) + " rational points", 0};
  });
  timed([&] {
    orbit_lo = orbit_sheet(ws_lo);
    return CriterionResult{6, "witness orbits", orbit_lo.failures.empty(),
                           orbit_lo.summary() + ", multipliers from orbit relations (not independently verified)", 0};
  });
  timed([&] { return corollary_searches(options.corollary_bound, options.threads); });
  timed([&] { return oracle_equivalence(n, seed); });
  timed([&] {
    const long hi = 2 * n;
    Sheet div_hi = divisibility_sheet(hi, seed);
    auto ws_hi = witness_runs(hi);
    Sheet eval_hi = evaluation_sheet(hi, seed, points, ws_hi);
    Sheet orbit_hi = orbit_sheet(ws_hi);
    long compared = 0;
    std::string diff = compare(div_lo, div_hi, compared);
    if (diff.empty()) diff = compare(eval_lo, eval_hi, compared);
    if (diff.empty()) diff = compare(orbit_lo, orbit_hi, compared);
    std::string detail = std::to_string(compared) + " verdicts compared at N=" + std::to_string(n) + " and N=" +
                         std::to_string(hi);
    if (!diff.empty()) detail += "; changed: " + diff;
    return CriterionResult{9, "precision stability", diff.empty(), detail, 0};
  });
  return results;
}

}  // namespace qb
