#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qb/quartic.hpp"

namespace qb {

using IntPoint = std::array<long, 4>;

/// Primitive integer solutions with max |coordinate| <= bound. Only the
/// representatives with every coordinate >= 0 are returned, sorted; every
/// sign change of a solution is again a solution.
std::vector<IntPoint> integral_points(const DiagonalQuartic& d, long bound, unsigned threads = 1);

/// All sign variants of the given canonical points, sorted and deduplicated.
std::vector<IntPoint> sign_closure(const std::vector<IntPoint>& canonical);

enum class CorollaryFamily { Co1_1, Co1_2, Co3_1, Co3_2 };

CorollaryFamily parse_family(const std::string& s);
std::string to_string(CorollaryFamily f);

/// The surface of a family for parameters (n, eps).
DiagonalQuartic family_surface(CorollaryFamily f, long n, int eps);

struct SearchReport {
  CorollaryFamily family = CorollaryFamily::Co1_1;
  long n = 1;
  int eps = 0;
  long bound = 0;
  DiagonalQuartic surface;
  std::string condition;               // e.g. "25 | xyzw"
  std::vector<std::string> hypotheses; // what was checked on the coefficients
  std::vector<IntPoint> points;        // canonical representatives
  std::vector<IntPoint> violations;
};

/// Checks the family hypotheses (throws MathError when they fail), searches
/// the box and tests the divisibility condition on every point found.
SearchReport verify_corollary(CorollaryFamily f, long n, int eps, long bound, unsigned threads = 1);

/// Decides D(Q_p) != {} by lifting primitive solutions modulo p^k. A node is
/// accepted as soon as fixing three coordinates leaves a p-adic fourth power
/// for the fourth. Throws PrecisionError when neither outcome is reached
/// within the depth bound 2 val_p(4 max coeff) + 3 or the node budget.
bool is_locally_soluble(const DiagonalQuartic& d, long p, long precision = kDefaultPrecision);

/// Per-coordinate exact valuations; nullopt leaves a coordinate free.
using ValuationConstraints = std::array<std::optional<long>, 4>;

/// A point of D(Q_p) with xyzw * f != 0 meeting the constraints. Three
/// coordinates are small integers (enumerated in increasing size), the
/// fourth a p-adic fourth root; x is tried as the solved coordinate first.
PadicPoint find_smooth_point(const DiagonalQuartic& d, long p, long precision,
                             const ValuationConstraints& constraints = {});

/// Seeded random points of D(Q_p) with xyzw * f != 0.
std::vector<PadicPoint> sample_points(const DiagonalQuartic& d, long p, std::size_t count, std::uint64_t seed,
                                      long precision = kDefaultPrecision);

}  // namespace qb
