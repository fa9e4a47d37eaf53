#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qb/quartic.hpp"

namespace qb {

enum class OddClass { Trivial, Z3, Z5, Both };

/// Odd part of Br(D)/Br_0(D). Both can only come out of a local test, where
/// the two coset conditions are not exclusive.
struct OddBrauerClass {
  OddClass value = OddClass::Trivial;
  bool z3_condition = false;  // -3abcd in <-4>Q^{*4}
  bool z5_condition = false;  // 125abcd in <-4>Q^{*4}
  long prime = 0;             // 0 for the global test
  std::string witness_condition;

  int ell() const;
  std::string str() const;
};

/// local_prime = 0 runs the global test, otherwise memberships are tested in Q_p.
OddBrauerClass classify_odd(const DiagonalQuartic& d, long local_prime = 0, long precision = kDefaultPrecision);

enum class Verdict { Zero, Nonzero };
std::string to_string(Verdict v);

struct EvaluationVerdict {
  Verdict value = Verdict::Zero;
  int ell = 0;
  long p = 0;  // 0 is the real place
  std::string rule;
  std::optional<LocalNormalForm> normal_form;
  std::optional<PadicPoint> evaluated_point;  // on the normal form, after any deformation
  bool deformed = false;
  long deformation_step = 0;
  std::optional<DivisibilityTranscript> s_ab;
  std::optional<DivisibilityTranscript> s_cd;
  long precision_used = 0;
};

/// The local invariant of the odd-order Brauer class at L in D(Q_p), as a
/// zero/nonzero verdict. p = 0 is the real place.
EvaluationVerdict evaluate(const DiagonalQuartic& d, long p, const PadicPoint& l, long precision = kDefaultPrecision);
/// Rational input; retries once at twice the precision on PrecisionError.
EvaluationVerdict evaluate(const DiagonalQuartic& d, long p, const RationalPoint& l,
                           long precision = kDefaultPrecision);

/// The criterion on a reference surface at p = ell, for a point with
/// xyzw * f != 0.
EvaluationVerdict evaluate_on_normal_form(const LocalNormalForm& nf, const PadicPoint& m, long precision);

/// Moves a point of `d` off the locus xyzw * f = 0: coordinates that vanish
/// (and one of x, y when f = 0) are shifted by p^step and the coordinate with
/// the smallest val(4 e_j v_j^3) is re-solved by Hensel lifting.
PadicPoint deform_point(const DiagonalQuartic& d, const PadicPoint& l, long step, long precision);

/// Divides a point by the smallest power of p among its coordinates.
PadicPoint primitive(const PadicPoint& l);

struct OrbitEntry {
  PadicPoint point;
  int multiplier = 1;
  std::string move;
  EvaluationVerdict verdict;
};

struct WitnessSet {
  int ell = 0;
  std::string recipe;
  std::string normal_form;
  PadicPoint base;
  std::vector<OrbitEntry> orbit;
  // The multipliers come from the orbit relations, not from an independent
  // computation of the invariant.
  bool multipliers_verified = false;
};

/// ell = 5: (i^k x, y, z, w) with multipliers 2^k mod 5; ell = 3: L and
/// (-x, y, z, w) with multipliers 1, -1. Throws MathError unless the base
/// evaluates Nonzero.
WitnessSet witness_orbit(const DiagonalQuartic& d, const PadicPoint& base, long precision = kDefaultPrecision);

/// Builds the reference point on the local normal form, pulls it back to D and
/// returns its orbit.
WitnessSet surjectivity_witnesses(const DiagonalQuartic& d, long precision = kDefaultPrecision);

/// The reference point of a normal form, in normal-form coordinates.
PadicPoint reference_witness(const LocalNormalForm& nf, long precision, std::string* recipe = nullptr);

}  // namespace qb
