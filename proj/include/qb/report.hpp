#pragma once

#include <string>

#include "json.hpp"
#include "qb/brauer.hpp"
#include "qb/search.hpp"

namespace qb {

using Json = nlohmann::json;

inline constexpr const char* kSchema = "qb-1";

Json to_json(const Padic& x);
Padic padic_from_json(const Json& j);
Json to_json(const PadicPoint& l);
PadicPoint padic_point_from_json(const Json& j);

Json to_json(const ReductionProfile& r);
Json to_json(const FiltrationLevel& l);
Json to_json(const DivisibilityTranscript& t);
Json to_json(const OddBrauerClass& c);
Json to_json(const LocalNormalForm& nf);
Json to_json(const EvaluationVerdict& v);
Json to_json(const WitnessSet& w);
Json to_json(const SearchReport& r);

/// {schema, command, inputs, result, certificate, precision_used}
Json envelope(const std::string& command, Json inputs, Json result, Json certificate, long precision_used);

/// Recomputes the zero/nonzero verdict from an evaluation certificate alone:
/// the reference surface, the point on it and the two S-tests. Returns the
/// verdict, or throws MathError when the certificate is inconsistent.
Verdict recheck_evaluation_certificate(const Json& certificate);

}  // namespace qb
