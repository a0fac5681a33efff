#pragma once

#include <iosfwd>

#include "json.hpp"

#include "kolmo/feasibility.hpp"
#include "kolmo/verify.hpp"

namespace kolmo {

/// {breakpoints: [...], segments: [[c0, c1, ...], ...], left_tail: v}
nlohmann::json to_json(const PiecewisePolynomial& p);
PiecewisePolynomial piecewise_from_json(const nlohmann::json& j);

/// Object keyed by the derivative order as a decimal string.
nlohmann::json to_json(const NormProfile& profile);
NormProfile profile_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ExtremalParams& params);
ExtremalParams params_from_json(const nlohmann::json& j);

nlohmann::json to_json(const FeasibilityReport& report);
nlohmann::json to_json(const Witness& witness);
Witness witness_from_json(const nlohmann::json& j);

/// One JSON object per line: a header describing grid densities and
/// tolerances, one entry per trial, and a trailing summary.
void write_jsonl(const SweepReport& report, std::ostream& out);

} // namespace kolmo
