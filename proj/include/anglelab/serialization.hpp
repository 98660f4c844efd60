#pragma once

// JSON and CSV forms of trial ensembles. Reals are written in the shortest
// form that round-trips, so a fixed run always produces the same bytes.

#include <string>

#include "anglelab/limits.hpp"
#include "json.hpp"

namespace anglelab {

// {spec, d, n, trials, lambda: {value, method, stderr}, seed, y_values, gaps,
//  ks, tail: [{c, empirical, theoretical, stderr}], resampled, cross_checked}
// The tail table is empty below 100 trials.
nlohmann::ordered_json ensemble_to_json(const TrialEnsemble& e);

// Parses and re-validates: field presence and types, y_values >= 0, sizes
// matching `trials`, and every y recomputed from its gap to 1e-12 relative.
// Throws ValidationError on any mismatch.
TrialEnsemble ensemble_from_json(const nlohmann::ordered_json& j);

// "y,ecdf" rows at the jumps of the empirical CDF.
std::string ecdf_csv(const GofReport& report);

}  // namespace anglelab
