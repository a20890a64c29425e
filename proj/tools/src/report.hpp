#pragma once

#include <json.hpp>

#include "khess/analysis.hpp"
#include "khess/integrator.hpp"
#include "khess/model.hpp"
#include "khess/shooting.hpp"

namespace khess::cli {

using nlohmann::ordered_json;

ordered_json to_json(const Params& p);
ordered_json to_json(const IntegratorConfig& cfg);
/// Classification report; `sign` reflects a negative shooting height.
ordered_json to_json(const ClassificationResult& r, const Params& p, int sign = 1);
ordered_json to_json(const Bracket& b);
ordered_json to_json(const ShootResult& s);

/// Doubles that are not finite become null.
ordered_json number(double x);

}  // namespace khess::cli
