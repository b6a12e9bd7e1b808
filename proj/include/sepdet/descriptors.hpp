#pragma once

// JSON formats: space, function and problem descriptors in; closure and check reports out.

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "sepdet/functionals.hpp"
#include "sepdet/problems.hpp"
#include "sepdet/scheme.hpp"

namespace sepdet {

using json = nlohmann::json;

/// "3", "-1/4", "0.125" or a JSON number (taken at its exact binary value).
Rational parse_rational(const json& value, const std::string& field);

/// A number, or one of "+inf", "inf", "-inf".
ExtReal parse_ext_real(const json& value, const std::string& field);
json to_json(ExtReal value);

/**
 * { "kind": "finite", "metric": "euclidean" | "matrix", "points": [...], "matrix": [[...]] }
 *
 * Euclidean points are {"id": ..., "coords": [...]} objects or bare coordinate
 * arrays (ids p0, p1, ...). Matrix points are id strings; when omitted the ids
 * are p0, p1, .... Throws BadDescriptor naming the field, or MetricAxiomViolation.
 */
MetricSpace parse_space(const json& descriptor);
json space_to_json(const MetricSpace& space);

/**
 * Either tabulated values, {"values": {"p0": 1, "p1": "+inf"}} or {"values": [1, "+inf"]},
 * or a closed form over one coordinate:
 * {"form": "coord" | "linear" | "quadratic" | "abs" | "step" | "constant",
 *  "coordinate": 0, "scale": 1, "offset": 0, "threshold": 0, "low": 0, "high": 1, "value": 0}.
 */
FunctionOracle parse_function(const json& descriptor, const MetricSpace& space);

/// A bare form name ("coord", "abs", ...) with default coefficients.
FunctionOracle named_function(const std::string& form, const MetricSpace& space);

json function_to_json(const FunctionOracle& f, const MetricSpace& space);

/**
 * { "family": "ball-pairs" | "torus-slope" | "punctured-ball", "mode": "sup" | "inf",
 *   "space": {...}, "function": {...}, "params": {"bounds": [lo, hi], "density": 4},
 *   "seed": ["p0"], "eps": 0, "cap": 1, "max_depth": 64 }
 *
 * "space" and "function" may be omitted when supplied separately.
 */
struct ProblemDescriptor {
    ProblemFamily family = ProblemFamily::ball_pairs;
    Mode mode = Mode::sup;
    std::optional<json> space;
    std::optional<json> function;
    double lower_bound = 0.0;
    double upper_bound = std::numeric_limits<double>::infinity();
    std::size_t density = 0;
    std::vector<std::string> seed;
    ClosureConfig closure;
};

ProblemDescriptor parse_problem(const json& descriptor);

/// The registered family with its truncation clipped to the descriptor's bounds.
WitnessProblem build_problem(const ProblemDescriptor& descriptor, std::shared_ptr<const MetricSpace> space,
                             std::shared_ptr<const FunctionOracle> f);

json to_json(const DeterminacyCheck& check, const MetricSpace& space);
json to_json(const GeneratedSubspace& generated, const MetricSpace& space);

/// Reads a JSON file; BadDescriptor on I/O or syntax errors.
json load_json_file(const std::string& path);

}  // namespace sepdet
