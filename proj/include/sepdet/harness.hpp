#pragma once

// Random instances, brute-force oracles and the property suites.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "sepdet/descriptors.hpp"
#include "sepdet/functionals.hpp"
#include "sepdet/problems.hpp"
#include "sepdet/rich_families.hpp"
#include "sepdet/scheme.hpp"

namespace sepdet {

enum class SpaceMethod { euclidean, shortest_path, mixed };

/// How check grids are built: every realized region, or shells that miss every point.
enum class ShellRule { realizing, empty };

enum class FunctionShape { tabulated, linear, quadratic, abs, step };

std::string_view to_string(SpaceMethod method);
std::string_view to_string(FunctionShape shape);
std::string_view to_string(ShellRule rule);

struct SuiteConfig {
    std::uint64_t seed = 1;
    std::size_t instances = 100;
    std::size_t n_min = 5;
    std::size_t n_max = 30;
    SpaceMethod method = SpaceMethod::mixed;
    ClosureConfig closure{0.0, 1, 256};
    /// Used on shortest-path spaces, whose distances are sums of dyadic weights.
    double rational_tolerance = 0.0;
    /// Used on Euclidean spaces, whose distances pass through a square root.
    double float_tolerance = 1e-12;
    /// Random parameters from Q checked per center on top of the truncation.
    std::size_t q_density = 4;
    ShellRule shell_rule = ShellRule::realizing;
    /// Size bound of the second factor in product suites.
    std::size_t right_max = 12;
    double lipschitz_k = 1.0;
    /// Planted Lipschitz violations per product instance.
    std::size_t adversarial = 1;
};

/// Defaults tuned per suite (pair scans get smaller spaces).
SuiteConfig default_config(std::string_view suite);

struct Tally {
    std::size_t pass = 0;
    std::size_t fail = 0;
    std::size_t skipped = 0;

    std::size_t total() const { return pass + fail + skipped; }
};

/// Everything needed to rebuild and rerun one failing check.
struct FailureDump {
    std::string check;
    std::size_t instance = 0;
    std::uint64_t instance_seed = 0;
    json space;
    json function;
    std::string x;
    Param param;
    ExtReal lhs;
    ExtReal rhs;
};

struct ClosureStats {
    std::size_t runs = 0;
    std::size_t fixed_points = 0;
    std::size_t deepest = 0;
    std::vector<std::vector<std::size_t>> level_sizes;
};

struct SuiteReport {
    std::string suite;
    SuiteConfig config;
    std::size_t instances = 0;
    std::map<std::string, Tally> tallies;
    std::vector<FailureDump> failures;
    ClosureStats closure;
    /// Checks where the restricted optimum beat the full one. Must stay 0.
    std::size_t monotone_violations = 0;
    std::map<std::string, std::size_t> counters;
    /// Wall time; printed, never serialized, so reports stay byte-identical.
    double runtime_seconds = 0.0;

    std::size_t failed() const;
    bool all_passed() const { return failed() == 0 && monotone_violations == 0; }
    void merge(const SuiteReport& other);
};

json to_json(const SuiteReport& report);

/// A short human-readable table.
std::string summary_table(const SuiteReport& report);

/// Random finite metric space with n points, exact per seed.
///  - euclidean: 1 to 3 dimensions, coordinates k/4 in [-10, 10], distinct points;
///  - shortest_path: random weights k/8 in (0, 10], completed by all-pairs shortest paths.
MetricSpace random_finite_metric(std::size_t n, std::mt19937_64& rng, SpaceMethod method);

/// Random proper function: tabulated k/8 in [-10, 10], or linear, quadratic, abs or step
/// in a coordinate (distance to an anchor when the space has no coordinates).
/// With `allow_infinity` a random proper subset may be sent to +inf.
FunctionOracle random_function(const MetricSpace& space, std::mt19937_64& rng, bool allow_infinity);
FunctionOracle random_function(const MetricSpace& space, std::mt19937_64& rng, bool allow_infinity,
                               FunctionShape shape);

/// Optimum of the score over every tuple of X^l (or within^l) inside G(x, p). EmptyRegion.
ExtReal brute_force_optimum(const WitnessProblem& problem, PointIndex x, const Param& p,
                            const PointSet* within = nullptr);

/// Canonical suite names; the numbered aliases resolve to these.
std::vector<std::string> suite_names();
std::optional<std::string> canonical_suite(std::string_view name);

/// Seed of instance i of a suite run.
std::uint64_t instance_seed(std::uint64_t seed, std::size_t instance);

/// One instance of a suite. Deterministic in (suite, config, instance).
SuiteReport run_instance(std::string_view suite, const SuiteConfig& config, std::size_t instance);

/// All instances; UnknownSuite for names outside suite_names() and the aliases.
SuiteReport run_suite(std::string_view suite, const SuiteConfig& config);

}  // namespace sepdet
