#include "doctest.h"

#include <random>
#include <set>

#include "oracles.hpp"
#include "sepdet/error.hpp"
#include "sepdet/harness.hpp"

using namespace sepdet;

namespace {

SuiteConfig small(std::string_view suite, std::size_t instances, std::size_t n) {
    auto config = default_config(suite);
    config.instances = instances;
    config.n_min = n;
    config.n_max = n;
    return config;
}

}  // namespace

TEST_CASE("suite names and aliases") {
    const auto names = suite_names();
    CHECK(names.size() == 11);
    CHECK(canonical_suite("thm-2.1") == "sup-reduction");
    CHECK(canonical_suite("thm-2.2") == "inf-reduction");
    CHECK(canonical_suite("prop-1.1") == "family-intersection");
    CHECK(canonical_suite("thm-2.3") == "product-reduction");
    CHECK(canonical_suite("thm-3.1") == "semicontinuity");
    CHECK(canonical_suite("prop-3.2") == "lipschitz-pairs");
    CHECK(canonical_suite("thm-3.3") == "lipschitz-modulus");
    CHECK(canonical_suite("prop-4.1") == "torus");
    CHECK(canonical_suite("thm-4.2") == "slope");
    CHECK(canonical_suite("thm-4.3") == "partial-slope");
    for (const auto& name : names) CHECK(canonical_suite(name) == name);
    CHECK(!canonical_suite("thm-9.9"));
    try {
        run_suite("thm-9.9", SuiteConfig{});
        FAIL("expected UnknownSuite");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnknownSuite);
    }
}

TEST_CASE("random metrics satisfy the axioms") {
    std::mt19937_64 rng(7);
    for (auto method : {SpaceMethod::euclidean, SpaceMethod::shortest_path}) {
        for (int trial = 0; trial < 10; ++trial) {
            const auto space = random_finite_metric(12, rng, method);
            CHECK(space.size() == 12);
            for (PointIndex a = 0; a < 12; ++a)
                for (PointIndex b = 0; b < 12; ++b) {
                    CHECK(space.distance(a, b) == space.distance(b, a));
                    CHECK((space.distance(a, b) > 0) == (a != b));
                    for (PointIndex c = 0; c < 12; ++c)
                        CHECK(space.distance(a, c) <= space.distance(a, b) + space.distance(b, c) + 1e-12);
                }
        }
    }
    std::mt19937_64 one(3);
    std::mt19937_64 two(3);
    CHECK(space_to_json(random_finite_metric(9, one, SpaceMethod::mixed)) ==
          space_to_json(random_finite_metric(9, two, SpaceMethod::mixed)));
}

TEST_CASE("random functions are proper") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 40; ++trial) {
        const auto space = random_finite_metric(10, rng, SpaceMethod::mixed);
        const auto f = random_function(space, rng, true);
        bool finite = false;
        for (const auto& v : f.values()) {
            CHECK(!v.is_minus_infinity());
            finite = finite || v.is_finite();
        }
        CHECK(finite);
    }
}

TEST_CASE("brute force agrees with a direct scan") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        auto space = std::make_shared<const MetricSpace>(random_finite_metric(8, rng, SpaceMethod::shortest_path));
        auto f = std::make_shared<const FunctionOracle>(random_function(*space, rng, false));
        const auto problem = ball_pair_problem(space, f);
        std::vector<double> values;
        for (const auto& v : f->values()) values.push_back(v.value());
        const auto pool = oracle::everything(*space);
        for (PointIndex x = 0; x < 8; ++x)
            for (const auto& p : problem.params.truncation(x)) {
                const double expected = oracle::pair_optimum(*space, values, x, p[0], pool, true);
                if (std::isnan(expected)) continue;
                CHECK(brute_force_optimum(problem, x, p).value() == expected);
            }
    }
}

TEST_CASE("small suites pass") {
    const auto sup = run_suite("thm-2.1", small("thm-2.1", 3, 5));
    CHECK(sup.suite == "sup-reduction");
    CHECK(sup.instances == 3);
    CHECK(sup.tallies.at("instances").pass == 3);
    CHECK(sup.all_passed());

    for (const auto& name : suite_names()) {
        CAPTURE(name);
        const auto report = run_suite(name, small(name, 2, 6));
        CHECK(report.all_passed());
        CHECK(report.monotone_violations == 0);
        CHECK(report.failures.empty());
    }
}

TEST_CASE("degenerate suites skip instead of failing") {
    const auto single = run_suite("prop-3.2", small("prop-3.2", 4, 1));
    CHECK(single.failed() == 0);
    std::size_t skipped = 0;
    for (const auto& [name, tally] : single.tallies)
        if (name != "instances") skipped += tally.skipped;
    CHECK(skipped > 0);

    auto empty_shells = small("prop-4.1", 3, 6);
    empty_shells.shell_rule = ShellRule::empty;
    const auto torus = run_suite("prop-4.1", empty_shells);
    CHECK(torus.failed() == 0);
    CHECK(torus.tallies.at("torus-sup").pass == 0);
    CHECK(torus.tallies.at("torus-sup").skipped > 0);

    auto bad = SuiteConfig{};
    bad.n_min = 0;
    CHECK_THROWS_AS(run_suite("slope", bad), Error);
    bad.n_min = 10;
    bad.n_max = 5;
    CHECK_THROWS_AS(run_suite("slope", bad), Error);
}

TEST_CASE("reports are deterministic and replayable") {
    const auto config = small("thm-2.2", 4, 8);
    const auto first = to_json(run_suite("thm-2.2", config)).dump();
    const auto second = to_json(run_suite("thm-2.2", config)).dump();
    CHECK(first == second);

    auto merged = run_instance("thm-2.2", config, 0);
    for (std::size_t i = 1; i < 4; ++i) merged.merge(run_instance("thm-2.2", config, i));
    const auto whole = run_suite("thm-2.2", config);
    CHECK(!merged.tallies.contains("instances"));
    for (const auto& [name, tally] : merged.tallies) {
        CAPTURE(name);
        CHECK(tally.pass == whole.tallies.at(name).pass);
        CHECK(tally.skipped == whole.tallies.at(name).skipped);
    }
    CHECK(merged.closure.level_sizes == whole.closure.level_sizes);

    std::set<std::uint64_t> seeds;
    for (std::size_t i = 0; i < 50; ++i) seeds.insert(instance_seed(1, i));
    CHECK(seeds.size() == 50);
    CHECK(instance_seed(1, 0) != instance_seed(2, 0));

    const auto report = to_json(whole);
    CHECK(report["suite"] == "inf-reduction");
    CHECK(!report.contains("runtime_seconds"));
    CHECK(report["monotone_violations"] == 0);
    CHECK(summary_table(whole).find("inf-reduction") != std::string::npos);
}
