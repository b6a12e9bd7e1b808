#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "sepdet/error.hpp"
#include "sepdet/functionals.hpp"
#include "sepdet/harness.hpp"
#include "sepdet/problems.hpp"

using namespace sepdet;

namespace {

std::vector<double> raw(const FunctionOracle& f) {
    std::vector<double> out;
    for (ExtReal v : f.values()) out.push_back(v.value());
    return out;
}

std::shared_ptr<const FunctionOracle> share(FunctionOracle f) {
    return std::make_shared<const FunctionOracle>(std::move(f));
}

std::shared_ptr<const MetricSpace> share(MetricSpace s) { return std::make_shared<const MetricSpace>(std::move(s)); }

FunctionOracle of_coords(const MetricSpace& space, double (*rule)(double)) {
    std::vector<ExtReal> out;
    for (const auto& p : space.points()) out.push_back(rule(p.coords->front().convert_to<double>()));
    return FunctionOracle("rule", out);
}

/// -1, -0.9, ..., 1 as exact tenths.
MetricSpace tenth_grid() {
    std::vector<Rational> xs;
    for (int k = -10; k <= 10; ++k) xs.emplace_back(k, 10);
    return line_space(xs);
}

ErrorKind kind_of(auto&& action) {
    try {
        action();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::BadDescriptor;
}

}  // namespace

TEST_CASE("function oracles") {
    CHECK(kind_of([] { FunctionOracle("f", {ExtReal::plus_infinity()}); }) == ErrorKind::BadDescriptor);
    CHECK(kind_of([] { FunctionOracle("f", {std::nan("")}); }) == ErrorKind::BadDescriptor);
    const FunctionOracle f("f", {1.0, ExtReal::plus_infinity(), -2.0, 1.0});
    CHECK(f.is_proper());
    CHECK(!f.in_domain(1));
    CHECK(f.finite_levels() == std::vector<double>{-2.0, 1.0});
    CHECK(f.negated()(2) == ExtReal(2.0));
    CHECK(!f.negated().is_proper());
    CHECK(f.scaled(3.0)(0) == ExtReal(3.0));
    CHECK(default_levels(f) == std::vector<double>{-2.0, 1.0, 2.0});
}

TEST_CASE("realizing grid") {
    const auto space = line_space({0, 1, 3});
    const auto grid = ScaleGrid::realizing(space, 0);
    // distances 1 and 3: marks 0.5, 2, 4
    CHECK(grid.radii == std::vector<double>{4.0, 2.0});
    CHECK(grid.shells == std::vector<std::pair<double, double>>{{0.5, 2.0}, {0.5, 4.0}, {2.0, 4.0}});
    CHECK_NOTHROW(grid.validate());
    ScaleGrid bad;
    bad.shells = {{1.0, 1.0}};
    CHECK(kind_of([&] { bad.validate(); }) == ErrorKind::BadShell);
    bad.shells.clear();
    bad.radii = {0.0};
    CHECK(kind_of([&] { bad.validate(); }) == ErrorKind::NonPositiveRadius);
}

TEST_CASE("liminf and limsup") {
    const auto space = tenth_grid();
    SUBCASE("constant") {
        const FunctionOracle c("c", std::vector<ExtReal>(space.size(), 4.0));
        const auto grid = ScaleGrid::realizing(space, 10);
        CHECK(liminf_at(c, space, 10, grid) == ExtReal(4.0));
        CHECK(limsup_at(c, space, 10, grid) == ExtReal(4.0));
        CHECK(continuity_check(c, space, 10, grid, 0.0));
    }
    SUBCASE("a spike is invisible to the punctured limits") {
        std::vector<ExtReal> values(space.size(), 0.0);
        values[10] = 1.0;
        const FunctionOracle spike("spike", values);
        const auto grid = ScaleGrid::realizing(space, 10);
        CHECK(liminf_at(spike, space, 10, grid) == ExtReal(0.0));
        CHECK(limsup_at(spike, space, 10, grid) == ExtReal(0.0));
        CHECK(!continuity_check(spike, space, 10, grid, 0.0));
    }
    SUBCASE("step: the two one-sided clusters differ") {
        const auto step = of_coords(space, [](double c) { return c >= 0 ? 1.0 : 0.0; });
        const auto grid = ScaleGrid::realizing(space, 10);
        CHECK(liminf_at(step, space, 10, grid) == ExtReal(0.0));
        CHECK(limsup_at(step, space, 10, grid) == ExtReal(1.0));
        CHECK(!continuity_check(step, space, 10, grid, 0.0));
        // at a point away from the step the clusters agree with f
        CHECK(continuity_check(step, space, 15, ScaleGrid::realizing(space, 15), 0.0));
    }
    SUBCASE("isolated in every grid ball") {
        const FunctionOracle c("c", std::vector<ExtReal>(space.size(), 1.0));
        ScaleGrid tiny;
        tiny.radii = {0.05};
        CHECK(kind_of([&] { liminf_at(c, space, 3, tiny); }) == ErrorKind::IsolatedPoint);
        CHECK(kind_of([&] { limsup_at(c, space, 3, tiny); }) == ErrorKind::IsolatedPoint);
    }
    SUBCASE("random instances against the oracle, duality") {
        std::mt19937_64 rng(8);
        for (int trial = 0; trial < 40; ++trial) {
            const auto random = random_finite_metric(14, rng, SpaceMethod::mixed);
            const auto f = random_function(random, rng, false);
            const auto values = raw(f);
            for (PointIndex x = 0; x < random.size(); ++x) {
                const auto grid = ScaleGrid::realizing(random, x);
                const auto all = oracle::everything(random);
                CHECK(liminf_at(f, random, x, grid).value() == oracle::liminf(random, values, x, all));
                CHECK(limsup_at(f, random, x, grid).value() == oracle::limsup(random, values, x, all));
                CHECK(limsup_at(f, random, x, grid) == -liminf_at(f.negated(), random, x, grid));
            }
        }
    }
}

TEST_CASE("restricted limits on a punctured-ball fixed point") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 30; ++trial) {
        auto space = share(random_finite_metric(16, rng, SpaceMethod::mixed));
        const auto f = share(random_function(*space, rng, false, FunctionShape::step));
        const std::array problems{punctured_ball_problem(space, f, Mode::sup), punctured_ball_problem(space, f, Mode::inf)};
        const auto g = closure_iterate(problems, PointSet(16, {static_cast<PointIndex>(trial % 16)}), {});
        const auto& y = g.result();
        for (PointIndex x : y) {
            const auto grid = ScaleGrid::realizing(*space, x);
            CHECK(liminf_at(*f, *space, x, grid, &y) == liminf_at(*f, *space, x, grid));
            CHECK(limsup_at(*f, *space, x, grid, &y) == limsup_at(*f, *space, x, grid));
            CHECK(continuity_check(*f, *space, x, grid, 0.0, &y) == continuity_check(*f, *space, x, grid, 0.0));
        }
    }
}

TEST_CASE("local Lipschitz suprema and the modulus") {
    const auto space = tenth_grid();
    SUBCASE("slope two line") {
        const auto f = of_coords(space, [](double c) { return 2.0 * c; });
        CHECK(lip_local_sup(f, space, 10, 0.35).value.value() == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(lip_modulus(f, space, 10, ScaleGrid::realizing(space, 10)).value() ==
              doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("constant") {
        const FunctionOracle c("c", std::vector<ExtReal>(space.size(), -3.0));
        CHECK(lip_local_sup(c, space, 4, 1.0).value == ExtReal(0.0));
        CHECK(lip_modulus(c, space, 4, ScaleGrid::realizing(space, 4)) == ExtReal(0.0));
    }
    SUBCASE("no pairs") {
        const FunctionOracle c("c", std::vector<ExtReal>(space.size(), 1.0));
        const auto single = lip_local_sup(c, space, 0, 0.05);
        CHECK(single.no_pairs);
        CHECK(single.value == ExtReal(0.0));
        CHECK(kind_of([&] { lip_local_sup(c, space, 0, 0.0); }) == ErrorKind::NonPositiveRadius);
        CHECK(kind_of([&] { lip_modulus(c, space, 0, ScaleGrid{}); }) == ErrorKind::BadDescriptor);
    }
    SUBCASE("u squared at the origin: min over balls of the max pair quotient") {
        const auto f = of_coords(space, [](double c) { return c * c; });
        const auto values = raw(f);
        // the smallest realized ball is {-0.1, 0, 0.1}; its largest quotient is 0.1
        const ExtReal got = lip_modulus(f, space, 10, ScaleGrid::realizing(space, 10));
        CHECK(got.value() == oracle::lip_modulus(space, values, 10, oracle::everything(space)));
        CHECK(got.value() == doctest::Approx(0.1).epsilon(1e-12));
    }
    SUBCASE("random instances against the oracle") {
        std::mt19937_64 rng(10);
        for (int trial = 0; trial < 40; ++trial) {
            const auto random = random_finite_metric(12, rng, SpaceMethod::mixed);
            const auto f = random_function(random, rng, trial % 3 == 0);
            const auto values = raw(f);
            const auto all = oracle::everything(random);
            for (PointIndex x = 0; x < random.size(); ++x) {
                const auto grid = ScaleGrid::realizing(random, x);
                for (double r : grid.radii)
                    CHECK(lip_local_sup(f, random, x, r).value.value() ==
                          oracle::pair_optimum(random, values, x, r, all, true));
                CHECK(lip_modulus(f, random, x, grid).value() == oracle::lip_modulus(random, values, x, all));
            }
        }
    }
    SUBCASE("restriction to a ball-pair fixed point") {
        std::mt19937_64 rng(11);
        for (int trial = 0; trial < 30; ++trial) {
            auto random = share(random_finite_metric(15, rng, SpaceMethod::mixed));
            const auto f = share(random_function(*random, rng, false));
            const auto g = closure_iterate(ball_pair_problem(random, f), PointSet(15, {0}), {});
            const auto& y = g.result();
            for (PointIndex x : y) {
                const auto grid = ScaleGrid::realizing(*random, x);
                for (double r : grid.radii) {
                    const auto restricted = lip_local_sup(*f, *random, x, r, &y);
                    CHECK(restricted.value == lip_local_sup(*f, *random, x, r).value);
                }
                CHECK(lip_modulus(*f, *random, x, grid, &y) == lip_modulus(*f, *random, x, grid));
                CHECK(lip_modulus(*f, *random, x, grid, &y).value() ==
                      oracle::lip_modulus(*random, raw(*f), x, y.members()));
            }
        }
    }
}

TEST_CASE("torus suprema") {
    const auto space = line_space({0, 1, 3});
    const FunctionOracle coord("coord", {0.0, 1.0, 3.0});
    CHECK(torus_sup(coord, space, 0, 2.0, 0.5, 3.5) == ExtReal(1.0));
    CHECK(torus_sup(coord, space, 0, 0.5, 0.5, 3.5) == ExtReal(0.0));
    CHECK(kind_of([&] { torus_sup(coord, space, 0, 2.0, 0.25, 0.5); }) == ErrorKind::EmptyRegion);
    CHECK(kind_of([&] { torus_sup(coord, space, 0, 2.0, 3.0, 1.0); }) == ErrorKind::BadShell);

    const FunctionOracle partial("partial", {0.0, ExtReal::plus_infinity(), 3.0});
    // +inf - (+inf) = 0 at u = p1; u = p2 gives +inf / 3
    CHECK(torus_sup(partial, space, 0, ExtReal::plus_infinity(), 0.5, 1.5) == ExtReal(0.0));
    CHECK(torus_sup(partial, space, 0, ExtReal::plus_infinity(), 0.5, 3.5).is_plus_infinity());
    CHECK(torus_sup(partial, space, 0, 5.0, 0.5, 1.5) == ExtReal(0.0));

    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 30; ++trial) {
        auto random = share(random_finite_metric(14, rng, SpaceMethod::mixed));
        const auto f = share(random_function(*random, rng, true));
        const auto values = raw(*f);
        const auto g = closure_iterate(torus_problem(random, f), PointSet(14, {3}), {});
        const auto& y = g.result();
        auto levels = default_levels(*f);
        levels.push_back(oracle::kInf);
        for (PointIndex x : y)
            for (auto [r, s] : ScaleGrid::realizing(*random, x).shells)
                for (double t : levels) {
                    const double expected = oracle::torus_optimum(*random, values, x, t, r, s, oracle::everything(*random), true);
                    if (std::isnan(expected)) continue;
                    const ExtReal full = torus_sup(*f, *random, x, t, r, s);
                    CHECK(full.value() == expected);
                    CHECK(torus_sup(*f, *random, x, t, r, s, &y) == full);
                }
    }
}

TEST_CASE("slopes") {
    SUBCASE("constant and minimizers") {
        const auto space = tenth_grid();
        const FunctionOracle c("c", std::vector<ExtReal>(space.size(), 2.0));
        CHECK(slope_at(c, space, 7, ScaleGrid::realizing(space, 7)) == ExtReal(0.0));
        const auto absolute = of_coords(space, [](double v) { return std::abs(v); });
        CHECK(slope_at(absolute, space, 10, ScaleGrid::realizing(space, 10)) == ExtReal(0.0));
    }
    SUBCASE("coordinate on a symmetric grid is 1 at the origin") {
        const auto space = tenth_grid();
        const auto coord = of_coords(space, [](double v) { return v; });
        const ExtReal s = slope_at(coord, space, 10, ScaleGrid::realizing(space, 10));
        CHECK(s.value() == oracle::slope(space, raw(coord), 10, oracle::everything(space)));
        CHECK(s.value() == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("three point line") {
        const auto space = line_space({0, 1, 3});
        const FunctionOracle coord("coord", {0.0, 1.0, 3.0});
        CHECK(slope_at(coord, space, 0, ScaleGrid::realizing(space, 0)) == ExtReal(0.0));
        CHECK(slope_at(coord, space, 1, ScaleGrid::realizing(space, 1)) == ExtReal(1.0));
        CHECK(slope_at(coord, space, 2, ScaleGrid::realizing(space, 2)) == ExtReal(1.0));
    }
    SUBCASE("isolated and improper inputs") {
        const auto space = line_space({0, 1});
        const FunctionOracle f("f", {0.0, 1.0});
        ScaleGrid empty;
        empty.shells = {{0.25, 0.5}};
        CHECK(kind_of([&] { slope_at(f, space, 0, empty); }) == ErrorKind::IsolatedPoint);
        const FunctionOracle minus("m", {ExtReal::minus_infinity(), 1.0});
        CHECK(kind_of([&] { slope_at(minus, space, 0, ScaleGrid::realizing(space, 0)); }) == ErrorKind::BadDescriptor);
    }
    SUBCASE("outside the domain the slope is 0 or +inf") {
        const auto space = line_space({0, 1, 2});
        const FunctionOracle f("f", {ExtReal::plus_infinity(), 4.0, ExtReal::plus_infinity()});
        CHECK(slope_at(f, space, 0, ScaleGrid::realizing(space, 0)).is_plus_infinity());
        const FunctionOracle g("g", {ExtReal::plus_infinity(), ExtReal::plus_infinity(), 4.0});
        CHECK(slope_at(g, space, 0, ScaleGrid::realizing(space, 0)) == ExtReal(0.0));
    }
    SUBCASE("random: oracle, homogeneity, restriction") {
        std::mt19937_64 rng(13);
        for (int trial = 0; trial < 40; ++trial) {
            auto random = share(random_finite_metric(14, rng, SpaceMethod::mixed));
            const auto f = share(random_function(*random, rng, true));
            const auto values = raw(*f);
            const auto g = closure_iterate(torus_problem(random, f), PointSet(14, {5}), {});
            const auto& y = g.result();
            const auto doubled = f->scaled(2.0);
            for (PointIndex x = 0; x < random->size(); ++x) {
                const auto grid = ScaleGrid::realizing(*random, x);
                const ExtReal s = slope_at(*f, *random, x, grid);
                CHECK(s.value() == oracle::slope(*random, values, x, oracle::everything(*random)));
                const ExtReal s2 = slope_at(doubled, *random, x, grid);
                CHECK(s2 == (s.is_finite() ? ExtReal(2.0 * s.value()) : s));
                if (y.contains(x)) CHECK(slope_at(*f, *random, x, grid, &y) == s);
            }
        }
    }
}

TEST_CASE("Lipschitz condition in the second variable") {
    auto left = std::make_shared<const MetricSpace>(line_space({0, 1, 2}));
    auto right = std::make_shared<const MetricSpace>(line_space({0, 1, 3}));
    const ProductSpace product(left, right);
    SUBCASE("no y dependence") {
        const ProductFunction f("g", 3, 3, {1, 1, 1, 2, 2, 2, 5, 5, 5});
        CHECK(verify_lipschitz_second(f, product, 0.01).holds);
    }
    SUBCASE("2y breaks k = 1 and names a witness") {
        const ProductFunction f("2y", 3, 3, {0, 2, 6, 0, 2, 6, 0, 2, 6});
        const auto verdict = verify_lipschitz_second(f, product, 1.0);
        CHECK(!verdict.holds);
        REQUIRE(verdict.witness);
        CHECK(verdict.witness->y1 != verdict.witness->y2);
        CHECK(verify_lipschitz_second(f, product, 2.0).holds);
    }
    SUBCASE("exhaustive cross-check on random tabulations") {
        std::mt19937_64 rng(14);
        std::uniform_int_distribution<int> pick(-8, 8);
        for (int trial = 0; trial < 40; ++trial) {
            std::vector<ExtReal> values;
            for (int i = 0; i < 9; ++i) values.push_back(pick(rng) / 4.0);
            const ProductFunction f("t", 3, 3, values);
            bool expected = true;
            for (PointIndex x = 0; x < 3; ++x)
                for (PointIndex a = 0; a < 3; ++a)
                    for (PointIndex b = 0; b < 3; ++b)
                        expected = expected && std::fabs(values[x * 3 + a].value() - values[x * 3 + b].value()) <=
                                                   1.0 * right->distance(a, b);
            CHECK(verify_lipschitz_second(f, product, 1.0).holds == expected);
        }
    }
}

TEST_CASE("partial slopes") {
    std::mt19937_64 rng(15);
    auto left = share(random_finite_metric(12, rng, SpaceMethod::euclidean));
    auto right = share(random_finite_metric(6, rng, SpaceMethod::shortest_path));
    auto product = std::make_shared<const ProductSpace>(left, right);
    const auto g = random_function(*left, rng, false);
    SUBCASE("no y dependence equals the slope of g") {
        std::vector<ExtReal> values;
        for (PointIndex x = 0; x < 12; ++x)
            for (PointIndex y = 0; y < 6; ++y) values.push_back(g(x));
        const ProductFunction f("g", 12, 6, values);
        for (PointIndex x = 0; x < 12; ++x) {
            const auto grid = ScaleGrid::realizing(*left, x);
            CHECK(partial_slope(f, *product, x, 3, grid, nullptr, 1.0) == slope_at(g, *left, x, grid));
        }
    }
    SUBCASE("constant is flat") {
        const ProductFunction f("c", 12, 6, std::vector<ExtReal>(72, 1.5));
        CHECK(partial_slope(f, *product, 2, 0, ScaleGrid::realizing(*left, 2)) == ExtReal(0.0));
    }
    SUBCASE("g plus a Lipschitz y-term, restricted to the product closure") {
        std::vector<ExtReal> values;
        for (PointIndex x = 0; x < 12; ++x)
            for (PointIndex y = 0; y < 6; ++y)
                values.push_back(g(x).value() + 0.5 * right->distance(y, x % 6));
        auto f = std::make_shared<const ProductFunction>("g+h", 12, 6, values);
        const auto reduction = product_closure(product_torus_problem(product, f, 1.0), PointSet(12, {0}),
                                               PointSet(6, {1, 4}), {});
        const auto& y1 = reduction.first.result();
        for (PointIndex y : reduction.second)
            for (PointIndex x : y1) {
                const auto grid = ScaleGrid::realizing(*left, x);
                CHECK(partial_slope(*f, *product, x, y, grid, &y1, 1.0) == partial_slope(*f, *product, x, y, grid));
            }
    }
    SUBCASE("declared bound is verified") {
        std::vector<ExtReal> values;
        for (PointIndex x = 0; x < 12; ++x)
            for (PointIndex y = 0; y < 6; ++y) values.push_back(3.0 * right->distance(y, 0));
        const ProductFunction f("3d", 12, 6, values);
        CHECK(kind_of([&] { partial_slope(f, *product, 0, 0, ScaleGrid::realizing(*left, 0), nullptr, 1.0); }) ==
              ErrorKind::LipschitzViolation);
    }
}
