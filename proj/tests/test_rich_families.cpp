#include "doctest.h"

#include <random>

#include "sepdet/error.hpp"
#include "sepdet/harness.hpp"
#include "sepdet/problems.hpp"
#include "sepdet/rich_families.hpp"

using namespace sepdet;

namespace {

struct Setup {
    std::shared_ptr<const MetricSpace> space;
    std::shared_ptr<const FunctionOracle> f;
    FamilyHandle pairs;
    FamilyHandle torus;
};

Setup make_setup(std::mt19937_64& rng, std::size_t n) {
    Setup s;
    s.space = std::make_shared<const MetricSpace>(random_finite_metric(n, rng, SpaceMethod::mixed));
    s.f = std::make_shared<const FunctionOracle>(random_function(*s.space, rng, true));
    s.pairs = make_family(s.space, {ball_pair_problem(s.space, s.f)});
    s.torus = make_family(s.space, {torus_problem(s.space, s.f)});
    return s;
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

TEST_CASE("membership") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 15; ++trial) {
        const auto s = make_setup(rng, 14);
        CHECK(is_member(s.pairs, PointSet::all(14)));
        const auto y = cofinal_extend(s.pairs, PointSet(14, {0}));
        CHECK(is_member(s.pairs, y));
        CHECK(!is_member(s.pairs, PointSet(14, {})));
        // dropping a generated point breaks closedness exactly when one round brings it back
        const auto g = closure_iterate(s.pairs.operators, PointSet(14, {0}), {});
        for (const auto& [u, provenance] : g.provenance) {
            std::vector<PointIndex> rest;
            for (PointIndex v : y)
                if (v != u) rest.push_back(v);
            const PointSet smaller(14, rest);
            ClosureConfig one{0.0, 1, 1};
            const bool restored = closure_iterate(s.pairs.operators, smaller, one).levels.back().contains(u);
            CHECK(is_member(s.pairs, smaller) == !restored);
            if (smaller.contains(provenance.center)) CHECK(!is_member(s.pairs, smaller));
        }
    }
}

TEST_CASE("cofinal extension") {
    std::mt19937_64 rng(102);
    for (int trial = 0; trial < 15; ++trial) {
        const auto s = make_setup(rng, 12);
        const PointSet start(12, {static_cast<PointIndex>(trial % 12)});
        const auto y = cofinal_extend(s.torus, start);
        CHECK(y.includes(start));
        CHECK(is_member(s.torus, y));
        CHECK(cofinal_extend(s.torus, y) == y);
        CHECK(cofinal_extend(s.torus, PointSet::all(12)) == PointSet::all(12));
    }
    const auto s = make_setup(rng, 10);
    FamilyHandle shallow = s.pairs;
    shallow.config.max_depth = 1;
    bool saw_depth_error = false;
    for (PointIndex x = 0; x < 10 && !saw_depth_error; ++x) {
        try {
            cofinal_extend(shallow, PointSet(10, {x}));
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::DepthExceeded);
            saw_depth_error = true;
        }
    }
    CHECK(saw_depth_error);
}

TEST_CASE("sigma unions") {
    std::mt19937_64 rng(103);
    for (int trial = 0; trial < 15; ++trial) {
        const auto s = make_setup(rng, 15);
        const std::array families{s.pairs, s.torus};
        const auto both = intersect(families);
        std::vector<PointSet> chain;
        std::vector<PointIndex> seed{static_cast<PointIndex>(trial % 15)};
        for (int link = 0; link < 4; ++link) {
            chain.push_back(cofinal_extend(both, PointSet(15, seed)));
            seed.push_back(static_cast<PointIndex>((trial * 7 + link * 3) % 15));
        }
        const auto u = sigma_union(both, chain);
        CHECK(u.is_member);
        CHECK(u.members == chain.back());

        const std::vector<PointSet> constant{chain.front(), chain.front(), chain.front()};
        const auto c = sigma_union(both, constant);
        CHECK(c.members == chain.front());
        CHECK(c.is_member);
    }
    const auto s = make_setup(rng, 6);
    const std::vector<PointSet> shrinking{PointSet::all(6), PointSet(6, {0})};
    CHECK(kind_of([&] { sigma_union(s.pairs, shrinking); }) == ErrorKind::NotAChain);
}

TEST_CASE("intersection of families") {
    std::mt19937_64 rng(104);
    for (int trial = 0; trial < 10; ++trial) {
        const auto s = make_setup(rng, 12);
        const std::array single{s.pairs};
        const std::array twice{s.pairs, s.pairs};
        const std::array families{s.pairs, s.torus};
        const auto one = intersect(single);
        const auto doubled = intersect(twice);
        const auto both = intersect(families);
        const auto y = cofinal_extend(both, PointSet(12, {1}));
        CHECK(is_member(s.pairs, y));
        CHECK(is_member(s.torus, y));
        for (int probe = 0; probe < 10; ++probe) {
            std::vector<PointIndex> members;
            for (PointIndex u = 0; u < 12; ++u)
                if ((u * 5 + probe * 3 + trial) % 4 != 0) members.push_back(u);
            const PointSet z(12, members);
            CHECK(is_member(both, z) == (is_member(s.pairs, z) && is_member(s.torus, z)));
            CHECK(is_member(one, z) == is_member(s.pairs, z));
            CHECK(is_member(doubled, z) == is_member(s.pairs, z));
        }
    }
    const auto a = make_setup(rng, 5);
    const auto b = make_setup(rng, 5);
    const std::array apart{a.pairs, b.pairs};
    CHECK(kind_of([&] { intersect(apart); }) == ErrorKind::SpaceMismatch);
    CHECK(kind_of([&] { make_family(a.space, {ball_pair_problem(b.space, b.f)}); }) == ErrorKind::SpaceMismatch);
}
