#include "sepdet/problems.hpp"

#include <algorithm>
#include <set>

#include "sepdet/error.hpp"

namespace sepdet {

std::string_view to_string(ProblemFamily family) {
    switch (family) {
        case ProblemFamily::ball_pairs: return "ball-pairs";
        case ProblemFamily::punctured_ball: return "punctured-ball";
        case ProblemFamily::torus_slope: return "torus-slope";
    }
    return "ball-pairs";
}

std::optional<ProblemFamily> parse_family(std::string_view name) {
    for (auto family : {ProblemFamily::ball_pairs, ProblemFamily::punctured_ball, ProblemFamily::torus_slope})
        if (to_string(family) == name) return family;
    return std::nullopt;
}

namespace {

/// A dyadic rational k / 2^m drawn uniformly from (0, upper].
double sample_dyadic(std::mt19937_64& rng, double upper) {
    const double scale = static_cast<double>(1 << kSampleDyadicExponent);
    const auto top = static_cast<long long>(std::max(1.0, upper * scale));
    std::uniform_int_distribution<long long> pick(1, top);
    return static_cast<double>(pick(rng)) / scale;
}

ParamSpace radius_params(std::shared_ptr<const MetricSpace> space, std::string description) {
    ParamSpace params;
    params.description = std::move(description);
    params.truncation = [space](PointIndex x) {
        std::vector<Param> out;
        for (double r : ScaleGrid::realizing(*space, x).radii) out.push_back({r});
        return out;
    };
    const double upper = space->diameter() + 1.0;
    params.sample = [upper](std::mt19937_64& rng, PointIndex) { return Param{sample_dyadic(rng, upper)}; };
    return params;
}

ParamSpace shell_params(std::shared_ptr<const MetricSpace> space, std::vector<double> levels) {
    ParamSpace params;
    params.description = "shell-triples (t, r, s), 0 < r < s";
    params.truncation = [space, levels](PointIndex x) {
        std::vector<Param> out;
        const auto grid = ScaleGrid::realizing(*space, x);
        out.reserve(grid.shells.size() * levels.size());
        for (auto [r, s] : grid.shells)
            for (double t : levels) out.push_back({t, r, s});
        return out;
    };
    const double upper = space->diameter() + 1.0;
    params.sample = [upper, levels](std::mt19937_64& rng, PointIndex) {
        std::uniform_int_distribution<std::size_t> pick(0, levels.size() - 1);
        const double t = levels[pick(rng)];
        double r = sample_dyadic(rng, upper), s = sample_dyadic(rng, upper);
        while (r == s) s = sample_dyadic(rng, upper);
        if (r > s) std::swap(r, s);
        return Param{t, r, s};
    };
    return params;
}

Region torus_region(const MetricSpace& space, PointIndex x, double r, double s) {
    Region out(1);
    for (PointIndex u : torus_points(space, x, r, s)) out.push_back({u});
    return out;
}

bool in_torus(const MetricSpace& space, PointIndex x, double r, double s, PointIndex u) {
    const double d = space.distance(x, u);
    return r < d && d < s;
}

}  // namespace

std::vector<double> default_levels(const FunctionOracle& f) {
    auto levels = f.finite_levels();
    levels.push_back(levels.back() + 1.0);
    return levels;
}

WitnessProblem ball_pair_problem(std::shared_ptr<const MetricSpace> space, std::shared_ptr<const FunctionOracle> f,
                                 Mode mode) {
    WitnessProblem problem;
    problem.name = "ball-pairs";
    problem.space = space;
    problem.params = radius_params(space, "positive radii");
    problem.arity = 2;
    problem.mode = mode;
    problem.region = [space](PointIndex x, const Param& p) { return ball_pairs(*space, x, p.at(0)); };
    problem.region_contains = [space](PointIndex x, const Param& p, std::span<const PointIndex> u) {
        return u[0] != u[1] && space->distance(x, u[0]) < p.at(0) && space->distance(x, u[1]) < p.at(0);
    };
    problem.score = [space, f](PointIndex, const Param&, std::span<const PointIndex> u) {
        return divide(magnitude(difference((*f)(u[0]), (*f)(u[1]))), space->distance(u[0], u[1]));
    };
    return problem;
}

WitnessProblem punctured_ball_problem(std::shared_ptr<const MetricSpace> space,
                                      std::shared_ptr<const FunctionOracle> f, Mode mode) {
    WitnessProblem problem;
    problem.name = "punctured-ball";
    problem.space = space;
    problem.params = radius_params(space, "positive radii");
    problem.arity = 1;
    problem.mode = mode;
    problem.region = [space](PointIndex x, const Param& p) {
        Region out(1);
        for (PointIndex u : ball_points(*space, x, p.at(0)))
            if (u != x) out.push_back({u});
        return out;
    };
    problem.region_contains = [space](PointIndex x, const Param& p, std::span<const PointIndex> u) {
        return u[0] != x && space->distance(x, u[0]) < p.at(0);
    };
    problem.score = [f](PointIndex, const Param&, std::span<const PointIndex> u) { return (*f)(u[0]); };
    return problem;
}

WitnessProblem torus_problem(std::shared_ptr<const MetricSpace> space, std::shared_ptr<const FunctionOracle> f,
                             Mode mode, std::vector<double> levels) {
    if (levels.empty()) levels = default_levels(*f);
    WitnessProblem problem;
    problem.name = "torus-slope";
    problem.space = space;
    problem.params = shell_params(space, std::move(levels));
    problem.arity = 1;
    problem.mode = mode;
    problem.region = [space](PointIndex x, const Param& p) { return torus_region(*space, x, p.at(1), p.at(2)); };
    problem.region_contains = [space](PointIndex x, const Param& p, std::span<const PointIndex> u) {
        return in_torus(*space, x, p.at(1), p.at(2), u[0]);
    };
    problem.score = [space, f](PointIndex x, const Param& p, std::span<const PointIndex> u) {
        return descent_quotient(p.at(0), (*f)(u[0]), space->distance(x, u[0]));
    };
    return problem;
}

WitnessProblem make_problem(ProblemFamily family, std::shared_ptr<const MetricSpace> space,
                            std::shared_ptr<const FunctionOracle> f, Mode mode) {
    switch (family) {
        case ProblemFamily::ball_pairs: return ball_pair_problem(std::move(space), std::move(f), mode);
        case ProblemFamily::punctured_ball: return punctured_ball_problem(std::move(space), std::move(f), mode);
        case ProblemFamily::torus_slope: return torus_problem(std::move(space), std::move(f), mode);
    }
    throw Error(ErrorKind::BadDescriptor, "unknown problem family");
}

ProductWitnessProblem product_torus_problem(std::shared_ptr<const ProductSpace> space,
                                            std::shared_ptr<const ProductFunction> f, std::optional<double> k) {
    ProductWitnessProblem problem;
    problem.name = "product-torus-slope";
    problem.space = space;
    problem.params_for = [space, f](PointIndex y) {
        return shell_params(space->left_ptr(), default_levels(f->section(y)));
    };
    problem.arity = 1;
    problem.mode = Mode::sup;
    const MetricSpace* left = &space->left();
    problem.region = [space, left](PointIndex x, const Param& p) { return torus_region(*left, x, p.at(1), p.at(2)); };
    problem.region_contains = [space, left](PointIndex x, const Param& p, std::span<const PointIndex> u) {
        return in_torus(*left, x, p.at(1), p.at(2), u[0]);
    };
    problem.score = [space, f, left](PointIndex x, const Param& p, std::span<const PointIndex> u, PointIndex y) {
        return descent_quotient(p.at(0), (*f)(u[0], y), left->distance(x, u[0]));
    };
    if (k) {
        problem.lipschitz_check = [space, f, bound = *k] {
            return verify_lipschitz_second(*f, *space, bound).holds;
        };
    }
    return problem;
}

bool truncation_refines(const WitnessProblem& problem, PointIndex x, const Param& p) {
    auto as_set = [](const Region& region) {
        std::set<Tuple> out;
        for (std::size_t i = 0; i < region.size(); ++i) out.emplace(region[i].begin(), region[i].end());
        return out;
    };
    const auto target = as_set(problem.region(x, p));
    std::vector<std::set<Tuple>> candidates;
    for (const Param& q : problem.params.truncation(x)) {
        auto region = as_set(problem.region(x, q));
        if (std::includes(target.begin(), target.end(), region.begin(), region.end()))
            candidates.push_back(std::move(region));
    }
    return std::all_of(target.begin(), target.end(), [&](const Tuple& u) {
        return std::any_of(candidates.begin(), candidates.end(), [&](const auto& c) { return c.contains(u); });
    });
}

}  // namespace sepdet
