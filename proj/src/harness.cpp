#include "sepdet/harness.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "sepdet/error.hpp"

namespace sepdet {

std::string_view to_string(SpaceMethod method) {
    switch (method) {
        case SpaceMethod::euclidean: return "euclidean";
        case SpaceMethod::shortest_path: return "shortest-path";
        case SpaceMethod::mixed: return "mixed";
    }
    return "mixed";
}

std::string_view to_string(ShellRule rule) { return rule == ShellRule::realizing ? "realizing" : "empty"; }

std::string_view to_string(FunctionShape shape) {
    switch (shape) {
        case FunctionShape::tabulated: return "tabulated";
        case FunctionShape::linear: return "linear";
        case FunctionShape::quadratic: return "quadratic";
        case FunctionShape::abs: return "abs";
        case FunctionShape::step: return "step";
    }
    return "tabulated";
}

namespace {

constexpr std::array kShapes{FunctionShape::tabulated, FunctionShape::linear, FunctionShape::quadratic,
                             FunctionShape::abs, FunctionShape::step};

struct SuiteEntry {
    std::string_view name;
    std::string_view alias;
};

constexpr std::array kSuites{
    SuiteEntry{"family-intersection", "prop-1.1"}, SuiteEntry{"sup-reduction", "thm-2.1"},
    SuiteEntry{"inf-reduction", "thm-2.2"},       SuiteEntry{"product-reduction", "thm-2.3"},
    SuiteEntry{"semicontinuity", "thm-3.1"},      SuiteEntry{"lipschitz-pairs", "prop-3.2"},
    SuiteEntry{"lipschitz-modulus", "thm-3.3"},   SuiteEntry{"torus", "prop-4.1"},
    SuiteEntry{"slope", "thm-4.2"},               SuiteEntry{"partial-slope", "thm-4.3"},
    SuiteEntry{"invariants", ""},
};

long long pick(std::mt19937_64& rng, long long lo, long long hi) {
    return std::uniform_int_distribution<long long>(lo, hi)(rng);
}

std::size_t pick_index(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(pick(rng, 0, n - 1)); }

bool agree(ExtReal a, ExtReal b, double tol) {
    if (a == b) return true;
    return a.is_finite() && b.is_finite() && std::abs(a.value() - b.value()) <= tol;
}

double coordinate_of(const MetricSpace& space, PointIndex u, PointIndex anchor) {
    const auto& p = space.point(u);
    if (p.coords) return p.coords->front().convert_to<double>();
    return space.distance(anchor, u);
}

/// One random instance: its space, the rng that drives the rest, the tolerance.
struct Instance {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    std::mt19937_64 rng;
    SpaceMethod method = SpaceMethod::euclidean;
    std::shared_ptr<const MetricSpace> space;
    double tolerance = 0.0;

    Instance(const SuiteConfig& config, std::size_t i) : index(i), seed(instance_seed(config.seed, i)), rng(seed) {
        method = config.method;
        if (method == SpaceMethod::mixed) method = i % 2 == 0 ? SpaceMethod::euclidean : SpaceMethod::shortest_path;
        const auto n = static_cast<std::size_t>(
            pick(rng, static_cast<long long>(config.n_min), static_cast<long long>(config.n_max)));
        space = std::make_shared<const MetricSpace>(random_finite_metric(n, rng, method));
        tolerance = method == SpaceMethod::euclidean ? config.float_tolerance : config.rational_tolerance;
    }

    PointSet singleton() { return PointSet(space->size(), {pick_index(rng, space->size())}); }

    FunctionShape shape() const { return kShapes[index % kShapes.size()]; }
};

class Recorder {
public:
    Recorder(SuiteReport& report, const Instance& instance) : report_(report), instance_(instance) {}

    void set_function(json function) { function_ = std::move(function); }
    void set_space(json space) { space_ = std::move(space); }

    void verdict(const std::string& check, bool pass, PointIndex x, const Param& p, ExtReal lhs, ExtReal rhs) {
        auto& tally = report_.tallies[check];
        if (pass) {
            ++tally.pass;
            return;
        }
        ++tally.fail;
        FailureDump dump;
        dump.check = check;
        dump.instance = instance_.index;
        dump.instance_seed = instance_.seed;
        dump.space = space_.is_null() ? space_to_json(*instance_.space) : space_;
        dump.function = function_;
        dump.x = x < instance_.space->size() ? instance_.space->point(x).id : std::to_string(x);
        dump.param = p;
        dump.lhs = lhs;
        dump.rhs = rhs;
        report_.failures.push_back(std::move(dump));
    }

    /// A full-vs-restricted pair of values, equal within the instance tolerance.
    void equality(const std::string& check, PointIndex x, const Param& p, ExtReal full, ExtReal restricted) {
        verdict(check, agree(full, restricted, instance_.tolerance), x, p, full, restricted);
    }

    void condition(const std::string& check, bool holds, PointIndex x = 0) {
        verdict(check, holds, x, {}, holds ? 1.0 : 0.0, 1.0);
    }

    void skip(const std::string& check) { ++report_.tallies[check].skipped; }

    void monotone(bool ok) {
        if (!ok) ++report_.monotone_violations;
    }

    void count(const std::string& counter, std::size_t by = 1) { report_.counters[counter] += by; }

    void determinacy(const std::string& check, const DeterminacyCheck& c) {
        monotone(c.monotone);
        if (c.verdict == Verdict::skipped_empty_region) {
            skip(check);
            return;
        }
        verdict(check, c.verdict == Verdict::pass, c.x, c.param, c.lhs, c.rhs);
    }

    void closure(const std::string& check, const GeneratedSubspace& g) {
        auto& stats = report_.closure;
        ++stats.runs;
        if (g.fixed_point) ++stats.fixed_points;
        stats.deepest = std::max(stats.deepest, g.levels.size());
        stats.level_sizes.push_back(g.level_sizes());
        if (g.result().size() < g.result().universe()) count("strict-subspaces");
        condition(check, g.fixed_point);
    }

    double tolerance() const { return instance_.tolerance; }

private:
    SuiteReport& report_;
    const Instance& instance_;
    json space_;
    json function_;
};

ScaleGrid check_grid(const MetricSpace& space, PointIndex x, ShellRule rule) {
    if (rule == ShellRule::realizing) return ScaleGrid::realizing(space, x);
    ScaleGrid grid;
    const auto d = space.distinct_distances_from(x);
    if (d.empty()) return grid;
    const double s = d.front() / 2.0;
    grid.radii = {s};
    grid.shells = {{s / 2.0, s}};
    return grid;
}

std::vector<Param> sampled(const WitnessProblem& problem, std::mt19937_64& rng, PointIndex x, std::size_t count) {
    std::vector<Param> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(problem.params.sample(rng, x));
    return out;
}

std::shared_ptr<const FunctionOracle> share(FunctionOracle f) {
    return std::make_shared<const FunctionOracle>(std::move(f));
}

// Closure plus the determinacy equality at every (x, p), cross-checked by brute force.
void reduction_suite(Instance& in, const SuiteConfig& config, Recorder& rec, Mode mode) {
    for (auto family : {ProblemFamily::ball_pairs, ProblemFamily::torus_slope, ProblemFamily::punctured_ball}) {
        const std::string name(to_string(family));
        const auto f = share(random_function(*in.space, in.rng, mode == Mode::sup, in.shape()));
        rec.set_function(function_to_json(*f, *in.space));
        const auto problem = make_problem(family, in.space, f, mode);
        const auto g = closure_iterate(problem, in.singleton(), config.closure);
        rec.closure("fixed-point", g);
        const PointSet& y = g.result();

        std::map<PointIndex, std::vector<Param>> extras;
        for (PointIndex x : y) extras[x] = sampled(problem, in.rng, x, config.q_density);
        const auto checks = check_all(problem, y, rec.tolerance(), [&](PointIndex x) { return extras.at(x); });
        for (const auto& c : checks) {
            rec.determinacy(name, c);
            if (c.verdict == Verdict::skipped_empty_region) continue;
            const ExtReal full = brute_force_optimum(problem, c.x, c.param);
            const bool same = full == c.lhs && (!c.region_hit || brute_force_optimum(problem, c.x, c.param, &y) == c.rhs);
            rec.verdict("oracle", same, c.x, c.param, full, c.lhs);
        }
        const PointIndex x0 = y.members().front();
        for (const Param& p : extras.at(x0)) {
            if (problem.region(x0, p).empty()) continue;
            rec.condition("approximation", truncation_refines(problem, x0, p), x0);
        }
    }
}

void intersection_suite(Instance& in, const SuiteConfig& config, Recorder& rec) {
    const auto f = share(random_function(*in.space, in.rng, true, in.shape()));
    rec.set_function(function_to_json(*f, *in.space));
    const auto pairs_problem = ball_pair_problem(in.space, f);
    const auto torus = torus_problem(in.space, f);
    const std::array families{make_family(in.space, {pairs_problem}, config.closure),
                              make_family(in.space, {torus}, config.closure)};
    const auto both = intersect(families);

    const PointSet start = in.singleton();
    const PointSet y = cofinal_extend(both, start);
    rec.condition("contains-seed", y.includes(start));
    rec.condition("member-ball-pairs", is_member(families[0], y));
    rec.condition("member-torus-slope", is_member(families[1], y));
    rec.condition("idempotent", cofinal_extend(both, y) == y);
    for (const auto& c : check_all(pairs_problem, y, rec.tolerance())) rec.determinacy("ball-pairs", c);
    for (const auto& c : check_all(torus, y, rec.tolerance())) rec.determinacy("torus-slope", c);

    // membership of the intersection is the conjunction, on random subsets and on y
    const std::size_t n = in.space->size();
    std::vector<PointSet> probes{y, PointSet::all(n)};
    for (int i = 0; i < 3; ++i) {
        std::vector<PointIndex> members;
        for (PointIndex u = 0; u < n; ++u)
            if (pick(in.rng, 0, 1) == 1) members.push_back(u);
        if (members.empty()) members.push_back(pick_index(in.rng, n));
        probes.emplace_back(n, std::move(members));
    }
    for (const auto& z : probes)
        rec.condition("membership-conjunction",
                      is_member(both, z) == (is_member(families[0], z) && is_member(families[1], z)));

    // an increasing chain of members from nested seeds
    std::vector<PointIndex> seed_points(start.begin(), start.end());
    std::vector<PointSet> chain;
    for (int link = 0; link < 4; ++link) {
        chain.push_back(cofinal_extend(both, PointSet(n, seed_points)));
        seed_points.push_back(pick_index(in.rng, n));
        std::sort(seed_points.begin(), seed_points.end());
        seed_points.erase(std::unique(seed_points.begin(), seed_points.end()), seed_points.end());
    }
    bool member = false;
    try {
        const auto u = sigma_union(both, chain);
        member = u.is_member && u.members == chain.back();
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotAChain) throw;
    }
    rec.condition("sigma-union", member);
}

void semicontinuity_suite(Instance& in, const SuiteConfig& config, Recorder& rec) {
    const auto f = share(random_function(*in.space, in.rng, false, in.shape()));
    rec.set_function(function_to_json(*f, *in.space));
    rec.count(std::string("shape:") + std::string(to_string(in.shape())));
    const std::array problems{punctured_ball_problem(in.space, f, Mode::sup),
                              punctured_ball_problem(in.space, f, Mode::inf)};
    const auto g = intersect_problems(problems, in.singleton(), config.closure);
    rec.closure("fixed-point", g);
    const PointSet& y = g.result();
    const FunctionOracle negated = f->negated();
    for (PointIndex x : y) {
        const auto grid = check_grid(*in.space, x, config.shell_rule);
        ExtReal lower_full, upper_full;
        try {
            lower_full = liminf_at(*f, *in.space, x, grid);
            upper_full = limsup_at(*f, *in.space, x, grid);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::IsolatedPoint) throw;
            for (const char* check : {"liminf", "limsup", "continuity", "duality"}) rec.skip(check);
            continue;
        }
        ExtReal lower = ExtReal::minus_infinity(), upper = ExtReal::plus_infinity();
        bool restricted_ok = true;
        try {
            lower = liminf_at(*f, *in.space, x, grid, &y);
            upper = limsup_at(*f, *in.space, x, grid, &y);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::IsolatedPoint) throw;
            restricted_ok = false;
        }
        rec.monotone(lower >= lower_full && upper <= upper_full);
        rec.equality("liminf", x, {}, lower_full, restricted_ok ? lower : ExtReal::minus_infinity());
        rec.equality("limsup", x, {}, upper_full, restricted_ok ? upper : ExtReal::plus_infinity());
        const bool full_verdict = continuity_check(*f, *in.space, x, grid, 0.0);
        const bool restricted_verdict = restricted_ok && continuity_check(*f, *in.space, x, grid, 0.0, &y);
        rec.verdict("continuity", full_verdict == restricted_verdict, x, {}, full_verdict ? 1.0 : 0.0,
                    restricted_verdict ? 1.0 : 0.0);
        if (!full_verdict) rec.count("discontinuous-points");
        rec.equality("duality", x, {}, upper_full, -liminf_at(negated, *in.space, x, grid));
    }
}

struct PairsRun {
    std::shared_ptr<const FunctionOracle> f;
    WitnessProblem problem;
    PointSet y;
};

PairsRun pairs_closure(Instance& in, const SuiteConfig& config, Recorder& rec) {
    auto f = share(random_function(*in.space, in.rng, false, in.shape()));
    rec.set_function(function_to_json(*f, *in.space));
    auto problem = ball_pair_problem(in.space, f);
    const auto g = closure_iterate(problem, in.singleton(), config.closure);
    rec.closure("fixed-point", g);
    return {std::move(f), std::move(problem), g.result()};
}

void lipschitz_pairs_suite(Instance& in, const SuiteConfig& config, Recorder& rec) {
    const auto run = pairs_closure(in, config, rec);
    for (PointIndex x : run.y) {
        auto radii = check_grid(*in.space, x, config.shell_rule).radii;
        for (const Param& p : sampled(run.problem, in.rng, x, config.q_density)) radii.push_back(p[0]);
        for (double r : radii) {
            const auto full = lip_local_sup(*run.f, *in.space, x, r);
            if (full.no_pairs) {
                rec.skip("lip-local-sup");
                continue;
            }
            const auto restricted = lip_local_sup(*run.f, *in.space, x, r, &run.y);
            rec.monotone(restricted.value <= full.value);
            rec.equality("lip-local-sup", x, {r}, full.value, restricted.value);
        }
    }
}

void lipschitz_modulus_suite(Instance& in, const SuiteConfig& config, Recorder& rec) {
    const auto run = pairs_closure(in, config, rec);
    for (PointIndex x : run.y) {
        const auto grid = check_grid(*in.space, x, config.shell_rule);
        if (grid.radii.empty()) {
            rec.skip("lip-modulus");
            continue;
        }
        const ExtReal full = lip_modulus(*run.f, *in.space, x, grid);
        const ExtReal restricted = lip_modulus(*run.f, *in.space, x, grid, &run.y);
        rec.monotone(restricted <= full);
        rec.equality("lip-modulus", x, {}, full, restricted);
    }
}

struct TorusRun {
    std::shared_ptr<const FunctionOracle> f;
    PointSet y;
};

TorusRun torus_closure(Instance& in, const SuiteConfig& config, Recorder& rec) {
    auto f = share(random_function(*in.space, in.rng, true, in.shape()));
    rec.set_function(function_to_json(*f, *in.space));
    if (!f->finite_levels().empty() && f->finite_levels().size() < f->size() &&
        std::any_of(f->values().begin(), f->values().end(), [](ExtReal v) { return v.is_plus_infinity(); }))
        rec.count("functions-with-infinity");
    const auto problem = torus_problem(in.space, f);
    const auto g = closure_iterate(problem, in.singleton(), config.closure);
    rec.closure("fixed-point", g);
    return {std::move(f), g.result()};
}

void torus_suite(Instance& in, const SuiteConfig& config, Recorder& rec) {
    const auto run = torus_closure(in, config, rec);
    auto levels = default_levels(*run.f);
    levels.push_back(std::numeric_limits<double>::infinity());
    for (PointIndex x : run.y) {
        for (auto [r, s] : check_grid(*in.space, x, config.shell_rule).shells) {
            const auto shell = torus_points(*in.space, x, r, s);
            if (shell.empty()) {
                rec.skip("torus-sup");
                continue;
            }
            const bool meets_infinity =
                std::any_of(shell.begin(), shell.end(), [&](PointIndex u) { return (*run.f)(u).is_plus_infinity(); });
            for (double t : levels) {
                if (std::isinf(t) && meets_infinity) rec.count("convention-branch");
                const ExtReal full = torus_sup(*run.f, *in.space, x, t, r, s);
                ExtReal restricted = ExtReal::minus_infinity();
                try {
                    restricted = torus_sup(*run.f, *in.space, x, t, r, s, &run.y);
                } catch (const Error& e) {
                    if (e.kind() != ErrorKind::EmptyRegion) throw;
                }
                rec.monotone(restricted <= full);
                rec.equality("torus-sup", x, {t, r, s}, full, restricted);
            }
        }
    }
}

void slope_suite(Instance& in, const SuiteConfig& config, Recorder& rec) {
    const auto run = torus_closure(in, config, rec);
    const FunctionOracle doubled = run.f->scaled(2.0);
    for (PointIndex x : run.y) {
        const auto grid = check_grid(*in.space, x, config.shell_rule);
        ExtReal full;
        try {
            full = slope_at(*run.f, *in.space, x, grid);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::IsolatedPoint) throw;
            rec.skip("slope");
            continue;
        }
        ExtReal restricted = ExtReal::minus_infinity();
        try {
            restricted = slope_at(*run.f, *in.space, x, grid, &run.y);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::IsolatedPoint) throw;
        }
        rec.equality("slope", x, {}, full, restricted);
        if ((*run.f)(x).is_plus_infinity()) {
            rec.count("slope-outside-domain");
            auto branch = [](ExtReal v) { return v == ExtReal(0.0) ? 0 : v.is_plus_infinity() ? 1 : 2; };
            if (branch(full) != branch(restricted)) rec.count("branch-disagreements");
        }
        const ExtReal scaled = slope_at(doubled, *in.space, x, grid);
        rec.equality("homogeneity", x, {}, scaled, full.is_finite() ? ExtReal(2.0 * full.value()) : full);
    }
    const auto& values = run.f->values();
    const auto minimizer = static_cast<PointIndex>(std::min_element(values.begin(), values.end()) - values.begin());
    const auto grid = check_grid(*in.space, minimizer, config.shell_rule);
    try {
        rec.equality("minimizer", minimizer, {}, 0.0, slope_at(*run.f, *in.space, minimizer, grid));
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::IsolatedPoint) throw;
        rec.skip("minimizer");
    }
}

/// f(x, y) = g(x) + h(x, y) with h k-Lipschitz in y: h = k * a_x * d2(y, anchor_x), |a_x| <= 1/2.
std::vector<ExtReal> lipschitz_product_values(const MetricSpace& left, const MetricSpace& right,
                                              const FunctionOracle& g, double k, std::mt19937_64& rng) {
    std::vector<ExtReal> values;
    values.reserve(left.size() * right.size());
    const bool independent = pick(rng, 0, 3) == 0;
    for (PointIndex x = 0; x < left.size(); ++x) {
        const double a = independent ? 0.0 : static_cast<double>(pick(rng, -4, 4)) / 8.0;
        const PointIndex anchor = pick_index(rng, right.size());
        for (PointIndex y = 0; y < right.size(); ++y) {
            const ExtReal gx = g(x);
            values.push_back(gx.is_finite() ? ExtReal(gx.value() + k * a * right.distance(y, anchor)) : gx);
        }
    }
    return values;
}

json product_function_json(const ProductFunction& f, const ProductSpace& space) {
    json rows = json::array();
    for (PointIndex x = 0; x < space.left().size(); ++x) {
        json row = json::array();
        for (PointIndex y = 0; y < space.right().size(); ++y) row.push_back(to_json(f(x, y)));
        rows.push_back(row);
    }
    return {{"name", f.name()}, {"values", rows}};
}

void product_suite(Instance& in, const SuiteConfig& config, Recorder& rec, bool slopes) {
    const auto n2 = static_cast<std::size_t>(pick(in.rng, 2, static_cast<long long>(std::max<std::size_t>(2, config.right_max))));
    const SpaceMethod right_method = in.method == SpaceMethod::euclidean ? SpaceMethod::shortest_path : SpaceMethod::euclidean;
    const auto right = std::make_shared<const MetricSpace>(random_finite_metric(n2, in.rng, right_method));
    const auto product = std::make_shared<const ProductSpace>(in.space, right);
    rec.set_space({{"left", space_to_json(*in.space)}, {"right", space_to_json(*right)}});

    const double k = config.lipschitz_k;
    const auto g = random_function(*in.space, in.rng, true, in.shape());
    const auto f = std::make_shared<const ProductFunction>(
        "g+h", in.space->size(), n2, lipschitz_product_values(*in.space, *right, g, k, in.rng));
    rec.set_function(product_function_json(*f, *product));
    rec.condition("lipschitz-accepted", verify_lipschitz_second(*f, *product, k).holds);

    std::vector<PointIndex> sample;
    for (PointIndex y = 0; y < n2; ++y)
        if (pick(in.rng, 0, 1) == 1) sample.push_back(y);
    if (sample.empty()) sample.push_back(pick_index(in.rng, n2));
    const PointSet c(n2, sample);

    const auto problem = product_torus_problem(product, f, k);
    const auto reduction = product_closure(problem, in.singleton(), c, config.closure);
    rec.closure("fixed-point", reduction.first);
    const PointSet& y1 = reduction.first.result();

    for (PointIndex y : reduction.second) {
        if (!slopes) {
            const auto section = problem.section(y);
            for (const auto& check : check_all(section, y1, rec.tolerance())) rec.determinacy("section-reduction", check);
            continue;
        }
        for (PointIndex x : y1) {
            const auto grid = check_grid(*in.space, x, config.shell_rule);
            ExtReal full;
            try {
                full = partial_slope(*f, *product, x, y, grid, nullptr, k);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::IsolatedPoint) throw;
                rec.skip("partial-slope");
                continue;
            }
            ExtReal restricted = ExtReal::minus_infinity();
            try {
                restricted = partial_slope(*f, *product, x, y, grid, &y1, k);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::IsolatedPoint) throw;
            }
            rec.equality("partial-slope", x, {static_cast<double>(y)}, full, restricted);
        }
    }

    for (std::size_t planted = 0; planted < config.adversarial; ++planted) {
        std::vector<ExtReal> values;
        for (PointIndex x = 0; x < in.space->size(); ++x)
            for (PointIndex y = 0; y < n2; ++y) values.push_back((*f)(x, y));
        const PointIndex x = pick_index(in.rng, in.space->size());
        const PointIndex ya = pick_index(in.rng, n2);
        PointIndex yb = pick_index(in.rng, n2 - 1);
        if (yb >= ya) ++yb;
        values[x * n2 + ya] = 0.0;
        values[x * n2 + yb] = 2.0 * k * right->distance(ya, yb) + 1.0;
        const auto bad = std::make_shared<const ProductFunction>("planted", in.space->size(), n2, values);
        const bool rejected = !verify_lipschitz_second(*bad, *product, k).holds;
        bool closure_refused = false;
        try {
            product_closure(product_torus_problem(product, bad, k), PointSet(in.space->size(), {x}), c, config.closure);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::LipschitzViolation) throw;
            closure_refused = true;
        }
        rec.condition("planted-violation", rejected && closure_refused, x);
    }
}

MetricSpace permuted(const MetricSpace& space, const std::vector<PointIndex>& order) {
    std::vector<Point> points;
    std::vector<std::vector<double>> matrix(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        points.push_back(space.point(order[i]));
        for (std::size_t j = 0; j < order.size(); ++j) matrix[i].push_back(space.distance(order[i], order[j]));
    }
    return MetricSpace::from_matrix(std::move(points), matrix);
}

void invariants_suite(Instance& in, const SuiteConfig& config, Recorder& rec) {
    try {
        validate_metric(*in.space, 0.0);
        rec.condition("metric-axioms", true);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::MetricAxiomViolation) throw;
        rec.condition("metric-axioms", false);
    }

    const auto family = std::array{ProblemFamily::ball_pairs, ProblemFamily::torus_slope,
                                   ProblemFamily::punctured_ball}[in.index % 3];
    const Mode mode = in.index % 2 == 0 ? Mode::sup : Mode::inf;
    const auto f = share(random_function(*in.space, in.rng, mode == Mode::sup, in.shape()));
    rec.set_function(function_to_json(*f, *in.space));
    const auto problem = make_problem(family, in.space, f, mode);
    const PointSet seed = in.singleton();
    const auto first = closure_iterate(problem, seed, config.closure);
    const auto second = closure_iterate(problem, seed, config.closure);
    rec.condition("determinism", to_json(first, *in.space) == to_json(second, *in.space));
    const auto again = closure_iterate(problem, first.result(), config.closure);
    rec.condition("idempotence", again.fixed_point && again.levels.size() == 2 && again.result() == first.result());

    // the brute-force optimum does not depend on the order of the points
    const std::size_t n = in.space->size();
    std::vector<PointIndex> order(n);
    std::iota(order.begin(), order.end(), PointIndex{0});
    std::shuffle(order.begin(), order.end(), in.rng);
    std::vector<PointIndex> position(n);
    for (std::size_t i = 0; i < n; ++i) position[order[i]] = i;
    const auto shuffled = std::make_shared<const MetricSpace>(permuted(*in.space, order));
    std::vector<ExtReal> moved;
    for (PointIndex u : order) moved.push_back((*f)(u));
    const auto shuffled_problem = make_problem(family, shuffled, share(FunctionOracle(f->name(), moved)), mode);
    const PointIndex x = pick_index(in.rng, n);
    for (const Param& p : sampled(problem, in.rng, x, config.q_density)) {
        try {
            const ExtReal a = brute_force_optimum(problem, x, p);
            const ExtReal b = brute_force_optimum(shuffled_problem, position[x], p);
            rec.verdict("ordering", a == b, x, p, a, b);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::EmptyRegion) throw;
            rec.skip("ordering");
        }
    }

    // rerunning a whole instance of another suite reproduces its report exactly
    SuiteConfig small = config;
    small.n_min = 2;
    small.n_max = 8;
    small.right_max = 4;
    const auto& entry = kSuites[in.index % (kSuites.size() - 1)];
    const auto a = run_instance(entry.name, small, in.index);
    const auto b = run_instance(entry.name, small, in.index);
    rec.condition("replay", to_json(a) == to_json(b));
    rec.condition("replay-clean", a.all_passed());
}

json to_json(const SuiteConfig& c) {
    return {{"seed", c.seed},
            {"instances", c.instances},
            {"n_min", c.n_min},
            {"n_max", c.n_max},
            {"method", std::string(to_string(c.method))},
            {"eps", c.closure.eps},
            {"cap", c.closure.cap},
            {"max_depth", c.closure.max_depth},
            {"rational_tolerance", c.rational_tolerance},
            {"float_tolerance", c.float_tolerance},
            {"q_density", c.q_density},
            {"shell_rule", std::string(to_string(c.shell_rule))},
            {"right_max", c.right_max},
            {"lipschitz_k", c.lipschitz_k},
            {"adversarial", c.adversarial}};
}

}  // namespace

SuiteConfig default_config(std::string_view suite) {
    SuiteConfig config;
    const auto name = canonical_suite(suite).value_or(std::string(suite));
    if (name == "family-intersection") {
        config.instances = 50;
        config.n_max = 25;
    } else if (name == "product-reduction" || name == "partial-slope") {
        config.instances = 30;
        config.n_min = 3;
        config.n_max = 20;
    } else if (name == "semicontinuity" || name == "lipschitz-pairs" || name == "lipschitz-modulus") {
        config.n_max = 80;
    } else if (name == "invariants") {
        config.n_max = 20;
    }
    return config;
}

std::size_t SuiteReport::failed() const {
    std::size_t out = 0;
    for (const auto& [name, tally] : tallies) out += tally.fail;
    return out;
}

void SuiteReport::merge(const SuiteReport& other) {
    instances += other.instances;
    for (const auto& [name, tally] : other.tallies) {
        auto& mine = tallies[name];
        mine.pass += tally.pass;
        mine.fail += tally.fail;
        mine.skipped += tally.skipped;
    }
    failures.insert(failures.end(), other.failures.begin(), other.failures.end());
    closure.runs += other.closure.runs;
    closure.fixed_points += other.closure.fixed_points;
    closure.deepest = std::max(closure.deepest, other.closure.deepest);
    closure.level_sizes.insert(closure.level_sizes.end(), other.closure.level_sizes.begin(),
                               other.closure.level_sizes.end());
    monotone_violations += other.monotone_violations;
    for (const auto& [name, count] : other.counters) counters[name] += count;
}

json to_json(const SuiteReport& report) {
    json tallies = json::object();
    for (const auto& [name, t] : report.tallies)
        tallies[name] = {{"pass", t.pass}, {"fail", t.fail}, {"skipped", t.skipped}};
    json failures = json::array();
    for (const auto& d : report.failures)
        failures.push_back({{"check", d.check},
                            {"instance", d.instance},
                            {"instance_seed", d.instance_seed},
                            {"space", d.space},
                            {"function", d.function},
                            {"x", d.x},
                            {"param", d.param},
                            {"lhs", to_json(d.lhs)},
                            {"rhs", to_json(d.rhs)}});
    return {{"suite", report.suite},
            {"config", to_json(report.config)},
            {"instances", report.instances},
            {"passed", report.all_passed()},
            {"tallies", tallies},
            {"failures", failures},
            {"monotone_violations", report.monotone_violations},
            {"counters", report.counters},
            {"closure",
             {{"runs", report.closure.runs},
              {"fixed_points", report.closure.fixed_points},
              {"deepest", report.closure.deepest},
              {"level_sizes", report.closure.level_sizes}}}};
}

std::string summary_table(const SuiteReport& report) {
    std::ostringstream out;
    out << "suite " << report.suite << ": " << report.instances << " instances, "
        << (report.all_passed() ? "PASS" : "FAIL") << '\n';
    out << std::left << std::setw(26) << "  check" << std::right << std::setw(10) << "pass" << std::setw(8)
        << "fail" << std::setw(10) << "skipped" << '\n';
    for (const auto& [name, t] : report.tallies)
        out << "  " << std::left << std::setw(24) << name << std::right << std::setw(10) << t.pass << std::setw(8)
            << t.fail << std::setw(10) << t.skipped << '\n';
    out << "  closures " << report.closure.runs << ", fixed points " << report.closure.fixed_points
        << ", deepest chain " << report.closure.deepest << " levels\n";
    out << "  monotone violations " << report.monotone_violations << '\n';
    for (const auto& [name, count] : report.counters) out << "  " << name << ": " << count << '\n';
    out << "  runtime " << std::fixed << std::setprecision(2) << report.runtime_seconds << " s\n";
    return out.str();
}

MetricSpace random_finite_metric(std::size_t n, std::mt19937_64& rng, SpaceMethod method) {
    if (n == 0) throw Error(ErrorKind::BadDescriptor, "a space needs at least one point");
    if (method == SpaceMethod::mixed) method = pick(rng, 0, 1) == 0 ? SpaceMethod::euclidean : SpaceMethod::shortest_path;

    if (method == SpaceMethod::euclidean) {
        auto dims = static_cast<std::size_t>(pick(rng, 1, 3));
        if (n > 81) dims = std::max<std::size_t>(dims, 2);
        std::set<std::vector<long long>> seen;
        std::vector<Point> points;
        while (points.size() < n) {
            std::vector<long long> k(dims);
            for (auto& v : k) v = pick(rng, -40, 40);
            if (!seen.insert(k).second) continue;
            std::vector<Rational> coords;
            for (long long v : k) coords.emplace_back(v, 4);
            points.push_back(Point{"p" + std::to_string(points.size()), std::move(coords)});
        }
        return MetricSpace::euclidean(std::move(points));
    }

    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) d[i][j] = d[j][i] = static_cast<double>(pick(rng, 1, 80)) / 8.0;
    for (std::size_t m = 0; m < n; ++m)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][m] + d[m][j]);
    std::vector<Point> points;
    for (std::size_t i = 0; i < n; ++i) points.push_back(Point{"p" + std::to_string(i), std::nullopt});
    return MetricSpace::from_matrix(std::move(points), d, 0.0);
}

FunctionOracle random_function(const MetricSpace& space, std::mt19937_64& rng, bool allow_infinity,
                               FunctionShape shape) {
    const std::size_t n = space.size();
    const PointIndex anchor = pick_index(rng, n);
    auto eighth = [&](long long lo, long long hi) { return static_cast<double>(pick(rng, lo, hi)) / 8.0; };
    const double a = eighth(1, 16) * (pick(rng, 0, 1) == 0 ? -1.0 : 1.0);
    const double b = eighth(-80, 80);
    const double pivot = coordinate_of(space, pick_index(rng, n), anchor);
    const double low = eighth(-80, 80);
    const double high = low + eighth(1, 40);

    std::vector<ExtReal> values(n);
    for (PointIndex u = 0; u < n; ++u) {
        const double c = coordinate_of(space, u, anchor);
        switch (shape) {
            case FunctionShape::tabulated: values[u] = eighth(-80, 80); break;
            case FunctionShape::linear: values[u] = a * c + b; break;
            case FunctionShape::quadratic: values[u] = a * c * c + b; break;
            case FunctionShape::abs: values[u] = a * std::abs(c - pivot) + b; break;
            case FunctionShape::step: values[u] = c >= pivot ? high : low; break;
        }
    }
    std::string name(to_string(shape));
    if (allow_infinity && n >= 2 && pick(rng, 0, 1) == 1) {
        std::vector<PointIndex> order(n);
        std::iota(order.begin(), order.end(), PointIndex{0});
        std::shuffle(order.begin(), order.end(), rng);
        const auto count = static_cast<std::size_t>(pick(rng, 1, static_cast<long long>(n - 1)));
        for (std::size_t i = 0; i < count; ++i) values[order[i]] = ExtReal::plus_infinity();
        name += "+inf";
    }
    return FunctionOracle(std::move(name), std::move(values));
}

FunctionOracle random_function(const MetricSpace& space, std::mt19937_64& rng, bool allow_infinity) {
    const auto shape = kShapes[pick_index(rng, kShapes.size())];
    return random_function(space, rng, allow_infinity, shape);
}

ExtReal brute_force_optimum(const WitnessProblem& problem, PointIndex x, const Param& p, const PointSet* within) {
    const auto& space = *problem.space;
    std::vector<PointIndex> pool;
    if (within) {
        pool = within->members();
    } else {
        pool.resize(space.size());
        std::iota(pool.begin(), pool.end(), PointIndex{0});
    }
    const std::size_t l = problem.arity;
    std::optional<ExtReal> best;
    if (!pool.empty()) {
        std::vector<std::size_t> digit(l, 0);
        Tuple u(l);
        while (true) {
            for (std::size_t k = 0; k < l; ++k) u[k] = pool[digit[k]];
            if (problem.region_contains(x, p, u)) {
                const ExtReal s = problem.score(x, p, u);
                if (!best || (problem.mode == Mode::sup ? s > *best : s < *best)) best = s;
            }
            std::size_t k = 0;
            while (k < l && ++digit[k] == pool.size()) digit[k++] = 0;
            if (k == l) break;
        }
    }
    if (!best) throw Error(ErrorKind::EmptyRegion, "no tuple of the scanned pool lies in the region");
    return *best;
}

std::vector<std::string> suite_names() {
    std::vector<std::string> out;
    for (const auto& entry : kSuites) out.emplace_back(entry.name);
    return out;
}

std::optional<std::string> canonical_suite(std::string_view name) {
    for (const auto& entry : kSuites)
        if (entry.name == name || (!entry.alias.empty() && entry.alias == name)) return std::string(entry.name);
    return std::nullopt;
}

std::uint64_t instance_seed(std::uint64_t seed, std::size_t instance) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(instance)};
    std::array<std::uint32_t, 2> words{};
    seq.generate(words.begin(), words.end());
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

SuiteReport run_instance(std::string_view suite, const SuiteConfig& config, std::size_t instance) {
    const auto name = canonical_suite(suite);
    if (!name) throw Error(ErrorKind::UnknownSuite, "no suite named '" + std::string(suite) + "'");
    SuiteReport report;
    report.suite = *name;
    report.config = config;
    report.instances = 1;
    Instance in(config, instance);
    Recorder rec(report, in);
    if (*name == "sup-reduction") reduction_suite(in, config, rec, Mode::sup);
    else if (*name == "inf-reduction") reduction_suite(in, config, rec, Mode::inf);
    else if (*name == "family-intersection") intersection_suite(in, config, rec);
    else if (*name == "product-reduction") product_suite(in, config, rec, false);
    else if (*name == "semicontinuity") semicontinuity_suite(in, config, rec);
    else if (*name == "lipschitz-pairs") lipschitz_pairs_suite(in, config, rec);
    else if (*name == "lipschitz-modulus") lipschitz_modulus_suite(in, config, rec);
    else if (*name == "torus") torus_suite(in, config, rec);
    else if (*name == "slope") slope_suite(in, config, rec);
    else if (*name == "partial-slope") product_suite(in, config, rec, true);
    else invariants_suite(in, config, rec);
    return report;
}

SuiteReport run_suite(std::string_view suite, const SuiteConfig& config) {
    const auto name = canonical_suite(suite);
    if (!name) throw Error(ErrorKind::UnknownSuite, "no suite named '" + std::string(suite) + "'");
    if (config.n_min == 0 || config.n_min > config.n_max)
        throw Error(ErrorKind::BadDescriptor, "space sizes need 1 <= n_min <= n_max");
    const auto start = std::chrono::steady_clock::now();
    SuiteReport report;
    report.suite = *name;
    report.config = config;
    for (std::size_t i = 0; i < config.instances; ++i) {
        auto one = run_instance(*name, config, i);
        auto& tally = one.tallies["instances"];
        ++(one.all_passed() ? tally.pass : tally.fail);
        report.merge(one);
    }
    report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace sepdet
