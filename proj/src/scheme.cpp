#include "sepdet/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "sepdet/error.hpp"

namespace sepdet {

double param_distance(const Param& a, const Param& b) {
    if (a.size() != b.size()) throw Error(ErrorKind::BadDescriptor, "parameter dimension mismatch");
    double out = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) out = std::max(out, std::fabs(a[i] - b[i]));
    return out;
}

std::string_view to_string(Mode mode) { return mode == Mode::sup ? "sup" : "inf"; }

std::string_view to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::skipped_empty_region: return "skipped-empty-region";
    }
    return "fail";
}

std::vector<std::size_t> GeneratedSubspace::level_sizes() const {
    std::vector<std::size_t> out;
    out.reserve(levels.size());
    for (const auto& level : levels) out.push_back(level.size());
    return out;
}

namespace {

/// a is strictly better than b for the mode.
bool better(Mode mode, ExtReal a, ExtReal b) { return mode == Mode::sup ? a > b : a < b; }

ExtReal worst(Mode mode) { return mode == Mode::sup ? ExtReal::minus_infinity() : ExtReal::plus_infinity(); }

bool near_optimal(Mode mode, ExtReal s, ExtReal best, double eps) {
    if (mode == Mode::sup) {
        if (best.is_plus_infinity()) return s.is_plus_infinity();
        return s.value() >= best.value() - eps;
    }
    if (best.is_minus_infinity()) return s.is_minus_infinity();
    return s.value() <= best.value() + eps;
}

bool lexicographically_less(std::span<const PointIndex> a, std::span<const PointIndex> b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

std::vector<Tuple> witness_select(const WitnessProblem& problem, PointIndex x, const Param& p, double eps,
                                  std::size_t cap) {
    if (cap == 0) throw Error(ErrorKind::BadDescriptor, "witness cap must be positive");
    const Region region = problem.region(x, p);
    if (region.empty())
        throw Error(ErrorKind::EmptyRegion, problem.name + ": G(z) is empty at center " + problem.space->point(x).id);

    std::vector<ExtReal> scores(region.size());
    ExtReal best = worst(problem.mode);
    for (std::size_t i = 0; i < region.size(); ++i) {
        scores[i] = problem.score(x, p, region[i]);
        if (better(problem.mode, scores[i], best)) best = scores[i];
    }
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < region.size(); ++i)
        if (near_optimal(problem.mode, scores[i], best, eps)) candidates.push_back(i);
    // best itself is always a candidate, so candidates is nonempty
    const std::size_t keep = std::min(cap, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep), candidates.end(),
                      [&](std::size_t a, std::size_t b) { return lexicographically_less(region[a], region[b]); });
    std::vector<Tuple> out;
    out.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) {
        auto t = region[candidates[i]];
        out.emplace_back(t.begin(), t.end());
    }
    return out;
}

GeneratedSubspace closure_iterate(const WitnessProblem& problem, const PointSet& seed, const ClosureConfig& config) {
    return closure_iterate(std::span<const WitnessProblem>(&problem, 1), seed, config);
}

GeneratedSubspace closure_iterate(std::span<const WitnessProblem> problems, const PointSet& seed,
                                  const ClosureConfig& config) {
    if (problems.empty()) throw Error(ErrorKind::BadDescriptor, "closure needs at least one witness operator");
    if (seed.empty()) throw Error(ErrorKind::BadDescriptor, "closure seed is empty");
    const std::size_t n = problems.front().space->size();
    if (seed.universe() != n) throw Error(ErrorKind::SpaceMismatch, "seed does not live in the problem space");

    GeneratedSubspace out;
    out.levels.push_back(seed);
    // Witnesses of a center never change, so only centers new to the previous
    // level need a sweep; older centers already contributed theirs.
    std::vector<PointIndex> frontier = seed.members();
    for (std::size_t depth = 1; depth <= config.max_depth; ++depth) {
        const PointSet& current = out.levels.back();
        std::map<PointIndex, Provenance> added;
        for (PointIndex x : frontier) {
            for (std::size_t k = 0; k < problems.size(); ++k) {
                const WitnessProblem& problem = problems[k];
                for (const Param& p : problem.params.truncation(x)) {
                    for (const Tuple& witness : witness_select(problem, x, p, config.eps, config.cap)) {
                        for (std::size_t c = 0; c < witness.size(); ++c) {
                            const PointIndex u = witness[c];
                            if (current.contains(u) || added.contains(u)) continue;
                            added.emplace(u, Provenance{x, p, witness, c, k, depth});
                        }
                    }
                }
            }
        }
        frontier.clear();
        for (const auto& [u, _] : added) frontier.push_back(u);
        out.levels.push_back(current.with(frontier));
        out.provenance.merge(added);
        if (frontier.empty()) {
            out.fixed_point = true;
            break;
        }
    }
    return out;
}

GeneratedSubspace intersect_problems(std::span<const WitnessProblem> problems, const PointSet& seed,
                                     const ClosureConfig& config) {
    for (const auto& problem : problems)
        if (problem.space != problems.front().space)
            throw Error(ErrorKind::SpaceMismatch, problem.name + " lives over a different space");
    return closure_iterate(problems, seed, config);
}

namespace {

DeterminacyCheck check_in_mode(const WitnessProblem& problem, Mode mode, const PointSet& within, PointIndex x,
                               const Param& p, double tolerance) {
    if (!within.contains(x))
        throw Error(ErrorKind::UnknownPoint, "center " + problem.space->point(x).id + " is not in the subset");
    DeterminacyCheck check;
    check.x = x;
    check.param = p;
    check.mode = mode;
    check.tolerance = tolerance;
    check.lhs = worst(mode);
    check.rhs = worst(mode);

    const Region region = problem.region(x, p);
    if (region.empty()) {
        check.verdict = Verdict::skipped_empty_region;
        return check;
    }
    for (std::size_t i = 0; i < region.size(); ++i) {
        const auto u = region[i];
        const ExtReal s = problem.score(x, p, u);
        if (better(mode, s, check.lhs)) check.lhs = s;
        if (std::all_of(u.begin(), u.end(), [&](PointIndex v) { return within.contains(v); })) {
            check.region_hit = true;
            if (better(mode, s, check.rhs)) check.rhs = s;
        }
    }
    check.monotone = mode == Mode::sup ? check.rhs <= check.lhs : check.rhs >= check.lhs;
    const ExtReal gap = mode == Mode::sup ? difference(check.lhs, check.rhs) : difference(check.rhs, check.lhs);
    check.verdict = check.region_hit && gap.value() <= tolerance ? Verdict::pass : Verdict::fail;
    return check;
}

}  // namespace

DeterminacyCheck check_sup_reduction(const WitnessProblem& problem, const PointSet& within, PointIndex x,
                                     const Param& p, double tolerance) {
    return check_in_mode(problem, Mode::sup, within, x, p, tolerance);
}

DeterminacyCheck check_inf_reduction(const WitnessProblem& problem, const PointSet& within, PointIndex x,
                                     const Param& p, double tolerance) {
    return check_in_mode(problem, Mode::inf, within, x, p, tolerance);
}

DeterminacyCheck check_reduction(const WitnessProblem& problem, const PointSet& within, PointIndex x,
                                 const Param& p, double tolerance) {
    return check_in_mode(problem, problem.mode, within, x, p, tolerance);
}

std::vector<DeterminacyCheck> check_all(const WitnessProblem& problem, const PointSet& within, double tolerance,
                                        const std::function<std::vector<Param>(PointIndex)>& extra) {
    std::vector<DeterminacyCheck> out;
    for (PointIndex x : within) {
        for (const Param& p : problem.params.truncation(x)) out.push_back(check_reduction(problem, within, x, p, tolerance));
        if (extra)
            for (const Param& p : extra(x)) out.push_back(check_reduction(problem, within, x, p, tolerance));
    }
    return out;
}

namespace {

std::string coordinate_id(const std::vector<Rational>& v) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ')';
    return os.str();
}

}  // namespace

std::vector<Point> rational_span_close(const std::vector<Point>& points, const std::vector<Rational>& grid,
                                       std::size_t budget) {
    std::optional<std::size_t> dim;
    for (const auto& p : points) {
        if (!p.coords) throw Error(ErrorKind::NoCoordinates, "point " + p.id + " has no coordinates");
        if (dim && *dim != p.coords->size())
            throw Error(ErrorKind::BadDescriptor, "point " + p.id + " has a different dimension");
        dim = p.coords->size();
    }

    std::vector<Point> out;
    std::set<std::vector<Rational>> seen;
    for (const auto& p : points)
        if (seen.insert(*p.coords).second) out.push_back(p);

    auto admit = [&](std::vector<Rational> v) {
        if (out.size() >= budget || seen.contains(v)) return;
        seen.insert(v);
        out.push_back(Point{coordinate_id(v), std::move(v)});
    };

    while (out.size() < budget) {
        const std::size_t before = out.size();
        const std::vector<Point> snapshot = out;
        for (std::size_t i = 0; i < snapshot.size() && out.size() < budget; ++i) {
            const auto& u = *snapshot[i].coords;
            for (const Rational& a : grid) {
                std::vector<Rational> v(u.size());
                for (std::size_t k = 0; k < u.size(); ++k) v[k] = a * u[k];
                admit(std::move(v));
            }
            for (std::size_t j = i + 1; j < snapshot.size() && out.size() < budget; ++j) {
                const auto& w = *snapshot[j].coords;
                for (const Rational& a : grid)
                    for (const Rational& b : grid) {
                        std::vector<Rational> v(u.size());
                        for (std::size_t k = 0; k < u.size(); ++k) v[k] = a * u[k] + b * w[k];
                        admit(std::move(v));
                    }
            }
        }
        if (out.size() == before) break;
    }
    return out;
}

WitnessProblem ProductWitnessProblem::section(PointIndex y) const {
    WitnessProblem out;
    out.name = name + "[y=" + space->right().point(y).id + "]";
    out.space = space->left_ptr();
    out.params = params_for(y);
    out.arity = arity;
    out.mode = mode;
    out.region = region;
    out.region_contains = region_contains;
    out.score = [score = score, y](PointIndex x, const Param& p, std::span<const PointIndex> u) {
        return score(x, p, u, y);
    };
    return out;
}

ProductReduction product_closure(const ProductWitnessProblem& problem, const PointSet& seed1, const PointSet& seed2,
                                 const ClosureConfig& config) {
    if (problem.lipschitz_check && !problem.lipschitz_check())
        throw Error(ErrorKind::LipschitzViolation, problem.name + ": score is not uniformly Lipschitz in y");
    if (seed2.empty()) throw Error(ErrorKind::BadDescriptor, "second-factor seed is empty");
    std::vector<WitnessProblem> sections;
    sections.reserve(seed2.size());
    for (PointIndex y : seed2) sections.push_back(problem.section(y));
    return ProductReduction{intersect_problems(sections, seed1, config), seed2};
}

}  // namespace sepdet
