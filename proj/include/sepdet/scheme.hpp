#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sepdet/ext_real.hpp"
#include "sepdet/metric_core.hpp"

namespace sepdet {

/// A parameter point p of P, as its real coordinates (radius, or (t, r, s), ...).
using Param = std::vector<double>;

/// Max-norm distance between two parameter points of equal dimension.
double param_distance(const Param& a, const Param& b);

enum class Mode { sup, inf };

std::string_view to_string(Mode mode);

/**
 * The parameter space P with its countable dense subset Q, seen through the
 * two finite views a run actually uses:
 *  - `truncation(x)`: the parameters the closure sweeps at center x. Shipped
 *    families return one parameter per distinct nonempty region around x.
 *  - `sample(rng)`: a random element of Q inside the declared bounds, for checks.
 */
struct ParamSpace {
    std::string description;
    std::function<std::vector<Param>(PointIndex)> truncation;
    std::function<Param(std::mt19937_64&, PointIndex)> sample;
};

/// The data (X, P, Q, G, Phi, l, mode) of one separable-reduction problem.
struct WitnessProblem {
    using RegionMap = std::function<Region(PointIndex, const Param&)>;
    using Membership = std::function<bool(PointIndex, const Param&, std::span<const PointIndex>)>;
    using Score = std::function<ExtReal(PointIndex, const Param&, std::span<const PointIndex>)>;

    std::string name;
    std::shared_ptr<const MetricSpace> space;
    ParamSpace params;
    std::size_t arity = 1;
    Mode mode = Mode::sup;
    /// Enumerates G(x, p).
    RegionMap region;
    /// Decides u in G(x, p) without enumerating; the brute-force oracle filters X^l with it.
    Membership region_contains;
    Score score;
};

using Tuple = std::vector<PointIndex>;

struct Provenance {
    PointIndex center = 0;
    Param param;
    Tuple witness;
    std::size_t component = 0;
    /// Index of the operator (problem) that produced the point, for unions of operators.
    std::size_t problem = 0;
    std::size_t level = 0;
};

/// The chain C_0 ⊆ C_1 ⊆ ... ⊆ C_N of a closure run.
struct GeneratedSubspace {
    std::vector<PointSet> levels;
    bool fixed_point = false;
    std::map<PointIndex, Provenance> provenance;

    const PointSet& result() const { return levels.back(); }
    std::vector<std::size_t> level_sizes() const;
};

struct ClosureConfig {
    double eps = 0.0;
    std::size_t cap = 1;
    std::size_t max_depth = 64;
};

enum class Verdict { pass, fail, skipped_empty_region };

std::string_view to_string(Verdict verdict);

/// One instance of the determinacy equality: full optimum vs optimum over Y^l ∩ G(z).
struct DeterminacyCheck {
    PointIndex x = 0;
    Param param;
    Mode mode = Mode::sup;
    ExtReal lhs;
    ExtReal rhs;
    bool region_hit = false;
    Verdict verdict = Verdict::fail;
    double tolerance = 0.0;
    /// rhs <= lhs (sup) or rhs >= lhs (inf). Restriction can never beat the full optimum.
    bool monotone = true;
};

/**
 * A finite D(z) ⊆ G(z): the eps-optimal tuples of G(z) in lexicographic order,
 * truncated to `cap`. With eps = 0 the first element is an exact argmax (sup)
 * or argmin (inf). Throws EmptyRegion if G(z) is empty.
 */
std::vector<Tuple> witness_select(const WitnessProblem& problem, PointIndex x, const Param& p, double eps,
                                  std::size_t cap);

/// Closure under the witness operator of one problem.
GeneratedSubspace closure_iterate(const WitnessProblem& problem, const PointSet& seed, const ClosureConfig& config);

/// Closure under the union of several witness operators over one space.
GeneratedSubspace closure_iterate(std::span<const WitnessProblem> problems, const PointSet& seed,
                                  const ClosureConfig& config);

/// Closure under the union of the problems' operators; SpaceMismatch unless all share one space.
GeneratedSubspace intersect_problems(std::span<const WitnessProblem> problems, const PointSet& seed,
                                     const ClosureConfig& config);

DeterminacyCheck check_sup_reduction(const WitnessProblem& problem, const PointSet& within, PointIndex x,
                                     const Param& p, double tolerance = 0.0);

DeterminacyCheck check_inf_reduction(const WitnessProblem& problem, const PointSet& within, PointIndex x,
                                     const Param& p, double tolerance = 0.0);

/// Dispatches on problem.mode.
DeterminacyCheck check_reduction(const WitnessProblem& problem, const PointSet& within, PointIndex x,
                                 const Param& p, double tolerance = 0.0);

/// Checks every x in `within` against its truncation parameters plus `extra(x)`.
std::vector<DeterminacyCheck> check_all(const WitnessProblem& problem, const PointSet& within, double tolerance,
                                        const std::function<std::vector<Param>(PointIndex)>& extra = {});

/**
 * Grows a set of rational coordinate vectors by combinations a*u and a*u + b*v
 * with coefficients from `grid`, round after round, until nothing new appears
 * or the output holds `budget` points. Input points always survive. New points
 * get ids spelling their coordinates. Throws NoCoordinates.
 */
std::vector<Point> rational_span_close(const std::vector<Point>& points, const std::vector<Rational>& grid,
                                       std::size_t budget);

/// A problem over X1 whose score carries an extra argument y from X2.
struct ProductWitnessProblem {
    using Score = std::function<ExtReal(PointIndex, const Param&, std::span<const PointIndex>, PointIndex)>;

    std::string name;
    std::shared_ptr<const ProductSpace> space;
    /// Parameters may depend on y (for instance level sets of f(., y)).
    std::function<ParamSpace(PointIndex)> params_for;
    std::size_t arity = 1;
    Mode mode = Mode::sup;
    WitnessProblem::RegionMap region;
    WitnessProblem::Membership region_contains;
    Score score;
    /// Optional uniform-continuity-in-y spot check; an empty function skips it.
    std::function<bool()> lipschitz_check;

    /// The ordinary problem over X1 obtained by freezing y.
    WitnessProblem section(PointIndex y) const;
};

struct ProductReduction {
    GeneratedSubspace first;
    PointSet second;
};

/// Y2 = seed2 (also the dense sample); Y1 is closed under every section operator y in Y2.
ProductReduction product_closure(const ProductWitnessProblem& problem, const PointSet& seed1, const PointSet& seed2,
                                 const ClosureConfig& config);

}  // namespace sepdet
