#pragma once

#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "sepdet/functionals.hpp"
#include "sepdet/scheme.hpp"

namespace sepdet {

/// The registered region/score families.
enum class ProblemFamily {
    /// G(x, r): ordered pairs of distinct points of B(x, r); score |f(u1) - f(u2)| / d(u1, u2).
    ball_pairs,
    /// G(x, r): B(x, r) without x; score f(u).
    punctured_ball,
    /// G(x, (t, r, s)): T(x, r, s); score (t - f(u))+ / d(x, u).
    torus_slope,
};

std::string_view to_string(ProblemFamily family);
std::optional<ProblemFamily> parse_family(std::string_view name);

/// Denominator exponent of the dyadic rationals k / 2^m that `ParamSpace::sample` draws.
inline constexpr int kSampleDyadicExponent = 4;

WitnessProblem ball_pair_problem(std::shared_ptr<const MetricSpace> space, std::shared_ptr<const FunctionOracle> f,
                                 Mode mode = Mode::sup);

WitnessProblem punctured_ball_problem(std::shared_ptr<const MetricSpace> space,
                                      std::shared_ptr<const FunctionOracle> f, Mode mode = Mode::sup);

/// `levels` are the t-values of the truncation; default_levels(f) when empty.
WitnessProblem torus_problem(std::shared_ptr<const MetricSpace> space, std::shared_ptr<const FunctionOracle> f,
                             Mode mode = Mode::sup, std::vector<double> levels = {});

WitnessProblem make_problem(ProblemFamily family, std::shared_ptr<const MetricSpace> space,
                            std::shared_ptr<const FunctionOracle> f, Mode mode = Mode::sup);

/// Every finite value of f, plus one level above them all. The top level
/// makes witnesses land in dom f whenever a torus meets it.
std::vector<double> default_levels(const FunctionOracle& f);

/// Torus-slope problem over X1 whose score reads f(u, y); levels follow f(., y).
/// With `k` the problem carries a Lipschitz-in-y spot check.
ProductWitnessProblem product_torus_problem(std::shared_ptr<const ProductSpace> space,
                                            std::shared_ptr<const ProductFunction> f,
                                            std::optional<double> k = std::nullopt);

/**
 * Finite surrogate of the approximation property of G: for every u in G(x, p)
 * some p' of the truncation at x has u in G(x, p') ⊆ G(x, p).
 */
bool truncation_refines(const WitnessProblem& problem, PointIndex x, const Param& p);

}  // namespace sepdet
