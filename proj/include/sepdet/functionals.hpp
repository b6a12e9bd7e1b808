#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sepdet/ext_real.hpp"
#include "sepdet/metric_core.hpp"

namespace sepdet {

/// f : X -> R ∪ {±inf}, tabulated over a finite space. At least one value is finite.
class FunctionOracle {
public:
    FunctionOracle(std::string name, std::vector<ExtReal> values);

    ExtReal operator()(PointIndex u) const { return values_.at(u); }
    bool in_domain(PointIndex u) const { return values_.at(u).is_finite(); }
    std::size_t size() const { return values_.size(); }
    const std::string& name() const { return name_; }
    const std::vector<ExtReal>& values() const { return values_; }

    /// No value is -inf.
    bool is_proper() const;

    FunctionOracle negated() const;
    FunctionOracle scaled(double c) const;

    /// Distinct finite values, ascending.
    std::vector<double> finite_levels() const;

private:
    std::string name_;
    std::vector<ExtReal> values_;
};

/// f : X1 x X2 -> R ∪ {+inf}, tabulated row-major (x-major).
class ProductFunction {
public:
    ProductFunction(std::string name, std::size_t left_size, std::size_t right_size, std::vector<ExtReal> values);

    ExtReal operator()(PointIndex x, PointIndex y) const { return values_.at(x * right_size_ + y); }
    std::size_t left_size() const { return left_size_; }
    std::size_t right_size() const { return right_size_; }
    const std::string& name() const { return name_; }

    /// f(., y)
    FunctionOracle section(PointIndex y) const;

private:
    std::string name_;
    std::size_t left_size_;
    std::size_t right_size_;
    std::vector<ExtReal> values_;
};

/// Radii, shells and levels at which the discrete limit quantities are evaluated.
struct ScaleGrid {
    std::vector<double> radii;
    std::vector<std::pair<double, double>> shells;
    std::vector<double> levels;

    /// Throws NonPositiveRadius / BadShell.
    void validate() const;

    /**
     * The grid around x that realizes every distinct region. With
     * 0 < d_1 < ... < d_k the distinct distances from x and m_i the midpoint
     * of (d_i, d_{i+1}) (m_0 = d_1 / 2, m_k = d_k + 1):
     *  - radii m_1..m_k, descending: every ball holding a point besides x;
     *  - shells (m_i, m_j) for i < j: every nonempty torus.
     */
    static ScaleGrid realizing(const MetricSpace& space, PointIndex x);
};

/// sup over radii of inf f over the punctured ball (optionally inside `within`).
/// Empty punctured balls are skipped; IsolatedPoint if all are empty.
ExtReal liminf_at(const FunctionOracle& f, const MetricSpace& space, PointIndex x, const ScaleGrid& grid,
                  const PointSet* within = nullptr);

/// inf over radii of sup f over the punctured ball.
ExtReal limsup_at(const FunctionOracle& f, const MetricSpace& space, PointIndex x, const ScaleGrid& grid,
                  const PointSet* within = nullptr);

/// |limsup - f(x)| <= tol and |liminf - f(x)| <= tol.
bool continuity_check(const FunctionOracle& f, const MetricSpace& space, PointIndex x, const ScaleGrid& grid,
                      double tol, const PointSet* within = nullptr);

struct LocalLipschitz {
    ExtReal value;
    /// The (restricted) ball holds fewer than two points; value is 0.
    bool no_pairs = false;
};

/// sup |f(u1) - f(u2)| / d(u1, u2) over distinct u1, u2 of the (restricted) ball B(x, r).
LocalLipschitz lip_local_sup(const FunctionOracle& f, const MetricSpace& space, PointIndex x, double r,
                             const PointSet* within = nullptr);

/// min over grid radii of lip_local_sup.
ExtReal lip_modulus(const FunctionOracle& f, const MetricSpace& space, PointIndex x, const ScaleGrid& grid,
                    const PointSet* within = nullptr);

/// (t - f(u))+ / d(x, u) with +inf - (+inf) = 0.
ExtReal descent_quotient(ExtReal t, ExtReal fu, double distance);

/// sup of descent_quotient over the (restricted) torus T(x, r, s). BadShell; EmptyRegion.
ExtReal torus_sup(const FunctionOracle& f, const MetricSpace& space, PointIndex x, ExtReal t, double r, double s,
                  const PointSet* within = nullptr);

/// inf over s of sup over r < s of torus_sup with t = f(x); empty tori are skipped.
/// IsolatedPoint when every torus is empty.
ExtReal slope_at(const FunctionOracle& f, const MetricSpace& space, PointIndex x, const ScaleGrid& grid,
                 const PointSet* within = nullptr);

struct LipschitzVerdict {
    bool holds = true;
    struct Witness {
        PointIndex x;
        PointIndex y1;
        PointIndex y2;
    };
    std::optional<Witness> witness;
};

/// |f(x, y') - f(x, y'')| <= k d2(y', y'') over every triple (exhaustive).
LipschitzVerdict verify_lipschitz_second(const ProductFunction& f, const ProductSpace& space, double k);

/// slope of f(., y) at x over X1, optionally restricted to `within` ⊆ X1.
/// With `declared_k` the Lipschitz condition is verified first (LipschitzViolation).
ExtReal partial_slope(const ProductFunction& f, const ProductSpace& space, PointIndex x, PointIndex y,
                      const ScaleGrid& grid, const PointSet* within = nullptr,
                      std::optional<double> declared_k = std::nullopt);

}  // namespace sepdet
