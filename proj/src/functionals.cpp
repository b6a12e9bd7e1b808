#include "sepdet/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "sepdet/error.hpp"

namespace sepdet {

FunctionOracle::FunctionOracle(std::string name, std::vector<ExtReal> values)
    : name_(std::move(name)), values_(std::move(values)) {
    if (std::any_of(values_.begin(), values_.end(), [](ExtReal v) { return std::isnan(v.value()); }))
        throw Error(ErrorKind::BadDescriptor, "function " + name_ + " has a NaN value");
    if (std::none_of(values_.begin(), values_.end(), [](ExtReal v) { return v.is_finite(); }))
        throw Error(ErrorKind::BadDescriptor, "function " + name_ + " is finite nowhere");
}

bool FunctionOracle::is_proper() const {
    return std::none_of(values_.begin(), values_.end(), [](ExtReal v) { return v.is_minus_infinity(); });
}

FunctionOracle FunctionOracle::negated() const {
    std::vector<ExtReal> out;
    out.reserve(values_.size());
    for (ExtReal v : values_) out.push_back(-v);
    return FunctionOracle("-" + name_, std::move(out));
}

FunctionOracle FunctionOracle::scaled(double c) const {
    if (!(c > 0.0)) throw Error(ErrorKind::BadDescriptor, "scale factor must be positive");
    std::vector<ExtReal> out;
    out.reserve(values_.size());
    for (ExtReal v : values_) out.push_back(v.value() * c);
    return FunctionOracle(name_ + "*c", std::move(out));
}

std::vector<double> FunctionOracle::finite_levels() const {
    std::vector<double> out;
    for (ExtReal v : values_)
        if (v.is_finite()) out.push_back(v.value());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

ProductFunction::ProductFunction(std::string name, std::size_t left_size, std::size_t right_size,
                                 std::vector<ExtReal> values)
    : name_(std::move(name)), left_size_(left_size), right_size_(right_size), values_(std::move(values)) {
    if (values_.size() != left_size_ * right_size_)
        throw Error(ErrorKind::BadDescriptor, "product function " + name_ + " has the wrong number of values");
    if (std::any_of(values_.begin(), values_.end(), [](ExtReal v) { return std::isnan(v.value()); }))
        throw Error(ErrorKind::BadDescriptor, "product function " + name_ + " has a NaN value");
}

FunctionOracle ProductFunction::section(PointIndex y) const {
    std::vector<ExtReal> out(left_size_);
    for (PointIndex x = 0; x < left_size_; ++x) out[x] = (*this)(x, y);
    return FunctionOracle(name_ + "(.,y" + std::to_string(y) + ")", std::move(out));
}

void ScaleGrid::validate() const {
    for (double r : radii)
        if (!(r > 0.0)) throw Error(ErrorKind::NonPositiveRadius, "grid radius " + std::to_string(r));
    for (auto [r, s] : shells)
        if (!(r > 0.0 && r < s))
            throw Error(ErrorKind::BadShell, "grid shell (" + std::to_string(r) + ", " + std::to_string(s) + ")");
}

namespace {

double midpoint(double lo, double hi) {
    const double m = lo + (hi - lo) / 2.0;
    if (!(lo < m && m < hi)) throw Error(ErrorKind::BadDescriptor, "distances too close to separate");
    return m;
}

void require_member(const PointSet* within, PointIndex x) {
    if (within && !within->contains(x)) throw Error(ErrorKind::UnknownPoint, "center is outside the subset");
}

bool admitted(const PointSet* within, PointIndex u) { return !within || within->contains(u); }

std::optional<ExtReal> torus_sup_if_nonempty(const FunctionOracle& f, const MetricSpace& space, PointIndex x,
                                             ExtReal t, double r, double s, const PointSet* within) {
    if (!(r > 0.0 && r < s))
        throw Error(ErrorKind::BadShell, "shell (" + std::to_string(r) + ", " + std::to_string(s) + ")");
    std::optional<ExtReal> best;
    const auto row = space.row(x);
    for (PointIndex u = 0; u < row.size(); ++u) {
        const double d = row[u];
        if (!(r < d && d < s) || !admitted(within, u)) continue;
        const ExtReal q = descent_quotient(t, f(u), d);
        if (!best || q > *best) best = q;
    }
    return best;
}

}  // namespace

ScaleGrid ScaleGrid::realizing(const MetricSpace& space, PointIndex x) {
    const auto d = space.distinct_distances_from(x);
    ScaleGrid grid;
    if (d.empty()) return grid;
    std::vector<double> marks{d.front() / 2.0};
    for (std::size_t i = 0; i + 1 < d.size(); ++i) marks.push_back(midpoint(d[i], d[i + 1]));
    marks.push_back(d.back() + 1.0);
    grid.radii.assign(marks.rbegin(), marks.rend() - 1);
    for (std::size_t i = 0; i < marks.size(); ++i)
        for (std::size_t j = i + 1; j < marks.size(); ++j) grid.shells.emplace_back(marks[i], marks[j]);
    return grid;
}

ExtReal liminf_at(const FunctionOracle& f, const MetricSpace& space, PointIndex x, const ScaleGrid& grid,
                  const PointSet* within) {
    grid.validate();
    require_member(within, x);
    std::optional<ExtReal> out;
    const auto row = space.row(x);
    for (double r : grid.radii) {
        std::optional<ExtReal> inner;
        for (PointIndex u = 0; u < row.size(); ++u)
            if (u != x && row[u] < r && admitted(within, u) && (!inner || f(u) < *inner)) inner = f(u);
        if (inner && (!out || *inner > *out)) out = inner;
    }
    if (!out) throw Error(ErrorKind::IsolatedPoint, "every punctured ball around " + space.point(x).id + " is empty");
    return *out;
}

ExtReal limsup_at(const FunctionOracle& f, const MetricSpace& space, PointIndex x, const ScaleGrid& grid,
                  const PointSet* within) {
    grid.validate();
    require_member(within, x);
    std::optional<ExtReal> out;
    const auto row = space.row(x);
    for (double r : grid.radii) {
        std::optional<ExtReal> inner;
        for (PointIndex u = 0; u < row.size(); ++u)
            if (u != x && row[u] < r && admitted(within, u) && (!inner || f(u) > *inner)) inner = f(u);
        if (inner && (!out || *inner < *out)) out = inner;
    }
    if (!out) throw Error(ErrorKind::IsolatedPoint, "every punctured ball around " + space.point(x).id + " is empty");
    return *out;
}

bool continuity_check(const FunctionOracle& f, const MetricSpace& space, PointIndex x, const ScaleGrid& grid,
                      double tol, const PointSet* within) {
    const ExtReal fx = f(x);
    const ExtReal upper = limsup_at(f, space, x, grid, within);
    const ExtReal lower = liminf_at(f, space, x, grid, within);
    return magnitude(difference(upper, fx)).value() <= tol && magnitude(difference(lower, fx)).value() <= tol;
}

LocalLipschitz lip_local_sup(const FunctionOracle& f, const MetricSpace& space, PointIndex x, double r,
                             const PointSet* within) {
    auto ball = ball_points(space, x, r);
    std::erase_if(ball, [&](PointIndex u) { return !admitted(within, u); });
    if (ball.size() < 2) return {0.0, true};
    ExtReal best = 0.0;
    for (std::size_t i = 0; i < ball.size(); ++i)
        for (std::size_t j = i + 1; j < ball.size(); ++j) {
            const PointIndex a = ball[i], b = ball[j];
            const ExtReal q = divide(magnitude(difference(f(a), f(b))), space.distance(a, b));
            if (q > best) best = q;
        }
    return {best, false};
}

ExtReal lip_modulus(const FunctionOracle& f, const MetricSpace& space, PointIndex x, const ScaleGrid& grid,
                    const PointSet* within) {
    if (grid.radii.empty()) throw Error(ErrorKind::BadDescriptor, "Lipschitz modulus needs at least one radius");
    grid.validate();
    require_member(within, x);
    ExtReal out = ExtReal::plus_infinity();
    for (double r : grid.radii) out = std::min(out, lip_local_sup(f, space, x, r, within).value);
    return out;
}

ExtReal descent_quotient(ExtReal t, ExtReal fu, double distance) {
    return divide(positive_part(difference(t, fu)), distance);
}

ExtReal torus_sup(const FunctionOracle& f, const MetricSpace& space, PointIndex x, ExtReal t, double r, double s,
                  const PointSet* within) {
    require_member(within, x);
    auto out = torus_sup_if_nonempty(f, space, x, t, r, s, within);
    if (!out) throw Error(ErrorKind::EmptyRegion, "torus around " + space.point(x).id + " is empty");
    return *out;
}

ExtReal slope_at(const FunctionOracle& f, const MetricSpace& space, PointIndex x, const ScaleGrid& grid,
                 const PointSet* within) {
    grid.validate();
    require_member(within, x);
    const ExtReal fx = f(x);
    if (fx.is_minus_infinity()) throw Error(ErrorKind::BadDescriptor, "slope of a function taking -inf");
    std::map<double, ExtReal> per_outer;
    for (auto [r, s] : grid.shells) {
        const auto v = torus_sup_if_nonempty(f, space, x, fx, r, s, within);
        if (!v) continue;
        auto [it, inserted] = per_outer.emplace(s, *v);
        if (!inserted && *v > it->second) it->second = *v;
    }
    if (per_outer.empty())
        throw Error(ErrorKind::IsolatedPoint, "every torus around " + space.point(x).id + " is empty");
    ExtReal out = ExtReal::plus_infinity();
    for (const auto& [s, v] : per_outer)
        if (v < out) out = v;
    return out;
}

LipschitzVerdict verify_lipschitz_second(const ProductFunction& f, const ProductSpace& space, double k) {
    const std::size_t n1 = space.left().size(), n2 = space.right().size();
    if (f.left_size() != n1 || f.right_size() != n2)
        throw Error(ErrorKind::SpaceMismatch, "product function does not match the product space");
    for (PointIndex x = 0; x < n1; ++x)
        for (PointIndex y1 = 0; y1 < n2; ++y1)
            for (PointIndex y2 = y1 + 1; y2 < n2; ++y2) {
                const ExtReal gap = magnitude(difference(f(x, y1), f(x, y2)));
                if (gap.value() > k * space.right().distance(y1, y2))
                    return LipschitzVerdict{false, LipschitzVerdict::Witness{x, y1, y2}};
            }
    return {};
}

ExtReal partial_slope(const ProductFunction& f, const ProductSpace& space, PointIndex x, PointIndex y,
                      const ScaleGrid& grid, const PointSet* within, std::optional<double> declared_k) {
    if (declared_k) {
        const auto verdict = verify_lipschitz_second(f, space, *declared_k);
        if (!verdict.holds)
            throw Error(ErrorKind::LipschitzViolation,
                        f.name() + " breaks the Lipschitz bound at x=" + space.left().point(verdict.witness->x).id);
    }
    return slope_at(f.section(y), space.left(), x, grid, within);
}

}  // namespace sepdet
