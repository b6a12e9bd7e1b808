#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace sepdet {

using Rational = boost::multiprecision::cpp_rational;

/// Position of a point in its space's enumeration order. Point ids are
/// ordered the same way, so index order doubles as id order for tie-breaks.
using PointIndex = std::size_t;

/// Comparison slack for metric-axiom validation of floating point distances.
inline constexpr double kMetricTolerance = 1e-12;

struct Point {
    std::string id;
    std::optional<std::vector<Rational>> coords;
};

enum class SpaceKind { finite, lazy };

/**
 * A metric space that is either finite (explicit points and a dense distance
 * matrix) or lazy (an enumerator over the naturals plus a distance oracle).
 *
 * Immutable after construction; every accessor is const and thread-safe.
 * Lazy spaces are only ever inspected through a finite enumeration budget.
 */
class MetricSpace {
public:
    using Enumerator = std::function<Point(std::size_t)>;
    using Oracle = std::function<double(const Point&, const Point&)>;

    /// Finite space with an explicit matrix. Throws MetricAxiomViolation
    /// (naming the offending pair or triple) beyond `tolerance`.
    static MetricSpace from_matrix(std::vector<Point> points, const std::vector<std::vector<double>>& matrix,
                                   double tolerance = kMetricTolerance);

    /// Finite space of coordinate points under the Euclidean norm. Squared
    /// distances are summed exactly before the single rounding square root.
    static MetricSpace euclidean(std::vector<Point> points);

    static MetricSpace lazy(std::string name, Enumerator enumerate, Oracle distance);

    SpaceKind kind() const { return kind_; }
    bool is_finite() const { return kind_ == SpaceKind::finite; }
    const std::string& name() const { return name_; }

    /// Number of points; finite spaces only.
    std::size_t size() const;

    /// Finite spaces only.
    const Point& point(PointIndex i) const;
    const std::vector<Point>& points() const;

    /// The i-th enumerated point (either kind).
    Point enumerate(std::size_t i) const;

    /// Finite spaces only; throws UnknownPoint.
    PointIndex index_of(std::string_view id) const;
    bool contains(std::string_view id) const;

    double distance(PointIndex a, PointIndex b) const;

    /// Finite spaces only: the row of distances from `x`.
    std::span<const double> row(PointIndex x) const;

    double diameter() const;

    /// Distinct positive distances from `x`, ascending.
    std::vector<double> distinct_distances_from(PointIndex x) const;

    /// A finite space made of the first `budget` enumerated points. For a
    /// finite space this is the prefix of its point list.
    MetricSpace materialize(std::size_t budget) const;

    /// Number of points a region scan visits under `budget`.
    std::size_t scan_limit(std::optional<std::size_t> budget) const;

private:
    MetricSpace() = default;

    void index_ids();

    SpaceKind kind_ = SpaceKind::finite;
    std::string name_;
    std::vector<Point> points_;
    std::vector<double> matrix_;
    std::unordered_map<std::string, PointIndex> by_id_;
    Enumerator enumerate_;
    Oracle oracle_;
};

/// A subset of a finite space: sorted members plus a membership mask.
class PointSet {
public:
    PointSet() = default;
    PointSet(std::size_t universe, std::vector<PointIndex> members);

    static PointSet all(std::size_t universe);

    bool contains(PointIndex u) const { return u < mask_.size() && mask_[u]; }
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }
    std::size_t universe() const { return mask_.size(); }
    const std::vector<PointIndex>& members() const { return members_; }
    auto begin() const { return members_.begin(); }
    auto end() const { return members_.end(); }

    /// Superset test.
    bool includes(const PointSet& other) const;
    PointSet united(const PointSet& other) const;
    PointSet with(std::span<const PointIndex> extra) const;

    friend bool operator==(const PointSet& a, const PointSet& b) { return a.members_ == b.members_; }

private:
    std::vector<PointIndex> members_;
    std::vector<bool> mask_;
};

/// Throws MetricAxiomViolation if the finite space breaks an axiom beyond `tolerance`.
void validate_metric(const MetricSpace& space, double tolerance = kMetricTolerance);

/// The Euclidean norm of the coordinate difference, computed exactly up to the final root.
double euclidean_distance(const Point& a, const Point& b);

/// A fixed-arity list of point tuples, stored flat.
class Region {
public:
    explicit Region(std::size_t arity);

    std::size_t arity() const { return arity_; }
    std::size_t size() const { return arity_ == 0 ? 0 : flat_.size() / arity_; }
    bool empty() const { return flat_.empty(); }

    std::span<const PointIndex> operator[](std::size_t i) const {
        return {flat_.data() + i * arity_, arity_};
    }

    void push_back(std::span<const PointIndex> tuple);
    void push_back(std::initializer_list<PointIndex> tuple);

private:
    std::size_t arity_;
    std::vector<PointIndex> flat_;
};

/// d(a, b) looked up by point id; throws UnknownPoint.
double distance(const MetricSpace& space, std::string_view a, std::string_view b);

/// Points u with d(x, u) < r. Lazy spaces require a budget (BudgetRequired).
std::vector<PointIndex> ball_points(const MetricSpace& space, PointIndex x, double r,
                                    std::optional<std::size_t> budget = std::nullopt);

/// Points u with r < d(x, u) < s.
std::vector<PointIndex> torus_points(const MetricSpace& space, PointIndex x, double r, double s,
                                     std::optional<std::size_t> budget = std::nullopt);

/// Ordered pairs of distinct points of B(x, r).
Region ball_pairs(const MetricSpace& space, PointIndex x, double r,
                  std::optional<std::size_t> budget = std::nullopt);

/// X1 x X2 under the max metric.
class ProductSpace {
public:
    ProductSpace(std::shared_ptr<const MetricSpace> left, std::shared_ptr<const MetricSpace> right);

    const MetricSpace& left() const { return *left_; }
    const MetricSpace& right() const { return *right_; }
    const std::shared_ptr<const MetricSpace>& left_ptr() const { return left_; }
    const std::shared_ptr<const MetricSpace>& right_ptr() const { return right_; }

    std::size_t size() const { return left_->size() * right_->size(); }
    PointIndex pack(PointIndex a, PointIndex b) const { return a * right_->size() + b; }
    std::pair<PointIndex, PointIndex> unpack(PointIndex p) const {
        return {p / right_->size(), p % right_->size()};
    }

    double distance(PointIndex a1, PointIndex b1, PointIndex a2, PointIndex b2) const;

    /// The product as a finite MetricSpace with ids "left|right".
    MetricSpace flatten() const;

private:
    std::shared_ptr<const MetricSpace> left_;
    std::shared_ptr<const MetricSpace> right_;
};

/// Dyadic rationals of [0, 1] in the order 0, 1, 1/2, 1/4, 3/4, 1/8, ... under |a - b|.
MetricSpace dyadic_unit_interval();

/// Points on the real line with the given rational coordinates, ids "p0", "p1", ...
MetricSpace line_space(const std::vector<Rational>& coordinates);

}  // namespace sepdet
