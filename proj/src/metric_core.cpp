#include "sepdet/metric_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sepdet/error.hpp"

namespace sepdet {

namespace {

std::string describe(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void require_positive_radius(double r) {
    if (!(r > 0.0)) throw Error(ErrorKind::NonPositiveRadius, "radius " + describe(r) + " is not positive");
}

}  // namespace

MetricSpace MetricSpace::from_matrix(std::vector<Point> points, const std::vector<std::vector<double>>& matrix,
                                     double tolerance) {
    const std::size_t n = points.size();
    if (matrix.size() != n)
        throw Error(ErrorKind::BadDescriptor, "matrix has " + std::to_string(matrix.size()) + " rows for " +
                                                  std::to_string(n) + " points");
    MetricSpace space;
    space.kind_ = SpaceKind::finite;
    space.name_ = "matrix";
    space.points_ = std::move(points);
    space.matrix_.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        if (matrix[i].size() != n)
            throw Error(ErrorKind::BadDescriptor, "matrix row " + std::to_string(i) + " has " +
                                                      std::to_string(matrix[i].size()) + " entries");
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::isfinite(matrix[i][j]))
                throw Error(ErrorKind::MetricAxiomViolation, "distance (" + space.points_[i].id + ", " +
                                                                 space.points_[j].id + ") is not finite");
            space.matrix_[i * n + j] = matrix[i][j];
        }
    }
    space.index_ids();
    validate_metric(space, tolerance);
    return space;
}

double euclidean_distance(const Point& a, const Point& b) {
    if (!a.coords || !b.coords) throw Error(ErrorKind::NoCoordinates, "point without coordinates");
    if (a.coords->size() != b.coords->size())
        throw Error(ErrorKind::BadDescriptor, "dimension mismatch between " + a.id + " and " + b.id);
    Rational sum = 0;
    for (std::size_t k = 0; k < a.coords->size(); ++k) {
        Rational diff = (*a.coords)[k] - (*b.coords)[k];
        sum += diff * diff;
    }
    return std::sqrt(sum.convert_to<double>());
}

MetricSpace MetricSpace::euclidean(std::vector<Point> points) {
    const std::size_t n = points.size();
    for (const auto& p : points)
        if (!p.coords) throw Error(ErrorKind::NoCoordinates, "point " + p.id + " has no coordinates");
    MetricSpace space;
    space.kind_ = SpaceKind::finite;
    space.name_ = "euclidean";
    space.points_ = std::move(points);
    space.matrix_.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double d = euclidean_distance(space.points_[i], space.points_[j]);
            space.matrix_[i * n + j] = d;
            space.matrix_[j * n + i] = d;
        }
    space.index_ids();
    validate_metric(space);
    return space;
}

MetricSpace MetricSpace::lazy(std::string name, Enumerator enumerate, Oracle distance) {
    MetricSpace space;
    space.kind_ = SpaceKind::lazy;
    space.name_ = std::move(name);
    space.enumerate_ = std::move(enumerate);
    space.oracle_ = std::move(distance);
    return space;
}

void MetricSpace::index_ids() {
    by_id_.clear();
    for (PointIndex i = 0; i < points_.size(); ++i) {
        auto [it, inserted] = by_id_.emplace(points_[i].id, i);
        if (!inserted) throw Error(ErrorKind::BadDescriptor, "duplicate point id " + points_[i].id);
    }
}

std::size_t MetricSpace::size() const {
    if (!is_finite()) throw Error(ErrorKind::BudgetRequired, "lazy space " + name_ + " has no finite size");
    return points_.size();
}

const Point& MetricSpace::point(PointIndex i) const {
    if (!is_finite()) throw Error(ErrorKind::BudgetRequired, "lazy space points are enumerated, not stored");
    if (i >= points_.size()) throw Error(ErrorKind::UnknownPoint, "index " + std::to_string(i));
    return points_[i];
}

const std::vector<Point>& MetricSpace::points() const {
    if (!is_finite()) throw Error(ErrorKind::BudgetRequired, "lazy space points are enumerated, not stored");
    return points_;
}

Point MetricSpace::enumerate(std::size_t i) const { return is_finite() ? point(i) : enumerate_(i); }

PointIndex MetricSpace::index_of(std::string_view id) const {
    if (!is_finite()) throw Error(ErrorKind::BudgetRequired, "lookup by id needs a materialized space");
    auto it = by_id_.find(std::string(id));
    if (it == by_id_.end()) throw Error(ErrorKind::UnknownPoint, "no point with id '" + std::string(id) + "'");
    return it->second;
}

bool MetricSpace::contains(std::string_view id) const {
    return is_finite() && by_id_.contains(std::string(id));
}

double MetricSpace::distance(PointIndex a, PointIndex b) const {
    if (is_finite()) {
        const std::size_t n = points_.size();
        if (a >= n || b >= n) throw Error(ErrorKind::UnknownPoint, "index out of range");
        return matrix_[a * n + b];
    }
    return oracle_(enumerate_(a), enumerate_(b));
}

std::span<const double> MetricSpace::row(PointIndex x) const {
    const std::size_t n = size();
    if (x >= n) throw Error(ErrorKind::UnknownPoint, "index out of range");
    return {matrix_.data() + x * n, n};
}

double MetricSpace::diameter() const {
    if (!is_finite()) throw Error(ErrorKind::BudgetRequired, "diameter of a lazy space");
    double best = 0.0;
    for (double d : matrix_) best = std::max(best, d);
    return best;
}

std::vector<double> MetricSpace::distinct_distances_from(PointIndex x) const {
    std::vector<double> out;
    for (double d : row(x))
        if (d > 0.0) out.push_back(d);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

MetricSpace MetricSpace::materialize(std::size_t budget) const {
    if (is_finite()) {
        const std::size_t m = std::min(budget, points_.size());
        std::vector<Point> pts(points_.begin(), points_.begin() + static_cast<std::ptrdiff_t>(m));
        std::vector<std::vector<double>> mat(m, std::vector<double>(m));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) mat[i][j] = distance(i, j);
        auto out = from_matrix(std::move(pts), mat);
        out.name_ = name_;
        return out;
    }
    std::vector<Point> pts;
    pts.reserve(budget);
    for (std::size_t i = 0; i < budget; ++i) pts.push_back(enumerate_(i));
    std::vector<std::vector<double>> mat(budget, std::vector<double>(budget));
    for (std::size_t i = 0; i < budget; ++i)
        for (std::size_t j = 0; j < budget; ++j) mat[i][j] = i == j ? 0.0 : oracle_(pts[i], pts[j]);
    auto out = from_matrix(std::move(pts), mat);
    out.name_ = name_;
    return out;
}

std::size_t MetricSpace::scan_limit(std::optional<std::size_t> budget) const {
    if (is_finite()) return budget ? std::min(*budget, points_.size()) : points_.size();
    if (!budget) throw Error(ErrorKind::BudgetRequired, "region scans over lazy space " + name_ + " need a budget");
    return *budget;
}

void validate_metric(const MetricSpace& space, double tolerance) {
    const std::size_t n = space.size();
    const auto& pts = space.points();
    auto pair_name = [&](std::size_t i, std::size_t j) { return "(" + pts[i].id + ", " + pts[j].id + ")"; };
    for (std::size_t i = 0; i < n; ++i) {
        if (std::fabs(space.distance(i, i)) > tolerance)
            throw Error(ErrorKind::MetricAxiomViolation, "nonzero self-distance at " + pts[i].id);
        for (std::size_t j = 0; j < n; ++j) {
            const double dij = space.distance(i, j);
            if (dij < -tolerance)
                throw Error(ErrorKind::MetricAxiomViolation, "negative distance " + pair_name(i, j));
            if (std::fabs(dij - space.distance(j, i)) > tolerance)
                throw Error(ErrorKind::MetricAxiomViolation, "asymmetric distance " + pair_name(i, j));
            if (i != j && dij <= tolerance)
                throw Error(ErrorKind::MetricAxiomViolation, "distinct points at distance zero " + pair_name(i, j));
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                if (space.distance(i, k) > space.distance(i, j) + space.distance(j, k) + tolerance)
                    throw Error(ErrorKind::MetricAxiomViolation, "triangle inequality fails for (" + pts[i].id +
                                                                     ", " + pts[j].id + ", " + pts[k].id + ")");
}

Region::Region(std::size_t arity) : arity_(arity) {}

void Region::push_back(std::span<const PointIndex> tuple) {
    if (tuple.size() != arity_) throw Error(ErrorKind::BadDescriptor, "tuple arity mismatch");
    flat_.insert(flat_.end(), tuple.begin(), tuple.end());
}

void Region::push_back(std::initializer_list<PointIndex> tuple) {
    push_back(std::span<const PointIndex>(tuple.begin(), tuple.size()));
}

double distance(const MetricSpace& space, std::string_view a, std::string_view b) {
    return space.distance(space.index_of(a), space.index_of(b));
}

std::vector<PointIndex> ball_points(const MetricSpace& space, PointIndex x, double r, std::optional<std::size_t> budget) {
    require_positive_radius(r);
    const std::size_t limit = space.scan_limit(budget);
    std::vector<PointIndex> out;
    for (PointIndex u = 0; u < limit; ++u)
        if (space.distance(x, u) < r) out.push_back(u);
    return out;
}

std::vector<PointIndex> torus_points(const MetricSpace& space, PointIndex x, double r, double s,
                                     std::optional<std::size_t> budget) {
    if (!(r > 0.0 && r < s))
        throw Error(ErrorKind::BadShell, "shell (" + describe(r) + ", " + describe(s) + ") violates 0 < r < s");
    const std::size_t limit = space.scan_limit(budget);
    std::vector<PointIndex> out;
    for (PointIndex u = 0; u < limit; ++u) {
        const double d = space.distance(x, u);
        if (r < d && d < s) out.push_back(u);
    }
    return out;
}

Region ball_pairs(const MetricSpace& space, PointIndex x, double r, std::optional<std::size_t> budget) {
    const auto ball = ball_points(space, x, r, budget);
    Region out(2);
    for (PointIndex a : ball)
        for (PointIndex b : ball)
            if (a != b) out.push_back({a, b});
    return out;
}

PointSet::PointSet(std::size_t universe, std::vector<PointIndex> members)
    : members_(std::move(members)), mask_(universe, false) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    for (PointIndex u : members_) {
        if (u >= universe) throw Error(ErrorKind::UnknownPoint, "index " + std::to_string(u) + " outside the space");
        mask_[u] = true;
    }
}

PointSet PointSet::all(std::size_t universe) {
    std::vector<PointIndex> members(universe);
    for (PointIndex i = 0; i < universe; ++i) members[i] = i;
    return PointSet(universe, std::move(members));
}

bool PointSet::includes(const PointSet& other) const {
    return std::all_of(other.begin(), other.end(), [&](PointIndex u) { return contains(u); });
}

PointSet PointSet::united(const PointSet& other) const {
    std::vector<PointIndex> merged = members_;
    merged.insert(merged.end(), other.begin(), other.end());
    return PointSet(std::max(universe(), other.universe()), std::move(merged));
}

PointSet PointSet::with(std::span<const PointIndex> extra) const {
    std::vector<PointIndex> merged = members_;
    merged.insert(merged.end(), extra.begin(), extra.end());
    return PointSet(universe(), std::move(merged));
}

ProductSpace::ProductSpace(std::shared_ptr<const MetricSpace> left, std::shared_ptr<const MetricSpace> right)
    : left_(std::move(left)), right_(std::move(right)) {
    if (!left_->is_finite() || !right_->is_finite())
        throw Error(ErrorKind::BudgetRequired, "products are built from finite factors");
}

double ProductSpace::distance(PointIndex a1, PointIndex b1, PointIndex a2, PointIndex b2) const {
    return std::max(left_->distance(a1, a2), right_->distance(b1, b2));
}

MetricSpace ProductSpace::flatten() const {
    const std::size_t n = size();
    std::vector<Point> pts;
    pts.reserve(n);
    for (PointIndex p = 0; p < n; ++p) {
        auto [a, b] = unpack(p);
        pts.push_back(Point{left_->point(a).id + "|" + right_->point(b).id, std::nullopt});
    }
    std::vector<std::vector<double>> mat(n, std::vector<double>(n));
    for (PointIndex p = 0; p < n; ++p)
        for (PointIndex q = 0; q < n; ++q) {
            auto [a1, b1] = unpack(p);
            auto [a2, b2] = unpack(q);
            mat[p][q] = distance(a1, b1, a2, b2);
        }
    return MetricSpace::from_matrix(std::move(pts), mat);
}

MetricSpace dyadic_unit_interval() {
    auto enumerate = [](std::size_t i) {
        Rational value;
        if (i == 0) {
            value = 0;
        } else if (i == 1) {
            value = 1;
        } else {
            // level m holds the odd numerators k/2^m, k = 1, 3, ..., 2^m - 1
            std::size_t m = 1, first = 2;
            while (i >= first + (std::size_t{1} << (m - 1))) {
                first += std::size_t{1} << (m - 1);
                ++m;
            }
            const std::size_t k = 2 * (i - first) + 1;
            value = Rational(static_cast<long long>(k), static_cast<long long>(std::size_t{1} << m));
        }
        std::ostringstream id;
        id << value;
        return Point{id.str(), std::vector<Rational>{value}};
    };
    return MetricSpace::lazy("dyadic-unit-interval", enumerate,
                             [](const Point& a, const Point& b) { return euclidean_distance(a, b); });
}

MetricSpace line_space(const std::vector<Rational>& coordinates) {
    std::vector<Point> pts;
    pts.reserve(coordinates.size());
    for (std::size_t i = 0; i < coordinates.size(); ++i)
        pts.push_back(Point{"p" + std::to_string(i), std::vector<Rational>{coordinates[i]}});
    return MetricSpace::euclidean(std::move(pts));
}

}  // namespace sepdet
