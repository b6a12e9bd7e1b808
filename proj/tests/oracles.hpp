#pragma once

// Independent reference computations for the tests. They work from plain
// loops over point indices and closed forms valid on finite spaces, and
// share nothing with the library beyond the distance matrix.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "sepdet/metric_core.hpp"

namespace oracle {

using sepdet::MetricSpace;
using sepdet::PointIndex;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline std::vector<PointIndex> everything(const MetricSpace& space) {
    std::vector<PointIndex> out(space.size());
    for (PointIndex i = 0; i < out.size(); ++i) out[i] = i;
    return out;
}

/// |a - b| / d with inf - inf = 0.
inline double pair_quotient(double a, double b, double d) {
    if (std::isinf(a) && std::isinf(b) && (a > 0) == (b > 0)) return 0.0;
    return std::fabs(a - b) / d;
}

/// (t - fu)+ / d with inf - inf = 0.
inline double descent(double t, double fu, double d) {
    if (std::isinf(t) && std::isinf(fu) && (t > 0) == (fu > 0)) return 0.0;
    const double s = t - fu;
    return s > 0 ? s / d : 0.0;
}

/// Points of `pool` other than x at the least distance from x.
inline std::vector<PointIndex> nearest(const MetricSpace& space, PointIndex x, const std::vector<PointIndex>& pool) {
    double best = kInf;
    for (PointIndex u : pool)
        if (u != x) best = std::min(best, space.distance(x, u));
    std::vector<PointIndex> out;
    for (PointIndex u : pool)
        if (u != x && space.distance(x, u) == best) out.push_back(u);
    return out;
}

/// Sup (or inf) of |f(u1) - f(u2)| / d(u1, u2) over distinct u1, u2 of pool within B(x, r); nan when no pair.
inline double pair_optimum(const MetricSpace& space, const std::vector<double>& f, PointIndex x, double r,
                           const std::vector<PointIndex>& pool, bool sup) {
    double out = std::nan("");
    for (PointIndex a : pool)
        for (PointIndex b : pool) {
            if (a == b || space.distance(x, a) >= r || space.distance(x, b) >= r) continue;
            const double q = pair_quotient(f[a], f[b], space.distance(a, b));
            if (std::isnan(out) || (sup ? q > out : q < out)) out = q;
        }
    return out;
}

/// Sup (or inf) of f over the punctured ball; nan when empty.
inline double ball_optimum(const MetricSpace& space, const std::vector<double>& f, PointIndex x, double r,
                           const std::vector<PointIndex>& pool, bool sup) {
    double out = std::nan("");
    for (PointIndex u : pool) {
        if (u == x || space.distance(x, u) >= r) continue;
        if (std::isnan(out) || (sup ? f[u] > out : f[u] < out)) out = f[u];
    }
    return out;
}

/// Sup (or inf) of (t - f(u))+ / d(x, u) over the torus; nan when empty.
inline double torus_optimum(const MetricSpace& space, const std::vector<double>& f, PointIndex x, double t, double r,
                            double s, const std::vector<PointIndex>& pool, bool sup) {
    double out = std::nan("");
    for (PointIndex u : pool) {
        const double d = space.distance(x, u);
        if (!(r < d && d < s)) continue;
        const double q = descent(t, f[u], d);
        if (std::isnan(out) || (sup ? q > out : q < out)) out = q;
    }
    return out;
}

// On a finite space the realizing grid's smallest ball (or shell family) holds
// exactly x and its nearest neighbours, and every grid formula collapses to it.

/// Grid slope: max over the nearest points of (f(x) - f(u))+ / d.
inline double slope(const MetricSpace& space, const std::vector<double>& f, PointIndex x,
                    const std::vector<PointIndex>& pool) {
    double out = 0.0;
    for (PointIndex u : nearest(space, x, pool)) out = std::max(out, descent(f[x], f[u], space.distance(x, u)));
    return out;
}

/// Grid Lipschitz modulus: max pair quotient inside {x} ∪ nearest points.
inline double lip_modulus(const MetricSpace& space, const std::vector<double>& f, PointIndex x,
                          const std::vector<PointIndex>& pool) {
    auto ball = nearest(space, x, pool);
    if (std::find(pool.begin(), pool.end(), x) != pool.end()) ball.push_back(x);
    double out = 0.0;
    for (PointIndex a : ball)
        for (PointIndex b : ball)
            if (a != b) out = std::max(out, pair_quotient(f[a], f[b], space.distance(a, b)));
    return out;
}

/// Grid liminf and limsup: min and max of f over the nearest points.
inline double liminf(const MetricSpace& space, const std::vector<double>& f, PointIndex x,
                     const std::vector<PointIndex>& pool) {
    double out = kInf;
    for (PointIndex u : nearest(space, x, pool)) out = std::min(out, f[u]);
    return out;
}

inline double limsup(const MetricSpace& space, const std::vector<double>& f, PointIndex x,
                     const std::vector<PointIndex>& pool) {
    double out = -kInf;
    for (PointIndex u : nearest(space, x, pool)) out = std::max(out, f[u]);
    return out;
}

}  // namespace oracle
