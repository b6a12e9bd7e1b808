#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <string>

namespace sepdet {

/// A value of R ∪ {+inf, -inf}. NaN is never stored.
class ExtReal {
public:
    constexpr ExtReal() = default;
    constexpr ExtReal(double v) : value_(v) {}  // NOLINT: implicit from finite reals is intended

    static constexpr ExtReal plus_infinity() { return ExtReal(std::numeric_limits<double>::infinity()); }
    static constexpr ExtReal minus_infinity() { return ExtReal(-std::numeric_limits<double>::infinity()); }

    constexpr double value() const { return value_; }
    bool is_finite() const { return std::isfinite(value_); }
    constexpr bool is_plus_infinity() const { return value_ == std::numeric_limits<double>::infinity(); }
    constexpr bool is_minus_infinity() const { return value_ == -std::numeric_limits<double>::infinity(); }

    constexpr ExtReal operator-() const { return ExtReal(-value_); }

    friend constexpr bool operator==(ExtReal a, ExtReal b) { return a.value_ == b.value_; }
    friend constexpr std::partial_ordering operator<=>(ExtReal a, ExtReal b) { return a.value_ <=> b.value_; }

    /// "+inf", "-inf" or the shortest round-tripping decimal.
    std::string to_string() const;

private:
    double value_ = 0.0;
};

/// a - b with the convention (+inf) - (+inf) = 0 (and likewise for -inf).
ExtReal difference(ExtReal a, ExtReal b);

/// s+ : 0 when s <= 0, s otherwise.
ExtReal positive_part(ExtReal s);

/// |s|
ExtReal magnitude(ExtReal s);

/// s / d for a strictly positive finite divisor.
ExtReal divide(ExtReal s, double d);

}  // namespace sepdet
