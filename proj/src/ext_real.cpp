#include "sepdet/ext_real.hpp"

#include <cassert>
#include <charconv>

namespace sepdet {

std::string ExtReal::to_string() const {
    if (is_plus_infinity()) return "+inf";
    if (is_minus_infinity()) return "-inf";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value_);
    return std::string(buf, end);
}

ExtReal difference(ExtReal a, ExtReal b) {
    if (!a.is_finite() && a == b) return 0.0;
    return a.value() - b.value();
}

ExtReal positive_part(ExtReal s) { return s.value() <= 0.0 ? ExtReal(0.0) : s; }

ExtReal magnitude(ExtReal s) { return std::fabs(s.value()); }

ExtReal divide(ExtReal s, double d) {
    assert(d > 0.0 && std::isfinite(d));
    return s.value() / d;
}

}  // namespace sepdet
