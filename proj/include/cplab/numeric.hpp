#pragma once

#include <cmath>

namespace cplab {

// pow can land an ulp off an exactly representable power; snap so a
// subsequent ceil/floor is stable.
inline double snapped_pow(long n, double e) {
    const double v = std::pow(static_cast<double>(n), e);
    const double r = std::round(v);
    if (std::abs(v - r) < 1e-9 * std::max(1.0, std::abs(r))) return r;
    return v;
}

inline long power_ceil(long n, double e) { return static_cast<long>(std::ceil(snapped_pow(n, e))); }
inline long power_floor(long n, double e) { return static_cast<long>(std::floor(snapped_pow(n, e))); }

} // namespace cplab
