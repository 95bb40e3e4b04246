#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "cplab/errors.hpp"

namespace cplab {

// Linear-interpolation quantile (R type 7) of an unsorted sample.
inline double quantile(std::vector<double> values, double level) {
    if (values.empty()) throw ConfigError("quantile: empty sample");
    if (!(level >= 0.0 && level <= 1.0)) throw ConfigError("quantile: level outside [0,1]");
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * level;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, values.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

inline double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

} // namespace cplab
