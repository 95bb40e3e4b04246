#include "cplab/segmentation.hpp"

#include "cplab/numeric.hpp"
#include "cplab/segments.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <utility>

namespace cplab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Lazily solved per-window penalized fits, keyed by 0-based half-open row
// window [a, b).  Thread-safe; the first writer of a key wins.
class SegmentCostCache {
public:
    SegmentCostCache(const Dataset& data, const PenaltySpec& penalty,
                     const SolverSettings& solver)
        : data_(data), penalty_(penalty), solver_(solver) {}

    const std::pair<SegmentFit, double>& get(long a, long b) {
        const std::pair<long, long> key{a, b};
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = memo_.find(key);
            if (it != memo_.end()) return it->second;
        }
        auto fit = segment_cost(data_.x.middleRows(a, b - a), data_.y.segment(a, b - a),
                                penalty_, solver_);
        std::lock_guard<std::mutex> lock(mu_);
        return memo_.emplace(key, std::move(fit)).first->second;
    }

private:
    const Dataset& data_;
    const PenaltySpec& penalty_;
    const SolverSettings& solver_;
    std::map<std::pair<long, long>, std::pair<SegmentFit, double>> memo_;
    std::mutex mu_;
};

Segmentation assemble(SegmentCostCache& cache, const std::vector<long>& cuts, long n) {
    Segmentation seg;
    seg.changepoints = cuts;
    long start = 0;
    double total = 0.0;
    for (std::size_t r = 0; r <= cuts.size(); ++r) {
        const long end = r < cuts.size() ? cuts[r] : n;
        const auto& [fit, value] = cache.get(start, end);
        seg.fits.push_back(fit);
        total += value;
        start = end;
    }
    seg.total_s = total;
    return seg;
}

} // namespace

long SegmentationConfig::resolved_min_length(long n, long p) const {
    if (min_segment_length) return *min_segment_length;
    if (spacing_exponent) return power_ceil(n, *spacing_exponent);
    return 2 * p;
}

void SegmentationConfig::validate(long n, long p) const {
    if (k < 0) throw ConfigError("SegmentationConfig: k must be nonnegative");
    penalty.validate();
    solver.validate();
    const long min_len = resolved_min_length(n, p);
    if (min_len < 1) throw ConfigError("SegmentationConfig: min_segment_length must be >= 1");
    if ((k + 1) * min_len > n)
        throw ConfigError("SegmentationConfig: infeasible, (k+1)*min_segment_length = " +
                          std::to_string((k + 1) * min_len) + " exceeds n = " +
                          std::to_string(n));
}

double total_penalized_sum(const Dataset& data, const std::vector<long>& changepoints,
                           const SegmentationConfig& config) {
    data.validate();
    config.validate(data.n(), data.p());
    const long min_len = config.resolved_min_length(data.n(), data.p());
    const auto bounds = segment_bounds(changepoints, data.n());
    for (const auto& b : bounds) {
        if (b.length() < min_len)
            throw ConfigError("total_penalized_sum: segment [" + std::to_string(b.start) + "," +
                              std::to_string(b.end) + "] shorter than minimum " +
                              std::to_string(min_len));
    }
    double total = 0.0;
    for (const auto& b : bounds) {
        const long a = b.start - 1;
        total += segment_cost(data.x.middleRows(a, b.length()), data.y.segment(a, b.length()),
                              config.penalty, config.solver)
                     .second;
    }
    return total;
}

Segmentation fit_known_k(const Dataset& data, const SegmentationConfig& config) {
    data.validate();
    const long n = data.n();
    config.validate(n, data.p());
    const long k = config.k;
    const long min_len = config.resolved_min_length(n, data.p());

    SegmentCostCache cache(data, config.penalty, config.solver);

    // Suffix dynamic program: best[s][b] is the minimal cost of covering rows
    // [b, n) with s segments.  Reconstruction walks left to right choosing
    // the smallest optimal cut each time, which yields the lexicographically
    // smallest optimal changepoint vector.
    std::vector<std::vector<double>> best(static_cast<std::size_t>(k) + 2,
                                          std::vector<double>(static_cast<std::size_t>(n) + 1, kInf));
    std::vector<std::vector<long>> choice(static_cast<std::size_t>(k) + 2,
                                          std::vector<long>(static_cast<std::size_t>(n) + 1, -1));

    for (long b = 0; b + min_len <= n; ++b) best[1][b] = cache.get(b, n).second;
    for (long s = 2; s <= k + 1; ++s) {
        for (long b = 0; b + s * min_len <= n; ++b) {
            double lo = kInf;
            long arg = -1;
            for (long c = b + min_len; c + (s - 1) * min_len <= n; ++c) {
                const double cand = cache.get(b, c).second + best[s - 1][c];
                if (cand < lo) {
                    lo = cand;
                    arg = c;
                }
            }
            best[s][b] = lo;
            choice[s][b] = arg;
        }
    }

    std::vector<long> cuts;
    long b = 0;
    for (long s = k + 1; s >= 2; --s) {
        b = choice[s][b];
        cuts.push_back(b);
    }
    return assemble(cache, cuts, n);
}

std::vector<std::vector<long>> feasible_changepoint_tuples(long n, long k, long min_len) {
    std::vector<std::vector<long>> out;
    std::vector<long> current;
    auto recurse = [&](auto&& self, long start, long remaining) -> void {
        if (remaining == 0) {
            out.push_back(current);
            return;
        }
        for (long c = start + min_len; c + remaining * min_len <= n; ++c) {
            current.push_back(c);
            self(self, c, remaining - 1);
            current.pop_back();
        }
    };
    if ((k + 1) * min_len <= n) recurse(recurse, 0, k);
    return out;
}

Segmentation exhaustive_oracle(const Dataset& data, const SegmentationConfig& config,
                               long guard_bound) {
    data.validate();
    const long n = data.n();
    if (n > guard_bound)
        throw GuardError("exhaustive_oracle: n = " + std::to_string(n) +
                         " exceeds guard bound " + std::to_string(guard_bound));
    config.validate(n, data.p());
    const long min_len = config.resolved_min_length(n, data.p());

    SegmentCostCache cache(data, config.penalty, config.solver);
    double best_total = kInf;
    std::vector<long> best_cuts;
    bool found = false;
    for (const auto& cuts : feasible_changepoint_tuples(n, config.k, min_len)) {
        double total = 0.0;
        long start = 0;
        for (std::size_t r = 0; r <= cuts.size(); ++r) {
            const long end = r < cuts.size() ? cuts[r] : n;
            total += cache.get(start, end).second;
            start = end;
        }
        if (!found || total < best_total) { // lexicographic enumeration: first optimum kept
            best_total = total;
            best_cuts = cuts;
            found = true;
        }
    }
    return assemble(cache, best_cuts, n);
}

} // namespace cplab
