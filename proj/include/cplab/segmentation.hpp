#pragma once

#include <optional>
#include <vector>

#include "cplab/solvers.hpp"
#include "cplab/types.hpp"

namespace cplab {

struct SegmentationConfig {
    long k = 0; // number of changepoints to place
    std::optional<long> min_segment_length;
    std::optional<double> spacing_exponent; // u; min length defaults to ceil(n^u)
    PenaltySpec penalty;
    SolverSettings solver;

    // Explicit value if set, else ceil(n^u) when u is supplied, else 2p.
    long resolved_min_length(long n, long p) const;
    void validate(long n, long p) const;
};

// S(l_1,...,l_k): sum over segments of the minimized penalized residual sum.
double total_penalized_sum(const Dataset& data, const std::vector<long>& changepoints,
                           const SegmentationConfig& config);

// Exact minimizer of the penalized sum over changepoint configurations with k
// known, by dynamic programming over (segments remaining, start index) with
// memoized per-window costs.  Ties broken toward the lexicographically
// smallest changepoint vector.
Segmentation fit_known_k(const Dataset& data, const SegmentationConfig& config);

// Brute-force enumeration of every feasible changepoint tuple; same tie-break
// as fit_known_k.  Refuses n above the guard bound.
Segmentation exhaustive_oracle(const Dataset& data, const SegmentationConfig& config,
                               long guard_bound = 60);

// All strictly increasing k-tuples of cuts feasible under the minimum segment
// length, in lexicographic order.
std::vector<std::vector<long>> feasible_changepoint_tuples(long n, long k, long min_len);

} // namespace cplab
