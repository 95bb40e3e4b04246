#pragma once

#include <vector>

#include <Eigen/Core>

#include "cplab/types.hpp"

namespace cplab {

// 1-based inclusive index range [start, end].
struct IndexRange {
    long start = 0;
    long end = 0;

    long length() const { return end - start + 1; }
    bool operator==(const IndexRange&) const = default;
};

// Splits 1..n into segments at the given cut indices.  Segment r covers
// l_{r-1}+1 .. l_r with l_0 = 0 and l_{K+1} = n, so a changepoint is the
// last index of the segment it closes.
std::vector<IndexRange> segment_bounds(const std::vector<long>& changepoints, long n);

struct SegmentGram {
    Eigen::MatrixXd c; // (1/len) * sum_i x_i x_i' over the segment
    double eig_min = 0.0;
    double eig_max = 0.0;
};

struct AssumptionDiagnostics {
    double max_row_norm_over_n = 0.0; // n^{-1} max_i x_i'x_i
    std::vector<SegmentGram> grams;   // one per segment
};

// Empirical checks behind the design assumptions: the normalized maximal row
// norm and the per-segment length-normalized Gram matrices with their extreme
// eigenvalues.
AssumptionDiagnostics assumption_diagnostics(const Dataset& data,
                                             const std::vector<long>& changepoints);

} // namespace cplab
