#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "cplab/errors.hpp"

namespace cplab {

// An observed sample: row i of x is the regressor vector paired with y(i).
struct Dataset {
    Eigen::MatrixXd x;
    Eigen::VectorXd y;

    long n() const { return x.rows(); }
    long p() const { return x.cols(); }
    void validate() const;
};

// True piecewise model: K changepoints and K+1 segment coefficient vectors.
// Segment r covers indices l_{r-1}+1 .. l_r (1-based), with l_0 = 0 and
// l_{K+1} = n.  Spacing must respect length >= c0 * ceil(n^u).
struct TrueModel {
    std::vector<Eigen::VectorXd> phis;
    std::vector<long> changepoints;
    double u = 0.8;
    double c0 = 1.0;

    long k() const { return static_cast<long>(changepoints.size()); }
    void validate(long n) const;
};

// Bridge penalty spec: exponent gamma and the tuning scale c.  The tuning
// parameter for a segment of length m is lambda = scale_c * sqrt(m).
struct PenaltySpec {
    double gamma = 1.0;
    double scale_c = 1.0;

    double lambda(long m) const { return scale_c * std::sqrt(static_cast<double>(m)); }
    void validate() const;
};

// Result of one per-segment penalized solve.
struct SegmentFit {
    Eigen::VectorXd phi_hat;
    double rss = 0.0;
    double penalty_value = 0.0;
    double objective = 0.0;
    bool converged = false;
    long iterations = 0;

    void validate() const;
};

// A full segmentation: estimated changepoints, per-segment fits, total
// penalized sum over segments.
struct Segmentation {
    std::vector<long> changepoints;
    std::vector<SegmentFit> fits;
    double total_s = 0.0;

    void validate(long min_segment_length, long n) const;
};

enum class NoiseKind { gaussian, laplace, student_t };

// Error distribution: mean 0, variance sigma^2, absolutely continuous.
struct NoiseSpec {
    NoiseKind kind = NoiseKind::gaussian;
    double sigma = 1.0;
    int student_df = 5; // only for student_t; must exceed 2

    void validate() const;
};

} // namespace cplab
