#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "cplab/numeric.hpp"
#include "cplab/types.hpp"

namespace cplab {

enum class DesignKind { iid_gaussian, bounded_uniform, fixed_matrix };

// Regressor generator.  Random kinds produce unit-variance entries so the
// normalized max row norm vanishes as n grows.
struct DesignSpec {
    DesignKind kind = DesignKind::iid_gaussian;
    long p = 1;
    long n = 0; // rows to generate; ignored for fixed_matrix
    std::optional<Eigen::MatrixXd> fixed;

    long rows() const { return kind == DesignKind::fixed_matrix ? fixed->rows() : n; }
    long cols() const { return kind == DesignKind::fixed_matrix ? fixed->cols() : p; }
    void validate() const;
};

enum class AlternativeKind { local, fixed };

// Two-segment design: n is the rate parameter, n1 = ceil(n^u) long clean rows
// followed by n2 = floor(n^v) contaminated rows.  Under the local alternative
// phi2 = phi1 + phi3 * n^{-1/4}.
struct TwoSegmentSpec {
    long n = 1024;
    double u = 0.8;
    double v = 0.2;
    double delta = 0.05; // rate slack, must sit in (0, u - 3v)
    Eigen::VectorXd phi1;
    Eigen::VectorXd phi3;
    AlternativeKind alternative = AlternativeKind::local;
    std::optional<Eigen::VectorXd> fixed_phi2;

    long n1() const;
    long n2() const;
    Eigen::VectorXd resolved_phi2() const;
    double error_bound() const; // n^{-(u-v-delta)/2}
    void validate() const;
};

// i.i.d. draws with mean 0 and variance sigma^2; deterministic given seed.
Eigen::VectorXd gen_errors(long n, const NoiseSpec& noise, std::uint64_t seed);

Eigen::MatrixXd gen_design(const DesignSpec& design, std::uint64_t seed);

// y_i = x_i'phi_r + eps_i with r the segment of i.
Dataset simulate(const TrueModel& model, const DesignSpec& design, const NoiseSpec& noise,
                 std::uint64_t seed);

struct TwoSegmentData {
    Dataset data;
    Eigen::VectorXd phi2;
    long n1 = 0;
    long n2 = 0;
};

// Concatenated (n1 + n2)-row sample from the two-segment model.
TwoSegmentData make_two_segment(const TwoSegmentSpec& spec, const DesignSpec& design,
                                const NoiseSpec& noise, std::uint64_t seed);

} // namespace cplab
