#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cplab/simulation.hpp"
#include "cplab/solvers.hpp"
#include "cplab/types.hpp"

namespace cplab {

struct LemmaRunConfig {
    TwoSegmentSpec spec; // template; n is replaced by each grid value
    DesignSpec design;   // kind and p; rows are managed per run
    NoiseSpec noise;
    std::vector<long> n_grid;
    long replications = 200;
    PenaltySpec penalty;
    SolverSettings solver;
    std::uint64_t master_seed = 1;
    std::vector<double> quantile_levels = {0.5, 0.9, 0.95};

    void validate() const;
};

struct SummaryRow {
    long n = 0;
    long n1 = 0;
    long n2 = 0;
    long replications = 0;
    double bound = 0.0; // n^{-(u-v-delta)/2}
    double satisfaction_fraction = 0.0;
    std::vector<double> err_quantiles; // ||phi_hat - phi1||, per quantile level
    std::vector<double> zs_quantiles;  // |z_n^s(phi_hat)|, per quantile level

    bool operator==(const SummaryRow&) const = default;
};

struct ExperimentSummary {
    std::vector<double> quantile_levels;
    std::vector<SummaryRow> rows;

    bool operator==(const ExperimentSummary&) const = default;
    void validate() const;
};

// A^s(phi): pooled two-segment contrast against the per-segment truths, with
// per-block tuning lambda_(a,b) = scale_c * sqrt(b - a) multiplying the raw
// penalty difference.
double pooled_objective(const Dataset& data, long n1, const Eigen::VectorXd& phi,
                        const Eigen::VectorXd& phi1_0, const Eigen::VectorXd& phi2_0,
                        const PenaltySpec& penalty);

// argmin_phi A^s(phi).  A^s differs from the stacked penalized residual sum
// with total tuning lambda_(0,n1) + lambda_(n1,n1+n2) by a phi-free constant,
// so the stacked solve returns the same minimizer.
SegmentFit pooled_estimate(const Dataset& data, long n1, const Eigen::VectorXd& phi1_0,
                           const Eigen::VectorXd& phi2_0, const PenaltySpec& penalty,
                           const SolverSettings& settings);

// First-block contrast: sum over the prefix of (y - x'phi)^2 - (y - x'phi1_0)^2.
double z_n(const Dataset& prefix, const Eigen::VectorXd& phi, const Eigen::VectorXd& phi1_0);

// Second-block contrast, computed in residual form (y - x'phi)^2 -
// (y - x'phi1_0)^2 on the suffix; the error-form definition telescopes to
// the same sums, which is why phi2_0 only participates in shape checks.
double t_n(const Dataset& suffix, const Eigen::VectorXd& phi, const Eigen::VectorXd& phi1_0,
           const Eigen::VectorXd& phi2_0);

// Penalized variants: z_n/t_n plus lambda * sum_k(|phi_k|^gamma - |phi1_0,k|^gamma)
// with lambda = scale_c * sqrt(block length).  Both vanish at phi = phi1_0.
double z_n_s(const Dataset& prefix, const Eigen::VectorXd& phi, const Eigen::VectorXd& phi1_0,
             const PenaltySpec& penalty);
double t_n_s(const Dataset& suffix, const Eigen::VectorXd& phi, const Eigen::VectorXd& phi1_0,
             const Eigen::VectorXd& phi2_0, const PenaltySpec& penalty);

// (|a^2 - b^2|, (a - b)^2) at a = 2, b = 1: the 3 > 1 witness refuting the
// inequality |a^2 - b^2| <= (a - b)^2.
std::pair<double, double> check_counterexample();
std::pair<double, double> square_gap_probe(double a, double b);

// Grid scan for violating (a, b) pairs with |a^2 - b^2| > (a - b)^2.
std::vector<std::pair<double, double>> scan_square_gap_violations(double lo, double hi,
                                                                  double step);

Dataset head_rows(const Dataset& data, long m);
Dataset tail_rows(const Dataset& data, long m);

// Monte Carlo check of the estimation-error bound: per n and replication,
// simulate, fit the pooled estimator, and record whether ||phi_hat - phi1||
// stays within n^{-(u-v-delta)/2}.
ExperimentSummary run_rate_experiment(const LemmaRunConfig& config);

// Monte Carlo check that |z_n^s(phi_hat)| stays bounded across the n grid.
ExperimentSummary run_boundedness_experiment(const LemmaRunConfig& config);

} // namespace cplab
