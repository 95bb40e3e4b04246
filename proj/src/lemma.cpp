#include "cplab/lemma.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cplab/parallel.hpp"
#include "cplab/rng.hpp"
#include "cplab/stats.hpp"

namespace cplab {

namespace {

void check_vector(const Eigen::VectorXd& v, long p, const char* name) {
    if (v.size() != p)
        throw ShapeError(std::string(name) + " has length " + std::to_string(v.size()) +
                         ", expected " + std::to_string(p));
}

// sum over rows of (y - x'phi)^2 - (y - x'ref)^2
double residual_contrast(const Dataset& block, const Eigen::VectorXd& phi,
                         const Eigen::VectorXd& ref) {
    double s = 0.0;
    for (long i = 0; i < block.n(); ++i) {
        const double ra = block.y[i] - block.x.row(i).dot(phi);
        const double rb = block.y[i] - block.x.row(i).dot(ref);
        s += ra * ra - rb * rb;
    }
    return s;
}

double penalty_contrast(const Eigen::VectorXd& phi, const Eigen::VectorXd& ref, double gamma) {
    return bridge_penalty(phi, gamma) - bridge_penalty(ref, gamma);
}

} // namespace

void LemmaRunConfig::validate() const {
    spec.validate();
    design.validate();
    noise.validate();
    penalty.validate();
    solver.validate();
    if (n_grid.empty()) throw ConfigError("LemmaRunConfig: n_grid must be nonempty");
    for (std::size_t i = 1; i < n_grid.size(); ++i)
        if (n_grid[i] <= n_grid[i - 1])
            throw ConfigError("LemmaRunConfig: n_grid must be strictly increasing");
    if (replications < 1) throw ConfigError("LemmaRunConfig: replications must be >= 1");
    for (double q : quantile_levels)
        if (!(q > 0.0 && q < 1.0))
            throw ConfigError("LemmaRunConfig: quantile levels must lie in (0, 1)");
}

void ExperimentSummary::validate() const {
    for (const auto& row : rows) {
        if (!(row.satisfaction_fraction >= 0.0 && row.satisfaction_fraction <= 1.0))
            throw ConfigError("ExperimentSummary: satisfaction fraction outside [0, 1]");
        if (row.err_quantiles.size() != quantile_levels.size() ||
            row.zs_quantiles.size() != quantile_levels.size())
            throw ShapeError("ExperimentSummary: quantile vectors must match levels");
        for (std::size_t i = 1; i < quantile_levels.size(); ++i) {
            if (quantile_levels[i] > quantile_levels[i - 1] &&
                (row.err_quantiles[i] < row.err_quantiles[i - 1] ||
                 row.zs_quantiles[i] < row.zs_quantiles[i - 1]))
                throw ConfigError("ExperimentSummary: quantiles decrease in level");
        }
    }
}

double z_n(const Dataset& prefix, const Eigen::VectorXd& phi, const Eigen::VectorXd& phi1_0) {
    check_vector(phi, prefix.p(), "phi");
    check_vector(phi1_0, prefix.p(), "phi1_0");
    return residual_contrast(prefix, phi, phi1_0);
}

double t_n(const Dataset& suffix, const Eigen::VectorXd& phi, const Eigen::VectorXd& phi1_0,
           const Eigen::VectorXd& phi2_0) {
    if (suffix.n() == 0) return 0.0;
    check_vector(phi, suffix.p(), "phi");
    check_vector(phi1_0, suffix.p(), "phi1_0");
    check_vector(phi2_0, suffix.p(), "phi2_0");
    return residual_contrast(suffix, phi, phi1_0);
}

double z_n_s(const Dataset& prefix, const Eigen::VectorXd& phi, const Eigen::VectorXd& phi1_0,
             const PenaltySpec& penalty) {
    penalty.validate();
    const double lambda = penalty.lambda(prefix.n());
    return z_n(prefix, phi, phi1_0) + lambda * penalty_contrast(phi, phi1_0, penalty.gamma);
}

double t_n_s(const Dataset& suffix, const Eigen::VectorXd& phi, const Eigen::VectorXd& phi1_0,
             const Eigen::VectorXd& phi2_0, const PenaltySpec& penalty) {
    penalty.validate();
    if (suffix.n() == 0) return 0.0;
    const double lambda = penalty.lambda(suffix.n());
    // penalty contrast is taken against phi1_0 here, not phi2_0
    return t_n(suffix, phi, phi1_0, phi2_0) +
           lambda * penalty_contrast(phi, phi1_0, penalty.gamma);
}

Dataset head_rows(const Dataset& data, long m) {
    if (m < 0 || m > data.n()) throw ShapeError("head_rows: m out of range");
    return {data.x.topRows(m), data.y.head(m)};
}

Dataset tail_rows(const Dataset& data, long m) {
    if (m < 0 || m > data.n()) throw ShapeError("tail_rows: m out of range");
    return {data.x.bottomRows(m), data.y.tail(m)};
}

double pooled_objective(const Dataset& data, long n1, const Eigen::VectorXd& phi,
                        const Eigen::VectorXd& phi1_0, const Eigen::VectorXd& phi2_0,
                        const PenaltySpec& penalty) {
    penalty.validate();
    if (n1 < 0 || n1 > data.n()) throw ShapeError("pooled_objective: n1 out of range");
    check_vector(phi, data.p(), "phi");
    check_vector(phi1_0, data.p(), "phi1_0");
    check_vector(phi2_0, data.p(), "phi2_0");
    const long n2 = data.n() - n1;
    const Dataset prefix = head_rows(data, n1);
    const Dataset suffix = tail_rows(data, n2);

    double total = residual_contrast(prefix, phi, phi1_0) +
                   penalty.lambda(n1) * penalty_contrast(phi, phi1_0, penalty.gamma);
    if (n2 > 0)
        total += residual_contrast(suffix, phi, phi2_0) +
                 penalty.lambda(n2) * penalty_contrast(phi, phi2_0, penalty.gamma);
    return total;
}

SegmentFit pooled_estimate(const Dataset& data, long n1, const Eigen::VectorXd& phi1_0,
                           const Eigen::VectorXd& phi2_0, const PenaltySpec& penalty,
                           const SolverSettings& settings) {
    penalty.validate();
    if (n1 < 0 || n1 > data.n()) throw ShapeError("pooled_estimate: n1 out of range");
    check_vector(phi1_0, data.p(), "phi1_0");
    check_vector(phi2_0, data.p(), "phi2_0");
    // A^s differs from ||y - X phi||^2 + (lambda1 + lambda2) sum|phi|^gamma by
    // a phi-free constant, so the stacked solve shares the argmin.
    const double total_lambda = penalty.lambda(n1) + penalty.lambda(data.n() - n1);
    return penalized_fit(data.x, data.y, penalty.gamma, total_lambda, settings);
}

std::pair<double, double> square_gap_probe(double a, double b) {
    return {std::abs(a * a - b * b), (a - b) * (a - b)};
}

std::pair<double, double> check_counterexample() { return square_gap_probe(2.0, 1.0); }

std::vector<std::pair<double, double>> scan_square_gap_violations(double lo, double hi,
                                                                  double step) {
    if (!(step > 0.0)) throw ConfigError("scan_square_gap_violations: step must be positive");
    const long count = static_cast<long>(std::floor((hi - lo) / step + 0.5)) + 1;
    std::vector<std::pair<double, double>> out;
    for (long i = 0; i < count; ++i) {
        const double a = lo + step * static_cast<double>(i);
        for (long j = 0; j < count; ++j) {
            const double b = lo + step * static_cast<double>(j);
            const auto [lhs, rhs] = square_gap_probe(a, b);
            if (lhs > rhs) out.emplace_back(a, b);
        }
    }
    return out;
}

namespace {

constexpr std::uint64_t kReplicationTag = 0x7265706c69636174ULL;

// One pass shared by both experiments: per n and replication, simulate the
// two-segment sample, fit the pooled estimator, and collect the error norm
// and |z_n^s| statistics.
ExperimentSummary run_experiment(const LemmaRunConfig& config) {
    config.validate();
    ExperimentSummary summary;
    summary.quantile_levels = config.quantile_levels;
    const long reps = config.replications;

    for (long n : config.n_grid) {
        TwoSegmentSpec spec = config.spec;
        spec.n = n;
        spec.validate();
        const Eigen::VectorXd phi2 = spec.resolved_phi2();
        const double bound = spec.error_bound();

        std::vector<double> errors(reps), zs_abs(reps);
        parallel_for(reps, [&](long r) {
            const std::uint64_t seed = derive_seed(
                config.master_seed,
                {kReplicationTag, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(r)});
            const TwoSegmentData sample =
                make_two_segment(spec, config.design, config.noise, seed);
            const SegmentFit fit = pooled_estimate(sample.data, sample.n1, spec.phi1, phi2,
                                                   config.penalty, config.solver);
            errors[r] = (fit.phi_hat - spec.phi1).norm();
            const Dataset prefix = head_rows(sample.data, sample.n1);
            zs_abs[r] = std::abs(z_n_s(prefix, fit.phi_hat, spec.phi1, config.penalty));
        });

        SummaryRow row;
        row.n = n;
        row.n1 = spec.n1();
        row.n2 = spec.n2();
        row.replications = reps;
        row.bound = bound;
        long satisfied = 0;
        for (double e : errors)
            if (e <= bound) ++satisfied;
        row.satisfaction_fraction = static_cast<double>(satisfied) / static_cast<double>(reps);
        for (double q : config.quantile_levels) {
            row.err_quantiles.push_back(quantile(errors, q));
            row.zs_quantiles.push_back(quantile(zs_abs, q));
        }
        summary.rows.push_back(std::move(row));
    }
    summary.validate();
    return summary;
}

} // namespace

ExperimentSummary run_rate_experiment(const LemmaRunConfig& config) {
    return run_experiment(config);
}

ExperimentSummary run_boundedness_experiment(const LemmaRunConfig& config) {
    return run_experiment(config);
}

} // namespace cplab
