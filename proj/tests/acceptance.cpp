// Acceptance suite: one line per criterion, nonzero exit when any fails.
// argv[1] is the path to the cplab CLI binary (used by criteria 1 and 8).

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "cplab/lemma.hpp"
#include "cplab/rng.hpp"
#include "cplab/segmentation.hpp"
#include "cplab/solvers.hpp"
#include "cplab/stats.hpp"

namespace fs = std::filesystem;
using namespace cplab;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int criterion, const std::string& name, bool pass, const std::string& detail,
            double seconds) {
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << criterion << " (" << name
              << "): " << detail << "  [" << std::fixed << std::setprecision(1) << seconds
              << "s]\n"
              << std::defaultfloat;
    if (!pass) ++failures;
}

Eigen::MatrixXd rand_matrix(SplitMix64& rng, long m, long p, double scale = 1.0) {
    Eigen::MatrixXd x(m, p);
    for (long i = 0; i < m; ++i)
        for (long j = 0; j < p; ++j) x(i, j) = scale * rng.next_normal();
    return x;
}

Eigen::VectorXd rand_vector(SplitMix64& rng, long m, double scale = 1.0) {
    Eigen::VectorXd v(m);
    for (long i = 0; i < m; ++i) v[i] = scale * rng.next_normal();
    return v;
}

double grid_min_objective(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double gamma,
                          double weight, double lo, double hi, double step) {
    const Eigen::MatrixXd a = x.transpose() * x;
    const Eigen::VectorXd b = x.transpose() * y;
    const double yty = y.squaredNorm();
    const long count = static_cast<long>((hi - lo) / step + 0.5) + 1;
    double best = std::numeric_limits<double>::infinity();
    if (x.cols() == 1) {
        for (long i = 0; i < count; ++i) {
            const double t = lo + step * static_cast<double>(i);
            best = std::min(best, a(0, 0) * t * t - 2.0 * b[0] * t + yty +
                                      weight * std::pow(std::abs(t), gamma));
        }
        return best;
    }
    for (long i = 0; i < count; ++i) {
        const double t0 = lo + step * static_cast<double>(i);
        const double part0 =
            a(0, 0) * t0 * t0 - 2.0 * b[0] * t0 + weight * std::pow(std::abs(t0), gamma) + yty;
        const double cross = 2.0 * a(0, 1) * t0 - 2.0 * b[1];
        for (long j = 0; j < count; ++j) {
            const double t1 = lo + step * static_cast<double>(j);
            best = std::min(best, part0 + a(1, 1) * t1 * t1 + cross * t1 +
                                      weight * std::pow(std::abs(t1), gamma));
        }
    }
    return best;
}

struct RunResult {
    int exit_code;
    std::string out;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run_cli(const std::string& cmd, const fs::path& scratch) {
    const fs::path out_file = scratch / "acceptance_stdout.txt";
    const int raw = std::system(
        (cmd + " > " + out_file.string() + " 2> " + (scratch / "acceptance_stderr.txt").string())
            .c_str());
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(out_file)};
}

LemmaRunConfig lemma_regime(std::uint64_t seed, AlternativeKind alternative) {
    LemmaRunConfig config;
    config.spec.u = 0.8;
    config.spec.v = 0.2;
    config.spec.delta = 0.05;
    config.spec.phi1 = Eigen::VectorXd::Zero(2);
    config.spec.phi1 << 1.0, 0.0;
    config.spec.phi3 = Eigen::VectorXd::Ones(2);
    config.spec.alternative = alternative;
    if (alternative == AlternativeKind::fixed) {
        Eigen::VectorXd phi2(2);
        phi2 << 1.5, 0.5;
        config.spec.fixed_phi2 = phi2;
    }
    config.design.p = 2;
    config.noise = {NoiseKind::gaussian, 1.0, 5};
    config.penalty = {1.0, 1.0};
    config.n_grid = {1 << 10, 1 << 12, 1 << 14};
    config.replications = 200;
    config.master_seed = seed;
    return config;
}

void criterion1_counterexample(const std::string& cli, const fs::path& scratch) {
    const auto t0 = Clock::now();
    const auto r = run_cli(cli + " counterexample", scratch);
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool pass =
        r.exit_code == 0 && r.out == "lhs=3 rhs=1 violated=true\n" && secs < 1.0;
    report(1, "counterexample", pass,
           "output '" + (r.out.empty() ? std::string("<none>") : r.out.substr(0, r.out.size() - 1)) +
               "', exit " + std::to_string(r.exit_code),
           secs);
}

void criterion2_solver_oracle() {
    const auto t0 = Clock::now();
    SplitMix64 rng(0xACCE5501);
    const double gammas[3] = {1.0, 1.5, 2.0};
    int checked = 0;
    double worst_gap = -1e300, worst_kkt = 0.0;
    bool pass = true;
    for (int trial = 0; trial < 200; ++trial) {
        const long p = 1 + static_cast<long>(rng.next_u64() % 2);
        const long m = 1 + static_cast<long>(rng.next_u64() % 8);
        const double gamma = gammas[trial % 3];
        const Eigen::MatrixXd x = rand_matrix(rng, m, p);
        const Eigen::VectorXd y = rand_vector(rng, m, 2.0);
        PenaltySpec spec{gamma, 0.25 + rng.next_double()};
        const SegmentFit fit = bridge_fit(x, y, spec, SolverSettings{});
        const double weight = spec.lambda(m) / static_cast<double>(m);
        const double oracle =
            grid_min_objective(x, y, gamma, weight, -5.0, 5.0, p == 1 ? 1e-3 : 1e-2);
        worst_gap = std::max(worst_gap, fit.objective - oracle);
        if (!(fit.objective <= oracle + 1e-6)) pass = false;
        if (gamma == 1.0) {
            const Eigen::VectorXd grad = 2.0 * x.transpose() * (x * fit.phi_hat - y);
            for (long j = 0; j < p; ++j) {
                const double resid =
                    fit.phi_hat[j] == 0.0
                        ? std::max(0.0, std::abs(grad[j]) - weight)
                        : std::abs(grad[j] + weight * (fit.phi_hat[j] > 0 ? 1.0 : -1.0));
                worst_kkt = std::max(worst_kkt, resid);
            }
            if (worst_kkt > 1e-6) pass = false;
        }
        ++checked;
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::ostringstream detail;
    detail << checked << " instances, worst objective gap " << worst_gap
           << ", worst lasso KKT residual " << worst_kkt;
    report(2, "solver vs grid oracle", pass && secs < 60.0, detail.str(), secs);
}

void criterion3_ridge_crosscheck() {
    const auto t0 = Clock::now();
    SplitMix64 rng(0xACCE5503);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const long p = 1 + static_cast<long>(rng.next_u64() % 2);
        const long m = 1 + static_cast<long>(rng.next_u64() % 8);
        const Eigen::MatrixXd x = rand_matrix(rng, m, p);
        const Eigen::VectorXd y = rand_vector(rng, m, 2.0);
        const double weight = 0.1 + 1.4 * rng.next_double();
        const SegmentFit closed = ridge_closed_form(x, y, weight);
        const SegmentFit prox = proximal_gradient_fit(x, y, 2.0, weight, SolverSettings{},
                                                      Eigen::VectorXd::Zero(p));
        worst = std::max(worst, std::abs(closed.objective - prox.objective));
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    report(3, "ridge closed form vs proximal gradient", worst <= 1e-6 && secs < 30.0,
           "100 instances, worst objective gap " + std::to_string(worst), secs);
}

void criterion4_segmentation() {
    const auto t0 = Clock::now();
    SplitMix64 rng(0xACCE5504);
    bool pass = true;
    int mismatches = 0;
    double worst_gap = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const long p = 1 + static_cast<long>(rng.next_u64() % 2);
        const long k = static_cast<long>(rng.next_u64() % 3);
        const long min_len = std::max<long>(2, p);
        const long n_lo = (k + 1) * min_len + 2;
        const long n = n_lo + static_cast<long>(rng.next_u64() % (41 - n_lo));
        Dataset data;
        data.x = rand_matrix(rng, n, p);
        data.y = rand_vector(rng, n, 1.5);
        SegmentationConfig config;
        config.k = k;
        config.min_segment_length = min_len;
        config.penalty = {trial % 2 == 0 ? 1.0 : 2.0, 0.25 + rng.next_double()};
        const Segmentation dp = fit_known_k(data, config);
        const Segmentation oracle = exhaustive_oracle(data, config);
        if (dp.changepoints != oracle.changepoints) {
            ++mismatches;
            pass = false;
        }
        const double gap =
            std::abs(dp.total_s - oracle.total_s) / std::max(1.0, std::abs(oracle.total_s));
        worst_gap = std::max(worst_gap, gap);
        if (gap > 1e-8) pass = false;
    }
    // noise-free separation: x constant 1, y jumps 0 -> 5 at index 20
    Dataset sep;
    sep.x = Eigen::MatrixXd::Ones(40, 1);
    sep.y.resize(40);
    for (long i = 0; i < 40; ++i) sep.y[i] = i < 20 ? 0.0 : 5.0;
    SegmentationConfig sep_cfg;
    sep_cfg.k = 1;
    sep_cfg.min_segment_length = 2;
    sep_cfg.penalty = {1.0, 0.0};
    const Segmentation sep_fit = fit_known_k(sep, sep_cfg);
    const bool sep_ok = sep_fit.changepoints == std::vector<long>{20};
    if (!sep_ok) pass = false;

    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::ostringstream detail;
    detail << "100 instances, " << mismatches << " changepoint mismatches, worst rel total gap "
           << worst_gap << ", noise-free cut " << (sep_ok ? "recovered" : "missed");
    report(4, "dynamic program vs exhaustive oracle", pass && secs < 120.0, detail.str(), secs);
}

void criterion5_rate() {
    const auto t0 = Clock::now();
    std::vector<std::vector<double>> fractions; // [seed][grid index]
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const ExperimentSummary summary =
            run_rate_experiment(lemma_regime(seed, AlternativeKind::local));
        std::vector<double> per_n;
        for (const auto& row : summary.rows) per_n.push_back(row.satisfaction_fraction);
        fractions.push_back(per_n);
    }
    const double primary = fractions[0][2]; // seed 1, n = 2^14
    std::vector<double> med;
    for (std::size_t g = 0; g < 3; ++g) {
        std::vector<double> col;
        for (const auto& f : fractions) col.push_back(f[g]);
        med.push_back(median(col));
    }
    const bool nondecreasing = med[0] <= med[1] + 1e-12 && med[1] <= med[2] + 1e-12;
    const bool pass = primary >= 0.95 && nondecreasing;
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::ostringstream detail;
    detail << "fraction(seed 1, n=2^14) = " << primary << ", medians over 5 seeds = {" << med[0]
           << ", " << med[1] << ", " << med[2] << "}";
    report(5, "error-bound satisfaction rate", pass && secs < 300.0, detail.str(), secs);
}

void criterion6_boundedness() {
    const auto t0 = Clock::now();
    const ExperimentSummary local =
        run_boundedness_experiment(lemma_regime(1, AlternativeKind::local));
    const double q95_lo = local.rows.front().zs_quantiles[2];
    const double q95_hi = local.rows.back().zs_quantiles[2];
    const bool pass = q95_hi <= 2.0 * q95_lo;

    // fixed alternative: reported, not gated
    const ExperimentSummary fixed =
        run_boundedness_experiment(lemma_regime(1, AlternativeKind::fixed));
    std::ostringstream fixed_info;
    fixed_info << "fixed-mode q95 |z_n^s| = {";
    for (std::size_t i = 0; i < fixed.rows.size(); ++i)
        fixed_info << (i ? ", " : "") << fixed.rows[i].zs_quantiles[2];
    fixed_info << "} (informational)";

    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::ostringstream detail;
    detail << "local q95 |z_n^s|: n=2^10 -> " << q95_lo << ", n=2^14 -> " << q95_hi
           << " (ratio " << q95_hi / q95_lo << "); " << fixed_info.str();
    report(6, "z_n^s boundedness under the local alternative", pass && secs < 300.0,
           detail.str(), secs);
}

void criterion7_identities() {
    const auto t0 = Clock::now();
    SplitMix64 rng(0xACCE5507);
    bool pass = true;
    double worst_offset = 0.0, worst_zero = 0.0, worst_argmin = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const long p = 1 + static_cast<long>(rng.next_u64() % 2);
        const long n1 = 6 + static_cast<long>(rng.next_u64() % 12);
        const long n2 = 1 + static_cast<long>(rng.next_u64() % 4);
        Dataset data;
        data.x = rand_matrix(rng, n1 + n2, p);
        const Eigen::VectorXd phi1 = rand_vector(rng, p);
        const Eigen::VectorXd phi2 = rand_vector(rng, p);
        data.y.resize(n1 + n2);
        for (long i = 0; i < n1 + n2; ++i)
            data.y[i] = data.x.row(i).dot(i < n1 ? phi1 : phi2) + 0.5 * rng.next_normal();
        const PenaltySpec pen{trial % 2 == 0 ? 1.0 : 2.0, 0.5 + rng.next_double()};
        const Dataset prefix = head_rows(data, n1);
        const Dataset suffix = tail_rows(data, n2);

        // (a) A^s - z_n^s - t_n^s must not depend on phi
        const auto offset = [&](const Eigen::VectorXd& phi) {
            return pooled_objective(data, n1, phi, phi1, phi2, pen) -
                   z_n_s(prefix, phi, phi1, pen) - t_n_s(suffix, phi, phi1, phi2, pen);
        };
        const double off_a = offset(rand_vector(rng, p));
        const double off_b = offset(rand_vector(rng, p));
        const double off_rel =
            std::abs(off_a - off_b) / std::max({1.0, std::abs(off_a), std::abs(off_b)});
        worst_offset = std::max(worst_offset, off_rel);
        if (off_rel > 1e-8) pass = false;

        // (b) all four statistics vanish at phi1
        const double scale = 1.0 + data.y.squaredNorm();
        const double zero_resid =
            std::max({std::abs(z_n(prefix, phi1, phi1)), std::abs(t_n(suffix, phi1, phi1, phi2)),
                      std::abs(z_n_s(prefix, phi1, phi1, pen)),
                      std::abs(t_n_s(suffix, phi1, phi1, phi2, pen))}) /
            scale;
        worst_zero = std::max(worst_zero, zero_resid);
        if (zero_resid > 1e-10) pass = false;

        // (c) pooled_estimate matches an independent minimization route
        const SegmentFit est = pooled_estimate(data, n1, phi1, phi2, pen, SolverSettings{});
        const double total_weight = pen.lambda(n1) + pen.lambda(n2);
        const SegmentFit alt = proximal_gradient_fit(data.x, data.y, pen.gamma, total_weight,
                                                     SolverSettings{}, Eigen::VectorXd::Zero(p));
        const double a_est = pooled_objective(data, n1, est.phi_hat, phi1, phi2, pen);
        const double a_alt = pooled_objective(data, n1, alt.phi_hat, phi1, phi2, pen);
        const double argmin_gap =
            std::abs(a_est - a_alt) / std::max({1.0, std::abs(a_est), std::abs(a_alt)});
        worst_argmin = std::max(worst_argmin, argmin_gap);
        if (argmin_gap > 1e-8) pass = false;
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::ostringstream detail;
    detail << "100 instances, worst phi-constant drift " << worst_offset
           << ", worst zero residual " << worst_zero << ", worst argmin objective gap "
           << worst_argmin;
    report(7, "contrast identity suite", pass && secs < 30.0, detail.str(), secs);
}

void criterion8_reproducibility(const std::string& cli, const fs::path& scratch) {
    const auto t0 = Clock::now();
    const fs::path a_csv = scratch / "accept_a.csv";
    const fs::path b_csv = scratch / "accept_b.csv";
    const fs::path a_json = scratch / "accept_a.json";
    const fs::path b_json = scratch / "accept_b.json";
    bool pass = true;

    auto r = run_cli(cli + " lemma-rate --seed 7 --replications 4 --n-grid 64,128 --out " +
                         a_csv.string(),
                     scratch);
    pass = pass && r.exit_code == 0;
    r = run_cli(cli + " lemma-rate --from-manifest " + a_csv.string() + ".manifest.json --out " +
                    b_csv.string(),
                scratch);
    pass = pass && r.exit_code == 0;
    const bool csv_same = slurp(a_csv) == slurp(b_csv) && !slurp(a_csv).empty();

    r = run_cli(cli + " lemma-bound --seed 11 --replications 4 --n-grid 64,128 --format json --out " +
                    a_json.string(),
                scratch);
    pass = pass && r.exit_code == 0;
    r = run_cli(cli + " lemma-bound --from-manifest " + a_json.string() +
                    ".manifest.json --format json --out " + b_json.string(),
                scratch);
    pass = pass && r.exit_code == 0;
    const bool json_same = slurp(a_json) == slurp(b_json) && !slurp(a_json).empty();

    pass = pass && csv_same && json_same;
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    report(8, "manifest replay reproducibility", pass,
           std::string("csv ") + (csv_same ? "identical" : "DIFFERS") + ", json " +
               (json_same ? "identical" : "DIFFERS"),
           secs);
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <path-to-cplab>\n";
        return 2;
    }
    const std::string cli = argv[1];
    const fs::path scratch = fs::temp_directory_path() / "cplab_acceptance";
    fs::create_directories(scratch);

    criterion1_counterexample(cli, scratch);
    criterion2_solver_oracle();
    criterion3_ridge_crosscheck();
    criterion4_segmentation();
    criterion5_rate();
    criterion6_boundedness();
    criterion7_identities();
    criterion8_reproducibility(cli, scratch);

    std::cout << (failures == 0 ? "acceptance: all criteria passed\n"
                                : "acceptance: " + std::to_string(failures) +
                                      " criterion(s) failed\n");
    return failures == 0 ? 0 : 1;
}
