#include "cplab/segments.hpp"

#include "cplab/numeric.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace cplab {

void Dataset::validate() const {
    if (x.rows() < 1 || x.cols() < 1) throw ShapeError("Dataset: need n >= 1 and p >= 1");
    if (x.rows() != y.size())
        throw ShapeError("Dataset: x has " + std::to_string(x.rows()) + " rows but y has " +
                         std::to_string(y.size()) + " entries");
    if (!x.allFinite() || !y.allFinite()) throw ConfigError("Dataset: non-finite entries");
}

void TrueModel::validate(long n) const {
    if (phis.size() != changepoints.size() + 1)
        throw ConfigError("TrueModel: need exactly K+1 coefficient vectors");
    if (!(u >= 0.75 && u <= 1.0)) throw ConfigError("TrueModel: u must lie in [3/4, 1]");
    if (!(c0 > 0.0)) throw ConfigError("TrueModel: c0 must be positive");
    for (std::size_t r = 0; r + 1 < phis.size(); ++r) {
        if (phis[r].size() != phis[r + 1].size())
            throw ShapeError("TrueModel: coefficient vectors must share one length");
        if ((phis[r].array() == phis[r + 1].array()).all())
            throw ConfigError("TrueModel: adjacent segment coefficients must differ");
    }
    const auto bounds = segment_bounds(changepoints, n); // also checks ordering
    const double min_len = c0 * static_cast<double>(power_ceil(n, u));
    for (const auto& b : bounds) {
        if (static_cast<double>(b.length()) < min_len)
            throw ConfigError("TrueModel: segment [" + std::to_string(b.start) + "," +
                              std::to_string(b.end) + "] shorter than spacing floor " +
                              std::to_string(min_len));
    }
}

void PenaltySpec::validate() const {
    if (!(gamma > 0.0)) throw ConfigError("PenaltySpec: gamma must be positive");
    if (!(scale_c >= 0.0)) throw ConfigError("PenaltySpec: scale_c must be nonnegative");
}

void SegmentFit::validate() const {
    if (rss < 0.0) throw ConfigError("SegmentFit: negative rss");
    if (penalty_value < 0.0) throw ConfigError("SegmentFit: negative penalty value");
    const double scale = std::max({1.0, std::abs(rss), std::abs(penalty_value)});
    if (std::abs(objective - (rss + penalty_value)) > 1e-10 * scale)
        throw ConfigError("SegmentFit: objective != rss + penalty");
}

void Segmentation::validate(long min_segment_length, long n) const {
    if (fits.size() != changepoints.size() + 1)
        throw ConfigError("Segmentation: segment count must be changepoint count + 1");
    double sum = 0.0;
    for (const auto& fit : fits) sum += fit.objective;
    if (std::abs(sum - total_s) > 1e-8 * std::max(1.0, std::abs(sum)))
        throw ConfigError("Segmentation: total_s does not match per-segment objectives");
    for (const auto& b : segment_bounds(changepoints, n)) {
        if (b.length() < min_segment_length)
            throw ConfigError("Segmentation: segment shorter than configured minimum");
    }
}

void NoiseSpec::validate() const {
    if (!(sigma >= 0.0)) throw ConfigError("NoiseSpec: sigma must be nonnegative");
    if (kind == NoiseKind::student_t && student_df <= 2)
        throw ConfigError("NoiseSpec: student_t needs df > 2 for finite variance");
}

std::vector<IndexRange> segment_bounds(const std::vector<long>& changepoints, long n) {
    if (n < 1) throw ConfigError("segment_bounds: n must be >= 1");
    long prev = 0;
    for (long cp : changepoints) {
        if (cp <= prev)
            throw ConfigError("segment_bounds: changepoints must be strictly increasing, got " +
                              std::to_string(cp) + " after " + std::to_string(prev));
        if (cp >= n)
            throw ConfigError("segment_bounds: changepoint " + std::to_string(cp) +
                              " outside (0, " + std::to_string(n) + ")");
        prev = cp;
    }
    std::vector<IndexRange> out;
    out.reserve(changepoints.size() + 1);
    long start = 1;
    for (long cp : changepoints) {
        out.push_back({start, cp});
        start = cp + 1;
    }
    out.push_back({start, n});
    return out;
}

AssumptionDiagnostics assumption_diagnostics(const Dataset& data,
                                             const std::vector<long>& changepoints) {
    data.validate();
    const auto bounds = segment_bounds(changepoints, data.n());

    AssumptionDiagnostics diag;
    double max_norm = 0.0;
    for (long i = 0; i < data.n(); ++i)
        max_norm = std::max(max_norm, data.x.row(i).squaredNorm());
    diag.max_row_norm_over_n = max_norm / static_cast<double>(data.n());

    for (const auto& b : bounds) {
        const long len = b.length();
        if (len < 1) throw ConfigError("assumption_diagnostics: empty segment");
        Eigen::MatrixXd c = Eigen::MatrixXd::Zero(data.p(), data.p());
        for (long i = b.start - 1; i < b.end; ++i)
            c.noalias() += data.x.row(i).transpose() * data.x.row(i);
        c /= static_cast<double>(len);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c, Eigen::EigenvaluesOnly);
        diag.grams.push_back({std::move(c), es.eigenvalues().minCoeff(),
                              es.eigenvalues().maxCoeff()});
    }
    return diag;
}

} // namespace cplab
