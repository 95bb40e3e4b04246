#include "cplab/simulation.hpp"

#include <cmath>
#include <string>

#include "cplab/rng.hpp"
#include "cplab/segments.hpp"

namespace cplab {

namespace {

// Stream tags so design and error draws never overlap.
constexpr std::uint64_t kDesignTag = 0x64657369676eULL;
constexpr std::uint64_t kErrorTag = 0x6572726f7273ULL;

} // namespace

void DesignSpec::validate() const {
    if (kind == DesignKind::fixed_matrix) {
        if (!fixed) throw ConfigError("DesignSpec: fixed_matrix without a matrix payload");
        if (fixed->rows() < 1 || fixed->cols() < 1)
            throw ConfigError("DesignSpec: fixed matrix must be nonempty");
        return;
    }
    if (p < 1) throw ConfigError("DesignSpec: p must be >= 1");
    if (n < 0) throw ConfigError("DesignSpec: n must be nonnegative");
}

long TwoSegmentSpec::n1() const { return power_ceil(n, u); }
long TwoSegmentSpec::n2() const { return power_floor(n, v); }

double TwoSegmentSpec::error_bound() const {
    return std::pow(static_cast<double>(n), -(u - v - delta) / 2.0);
}

Eigen::VectorXd TwoSegmentSpec::resolved_phi2() const {
    if (alternative == AlternativeKind::fixed) {
        if (!fixed_phi2)
            throw ConfigError("TwoSegmentSpec: fixed alternative requires fixed_phi2");
        return *fixed_phi2;
    }
    const double drift = std::pow(static_cast<double>(n), -0.25);
    return phi1 + drift * phi3;
}

void TwoSegmentSpec::validate() const {
    if (n < 1) throw ConfigError("TwoSegmentSpec: n must be >= 1");
    if (!(u >= 0.75 && u <= 1.0)) throw ConfigError("TwoSegmentSpec: u must lie in [3/4, 1]");
    if (!(v >= 0.0 && v < 0.25)) throw ConfigError("TwoSegmentSpec: v must lie in [0, 1/4)");
    if (!(delta > 0.0 && delta < u - 3.0 * v))
        throw ConfigError("TwoSegmentSpec: delta must lie in (0, u - 3v)");
    if (phi1.size() < 1) throw ConfigError("TwoSegmentSpec: phi1 must be nonempty");
    if (alternative == AlternativeKind::local && phi3.size() != phi1.size())
        throw ShapeError("TwoSegmentSpec: phi3 length must match phi1");
    if (alternative == AlternativeKind::fixed) {
        if (!fixed_phi2)
            throw ConfigError("TwoSegmentSpec: fixed alternative requires fixed_phi2");
        if (fixed_phi2->size() != phi1.size())
            throw ShapeError("TwoSegmentSpec: fixed_phi2 length must match phi1");
    }
}

Eigen::VectorXd gen_errors(long n, const NoiseSpec& noise, std::uint64_t seed) {
    if (n < 0) throw ConfigError("gen_errors: n must be nonnegative");
    noise.validate();
    SplitMix64 rng(seed);
    Eigen::VectorXd eps(n);
    switch (noise.kind) {
    case NoiseKind::gaussian:
        for (long i = 0; i < n; ++i) eps[i] = noise.sigma * rng.next_normal();
        break;
    case NoiseKind::laplace: {
        const double b = noise.sigma / std::sqrt(2.0); // variance of Laplace(b) is 2b^2
        for (long i = 0; i < n; ++i) {
            double uu = rng.next_double();
            while (uu <= 0.0) uu = rng.next_double(); // keep log1p off -1
            const double q = uu - 0.5;
            eps[i] = -b * std::copysign(std::log1p(-2.0 * std::abs(q)), q);
        }
        break;
    }
    case NoiseKind::student_t: {
        const int df = noise.student_df;
        const double scale = noise.sigma * std::sqrt((df - 2.0) / df); // t_df variance is df/(df-2)
        for (long i = 0; i < n; ++i) {
            const double z = rng.next_normal();
            double chi2 = 0.0;
            for (int d = 0; d < df; ++d) {
                const double w = rng.next_normal();
                chi2 += w * w;
            }
            eps[i] = scale * z / std::sqrt(chi2 / df);
        }
        break;
    }
    }
    return eps;
}

Eigen::MatrixXd gen_design(const DesignSpec& design, std::uint64_t seed) {
    design.validate();
    if (design.kind == DesignKind::fixed_matrix) return *design.fixed;
    SplitMix64 rng(seed);
    Eigen::MatrixXd x(design.n, design.p);
    if (design.kind == DesignKind::iid_gaussian) {
        for (long i = 0; i < design.n; ++i)
            for (long j = 0; j < design.p; ++j) x(i, j) = rng.next_normal();
    } else {
        const double half = std::sqrt(3.0); // U(-sqrt3, sqrt3) has unit variance
        for (long i = 0; i < design.n; ++i)
            for (long j = 0; j < design.p; ++j) x(i, j) = half * (2.0 * rng.next_double() - 1.0);
    }
    return x;
}

Dataset simulate(const TrueModel& model, const DesignSpec& design, const NoiseSpec& noise,
                 std::uint64_t seed) {
    const long n = design.rows();
    model.validate(n);
    Dataset data;
    data.x = gen_design(design, derive_seed(seed, {kDesignTag}));
    if (data.x.cols() != model.phis.front().size())
        throw ShapeError("simulate: design has p = " + std::to_string(data.x.cols()) +
                         " but coefficients have length " +
                         std::to_string(model.phis.front().size()));
    const Eigen::VectorXd eps = gen_errors(n, noise, derive_seed(seed, {kErrorTag}));
    data.y.resize(n);
    const auto bounds = segment_bounds(model.changepoints, n);
    for (std::size_t r = 0; r < bounds.size(); ++r) {
        for (long i = bounds[r].start - 1; i < bounds[r].end; ++i)
            data.y[i] = data.x.row(i).dot(model.phis[r]) + eps[i];
    }
    return data;
}

TwoSegmentData make_two_segment(const TwoSegmentSpec& spec, const DesignSpec& design,
                                const NoiseSpec& noise, std::uint64_t seed) {
    spec.validate();
    const long n1 = spec.n1();
    const long n2 = spec.n2();
    const Eigen::VectorXd phi2 = spec.resolved_phi2();

    DesignSpec rows = design;
    rows.n = n1 + n2;
    if (rows.kind != DesignKind::fixed_matrix) rows.p = spec.phi1.size();

    TwoSegmentData out;
    out.data.x = gen_design(rows, derive_seed(seed, {kDesignTag}));
    if (out.data.x.rows() != n1 + n2)
        throw ShapeError("make_two_segment: design must supply n1 + n2 rows");
    if (out.data.x.cols() != spec.phi1.size())
        throw ShapeError("make_two_segment: design width must match phi1");
    const Eigen::VectorXd eps = gen_errors(n1 + n2, noise, derive_seed(seed, {kErrorTag}));
    out.data.y.resize(n1 + n2);
    for (long i = 0; i < n1; ++i) out.data.y[i] = out.data.x.row(i).dot(spec.phi1) + eps[i];
    for (long i = n1; i < n1 + n2; ++i) out.data.y[i] = out.data.x.row(i).dot(phi2) + eps[i];
    out.phi2 = phi2;
    out.n1 = n1;
    out.n2 = n2;
    return out;
}

} // namespace cplab
