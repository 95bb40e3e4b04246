#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cplab/lemma.hpp"
#include "cplab/segmentation.hpp"
#include "cplab/simulation.hpp"

namespace cplab {

// Flat key-value run configuration with [model], [penalty], [solver] and
// [experiment] sections.  Unknown keys are hard errors.
struct RunConfig {
    // [model]
    long p = 2;
    std::vector<double> phi1 = {1.0, 0.0};
    std::vector<double> phi3 = {1.0, 1.0};
    std::optional<std::vector<double>> phi2; // required for alternative = fixed
    AlternativeKind alternative = AlternativeKind::local;
    double u = 0.8;
    double v = 0.2;
    double delta = 0.05;
    DesignKind design = DesignKind::iid_gaussian;
    NoiseSpec noise;
    long n = 200;                              // simulate / fit sample size
    std::vector<long> changepoints = {100};    // simulate / diagnose truth
    std::vector<std::vector<double>> phis = {{1.0, 0.0}, {2.0, 1.0}};
    long k = 1;                                // fit: changepoints to place
    std::optional<long> min_segment_length;
    double c0 = 1.0;

    // [penalty]
    PenaltySpec penalty;

    // [solver]
    SolverSettings solver;

    // [experiment]
    std::vector<long> n_grid = {1024, 4096, 16384};
    long replications = 200;
    std::vector<double> quantile_levels = {0.5, 0.9, 0.95};
    std::uint64_t seed = 1;

    // Assembled pieces.
    TwoSegmentSpec two_segment_spec() const;
    DesignSpec design_spec(long rows) const;
    TrueModel true_model() const;
    SegmentationConfig segmentation_config() const;
    LemmaRunConfig lemma_config() const;

    // Resolved flat snapshot; parsing it back reproduces this config exactly.
    std::map<std::string, std::string> snapshot() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);
RunConfig config_from_snapshot(const std::map<std::string, std::string>& snapshot);

} // namespace cplab
