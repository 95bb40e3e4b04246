#include "cplab/config.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "cplab/reports.hpp"

namespace cplab {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

double parse_real(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("configuration key " + key + ": cannot parse real from '" + value + "'");
    }
}

long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("configuration key " + key + ": cannot parse integer from '" + value +
                          "'");
    }
}

std::vector<double> parse_reals(const std::string& key, const std::string& value) {
    std::vector<double> out;
    for (const auto& tok : split(value, ','))
        if (!tok.empty()) out.push_back(parse_real(key, tok));
    if (out.empty()) throw ConfigError("configuration key " + key + ": empty list");
    return out;
}

std::vector<long> parse_ints(const std::string& key, const std::string& value) {
    std::vector<long> out;
    for (const auto& tok : split(value, ','))
        if (!tok.empty()) out.push_back(parse_int(key, tok));
    return out;
}

std::string join_reals(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += format_double(v[i]);
    }
    return out;
}

std::string join_ints(const std::vector<long>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out;
}

DesignKind parse_design(const std::string& key, const std::string& value) {
    if (value == "iid_gaussian") return DesignKind::iid_gaussian;
    if (value == "bounded_uniform") return DesignKind::bounded_uniform;
    throw ConfigError("configuration key " + key + ": unknown design '" + value + "'");
}

NoiseKind parse_noise(const std::string& key, const std::string& value) {
    if (value == "gaussian") return NoiseKind::gaussian;
    if (value == "laplace") return NoiseKind::laplace;
    if (value == "student_t") return NoiseKind::student_t;
    throw ConfigError("configuration key " + key + ": unknown noise '" + value + "'");
}

void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "model.p") cfg.p = parse_int(key, value);
    else if (key == "model.phi1") cfg.phi1 = parse_reals(key, value);
    else if (key == "model.phi3") cfg.phi3 = parse_reals(key, value);
    else if (key == "model.phi2") cfg.phi2 = parse_reals(key, value);
    else if (key == "model.alternative") {
        if (value == "local") cfg.alternative = AlternativeKind::local;
        else if (value == "fixed") cfg.alternative = AlternativeKind::fixed;
        else throw ConfigError("configuration key " + key + ": expected local or fixed, got '" +
                               value + "'");
    } else if (key == "model.u") cfg.u = parse_real(key, value);
    else if (key == "model.v") cfg.v = parse_real(key, value);
    else if (key == "model.delta") cfg.delta = parse_real(key, value);
    else if (key == "model.design") cfg.design = parse_design(key, value);
    else if (key == "model.noise") cfg.noise.kind = parse_noise(key, value);
    else if (key == "model.sigma") cfg.noise.sigma = parse_real(key, value);
    else if (key == "model.student_df") cfg.noise.student_df = static_cast<int>(parse_int(key, value));
    else if (key == "model.n") cfg.n = parse_int(key, value);
    else if (key == "model.changepoints") cfg.changepoints = parse_ints(key, value);
    else if (key == "model.phis") {
        cfg.phis.clear();
        for (const auto& part : split(value, ';'))
            if (!part.empty()) cfg.phis.push_back(parse_reals(key, part));
        if (cfg.phis.empty()) throw ConfigError("configuration key " + key + ": empty list");
    } else if (key == "model.k") cfg.k = parse_int(key, value);
    else if (key == "model.min_segment_length") cfg.min_segment_length = parse_int(key, value);
    else if (key == "model.c0") cfg.c0 = parse_real(key, value);
    else if (key == "penalty.gamma") cfg.penalty.gamma = parse_real(key, value);
    else if (key == "penalty.scale_c") cfg.penalty.scale_c = parse_real(key, value);
    else if (key == "solver.max_iterations") cfg.solver.max_iterations = parse_int(key, value);
    else if (key == "solver.tolerance") cfg.solver.tolerance = parse_real(key, value);
    else if (key == "solver.multistart_count")
        cfg.solver.multistart_count = static_cast<int>(parse_int(key, value));
    else if (key == "solver.step_shrink") cfg.solver.step_shrink = parse_real(key, value);
    else if (key == "experiment.n_grid") cfg.n_grid = parse_ints(key, value);
    else if (key == "experiment.replications") cfg.replications = parse_int(key, value);
    else if (key == "experiment.quantile_levels") cfg.quantile_levels = parse_reals(key, value);
    else if (key == "experiment.seed")
        cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
    else throw ConfigError("unknown configuration key: " + key);
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
    Eigen::VectorXd out(static_cast<long>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<long>(i)] = v[i];
    return out;
}

} // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "model" && section != "penalty" && section != "solver" &&
                section != "experiment")
                throw ConfigError("unknown configuration section: [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": key outside any section");
        apply_key(cfg, section + "." + key, value);
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    return parse_config_text(read_text_file(path));
}

RunConfig config_from_snapshot(const std::map<std::string, std::string>& snapshot) {
    RunConfig cfg;
    for (const auto& [key, value] : snapshot) apply_key(cfg, key, value);
    return cfg;
}

std::map<std::string, std::string> RunConfig::snapshot() const {
    std::map<std::string, std::string> snap;
    snap["model.p"] = std::to_string(p);
    snap["model.phi1"] = join_reals(phi1);
    snap["model.phi3"] = join_reals(phi3);
    if (phi2) snap["model.phi2"] = join_reals(*phi2);
    snap["model.alternative"] = alternative == AlternativeKind::local ? "local" : "fixed";
    snap["model.u"] = format_double(u);
    snap["model.v"] = format_double(v);
    snap["model.delta"] = format_double(delta);
    snap["model.design"] =
        design == DesignKind::iid_gaussian ? "iid_gaussian" : "bounded_uniform";
    snap["model.noise"] = noise.kind == NoiseKind::gaussian
                              ? "gaussian"
                              : (noise.kind == NoiseKind::laplace ? "laplace" : "student_t");
    snap["model.sigma"] = format_double(noise.sigma);
    snap["model.student_df"] = std::to_string(noise.student_df);
    snap["model.n"] = std::to_string(n);
    snap["model.changepoints"] = join_ints(changepoints);
    {
        std::string joined;
        for (std::size_t i = 0; i < phis.size(); ++i) {
            if (i) joined += "; ";
            joined += join_reals(phis[i]);
        }
        snap["model.phis"] = joined;
    }
    snap["model.k"] = std::to_string(k);
    if (min_segment_length) snap["model.min_segment_length"] = std::to_string(*min_segment_length);
    snap["model.c0"] = format_double(c0);
    snap["penalty.gamma"] = format_double(penalty.gamma);
    snap["penalty.scale_c"] = format_double(penalty.scale_c);
    snap["solver.max_iterations"] = std::to_string(solver.max_iterations);
    snap["solver.tolerance"] = format_double(solver.tolerance);
    snap["solver.multistart_count"] = std::to_string(solver.multistart_count);
    snap["solver.step_shrink"] = format_double(solver.step_shrink);
    snap["experiment.n_grid"] = join_ints(n_grid);
    snap["experiment.replications"] = std::to_string(replications);
    snap["experiment.quantile_levels"] = join_reals(quantile_levels);
    snap["experiment.seed"] = std::to_string(seed);
    return snap;
}

TwoSegmentSpec RunConfig::two_segment_spec() const {
    TwoSegmentSpec spec;
    spec.n = n_grid.empty() ? n : n_grid.front();
    spec.u = u;
    spec.v = v;
    spec.delta = delta;
    spec.phi1 = to_vector(phi1);
    spec.phi3 = to_vector(phi3);
    spec.alternative = alternative;
    if (phi2) spec.fixed_phi2 = to_vector(*phi2);
    return spec;
}

DesignSpec RunConfig::design_spec(long rows) const {
    DesignSpec d;
    d.kind = design;
    d.p = p;
    d.n = rows;
    return d;
}

TrueModel RunConfig::true_model() const {
    TrueModel model;
    for (const auto& v : phis) model.phis.push_back(to_vector(v));
    model.changepoints = changepoints;
    model.u = u;
    model.c0 = c0;
    return model;
}

SegmentationConfig RunConfig::segmentation_config() const {
    SegmentationConfig sc;
    sc.k = k;
    sc.min_segment_length = min_segment_length;
    sc.spacing_exponent = u; // fallback when no explicit minimum is given
    sc.penalty = penalty;
    sc.solver = solver;
    return sc;
}

LemmaRunConfig RunConfig::lemma_config() const {
    LemmaRunConfig lc;
    lc.spec = two_segment_spec();
    lc.design = design_spec(0);
    lc.noise = noise;
    lc.n_grid = n_grid;
    lc.replications = replications;
    lc.penalty = penalty;
    lc.solver = solver;
    lc.master_seed = seed;
    lc.quantile_levels = quantile_levels;
    return lc;
}

} // namespace cplab
