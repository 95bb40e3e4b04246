#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cplab/config.hpp"
#include "cplab/lemma.hpp"
#include "cplab/reports.hpp"
#include "cplab/segmentation.hpp"
#include "cplab/segments.hpp"
#include "cplab/simulation.hpp"

namespace {

using namespace cplab;

struct CommonArgs {
    std::string config_path;
    std::string manifest_path;
    std::string out_path;
    std::string format = "csv";
    std::optional<std::int64_t> seed;
    std::optional<long> replications;
    std::vector<long> n_grid;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "key=value configuration file")
        ->check(CLI::ExistingFile);
    cmd->add_option("--from-manifest", args.manifest_path,
                    "replay the configuration recorded in a run manifest")
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", args.seed, "master seed (overrides configuration)");
    cmd->add_option("--out", args.out_path, "output path (stdout when omitted)");
    cmd->add_option("--format", args.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--replications", args.replications,
                    "Monte Carlo replications (overrides configuration)");
    cmd->add_option("--n-grid", args.n_grid, "sample-size grid (overrides configuration)")
        ->delimiter(',');
}

RunConfig resolve_config(const CommonArgs& args) {
    RunConfig cfg;
    if (!args.manifest_path.empty())
        cfg = config_from_snapshot(read_manifest(args.manifest_path).config);
    else if (!args.config_path.empty())
        cfg = parse_config_file(args.config_path);
    if (args.seed) cfg.seed = static_cast<std::uint64_t>(*args.seed);
    if (args.replications) cfg.replications = *args.replications;
    if (!args.n_grid.empty()) cfg.n_grid = args.n_grid;
    return cfg;
}

// Writes the result (file or stdout) and, for file outputs, the manifest.
void emit(const std::string& content, const CommonArgs& args, const RunConfig& cfg,
          const std::string& command, const std::string& started_at) {
    if (args.out_path.empty()) {
        std::cout << content;
        return;
    }
    write_text_file(args.out_path, content);
    RunManifest manifest;
    manifest.command = command;
    manifest.config = cfg.snapshot();
    manifest.master_seed = cfg.seed;
    manifest.format = args.format;
    manifest.started_at = started_at;
    manifest.finished_at = utc_timestamp();
    manifest.outputs = {args.out_path};
    write_manifest(manifest, args.out_path + ".manifest.json");
}

std::string segmentation_report(const Segmentation& seg, long n, long p, OutputFormat format) {
    const auto bounds = segment_bounds(seg.changepoints, n);
    if (format == OutputFormat::csv) {
        std::string out = "segment,start,end,converged,iterations,rss,penalty,objective,total_s";
        for (long j = 0; j < p; ++j) out += ",phi_" + std::to_string(j + 1);
        out += "\n";
        for (std::size_t r = 0; r < seg.fits.size(); ++r) {
            const auto& fit = seg.fits[r];
            out += std::to_string(r + 1) + ',' + std::to_string(bounds[r].start) + ',' +
                   std::to_string(bounds[r].end) + ',' + (fit.converged ? "true" : "false") +
                   ',' + std::to_string(fit.iterations) + ',' + format_double(fit.rss) + ',' +
                   format_double(fit.penalty_value) + ',' + format_double(fit.objective) + ',' +
                   format_double(seg.total_s);
            for (long j = 0; j < p; ++j) out += ',' + format_double(fit.phi_hat[j]);
            out += '\n';
        }
        return out;
    }
    nlohmann::ordered_json doc;
    doc["changepoints"] = seg.changepoints;
    doc["total_s"] = seg.total_s;
    doc["segments"] = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < seg.fits.size(); ++r) {
        const auto& fit = seg.fits[r];
        nlohmann::ordered_json s;
        s["start"] = bounds[r].start;
        s["end"] = bounds[r].end;
        s["converged"] = fit.converged;
        s["iterations"] = fit.iterations;
        s["rss"] = fit.rss;
        s["penalty"] = fit.penalty_value;
        s["objective"] = fit.objective;
        s["phi"] = std::vector<double>(fit.phi_hat.data(), fit.phi_hat.data() + fit.phi_hat.size());
        doc["segments"].push_back(std::move(s));
    }
    return doc.dump(2) + "\n";
}

std::string diagnostics_report(const AssumptionDiagnostics& diag,
                               const std::vector<long>& changepoints, long n,
                               OutputFormat format) {
    const auto bounds = segment_bounds(changepoints, n);
    if (format == OutputFormat::csv) {
        std::string out = "segment,start,end,eig_min,eig_max,max_row_norm_over_n\n";
        for (std::size_t r = 0; r < diag.grams.size(); ++r) {
            out += std::to_string(r + 1) + ',' + std::to_string(bounds[r].start) + ',' +
                   std::to_string(bounds[r].end) + ',' + format_double(diag.grams[r].eig_min) +
                   ',' + format_double(diag.grams[r].eig_max) + ',' +
                   format_double(diag.max_row_norm_over_n) + '\n';
        }
        return out;
    }
    nlohmann::ordered_json doc;
    doc["max_row_norm_over_n"] = diag.max_row_norm_over_n;
    doc["segments"] = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < diag.grams.size(); ++r) {
        nlohmann::ordered_json s;
        s["start"] = bounds[r].start;
        s["end"] = bounds[r].end;
        s["eig_min"] = diag.grams[r].eig_min;
        s["eig_max"] = diag.grams[r].eig_max;
        std::vector<std::vector<double>> rows;
        for (long i = 0; i < diag.grams[r].c.rows(); ++i) {
            std::vector<double> row;
            for (long j = 0; j < diag.grams[r].c.cols(); ++j)
                row.push_back(diag.grams[r].c(i, j));
            rows.push_back(std::move(row));
        }
        s["gram"] = rows;
        doc["segments"].push_back(std::move(s));
    }
    return doc.dump(2) + "\n";
}

Dataset load_or_simulate(const std::string& data_path, const RunConfig& cfg) {
    if (!data_path.empty()) return read_dataset_csv(data_path);
    return simulate(cfg.true_model(), cfg.design_spec(cfg.n), cfg.noise, cfg.seed);
}

int run(int argc, char** argv) {
    CLI::App app{"penalized change-point regression laboratory"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string data_path;

    auto* counterexample = app.add_subcommand(
        "counterexample", "evaluate the |a^2-b^2| vs (a-b)^2 witness at a=2, b=1");
    add_common(counterexample, args);

    auto* simulate_cmd =
        app.add_subcommand("simulate", "generate a piecewise dataset and write it as CSV");
    add_common(simulate_cmd, args);

    auto* fit_cmd =
        app.add_subcommand("fit", "fit a k-changepoint segmentation to a dataset");
    add_common(fit_cmd, args);
    fit_cmd->add_option("--data", data_path, "dataset CSV (simulated from config when omitted)")
        ->check(CLI::ExistingFile);

    auto* diagnose_cmd = app.add_subcommand(
        "diagnose", "report design diagnostics (row norms, segment Gram eigenvalues)");
    add_common(diagnose_cmd, args);
    diagnose_cmd
        ->add_option("--data", data_path, "dataset CSV (simulated from config when omitted)")
        ->check(CLI::ExistingFile);

    auto* rate_cmd = app.add_subcommand(
        "lemma-rate", "Monte Carlo check of the pooled-estimate error bound");
    add_common(rate_cmd, args);

    auto* bound_cmd = app.add_subcommand(
        "lemma-bound", "Monte Carlo check that |z_n^s| stays bounded across n");
    add_common(bound_cmd, args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    const std::string started_at = utc_timestamp();
    const RunConfig cfg = resolve_config(args);
    const OutputFormat format = parse_format(args.format);

    if (counterexample->parsed()) {
        const auto [lhs, rhs] = check_counterexample();
        const std::string line = "lhs=" + format_double(lhs) + " rhs=" + format_double(rhs) +
                                 " violated=" + (lhs > rhs ? "true" : "false") + "\n";
        emit(line, args, cfg, "counterexample", started_at);
        return 0;
    }

    if (simulate_cmd->parsed()) {
        const Dataset data = simulate(cfg.true_model(), cfg.design_spec(cfg.n), cfg.noise, cfg.seed);
        emit(dataset_to_csv(data), args, cfg, "simulate", started_at);
        return 0;
    }

    if (fit_cmd->parsed()) {
        const Dataset data = load_or_simulate(data_path, cfg);
        const Segmentation seg = fit_known_k(data, cfg.segmentation_config());
        emit(segmentation_report(seg, data.n(), data.p(), format), args, cfg, "fit", started_at);
        return 0;
    }

    if (diagnose_cmd->parsed()) {
        const Dataset data = load_or_simulate(data_path, cfg);
        const auto diag = assumption_diagnostics(data, cfg.changepoints);
        emit(diagnostics_report(diag, cfg.changepoints, data.n(), format), args, cfg, "diagnose",
             started_at);
        return 0;
    }

    const bool rate = rate_cmd->parsed();
    const ExperimentSummary summary =
        rate ? run_rate_experiment(cfg.lemma_config()) : run_boundedness_experiment(cfg.lemma_config());
    const std::string content =
        format == OutputFormat::csv ? summary_to_csv(summary) : summary_to_json_text(summary);
    emit(content, args, cfg, rate ? "lemma-rate" : "lemma-bound", started_at);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const cplab::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const cplab::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const cplab::ShapeError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
