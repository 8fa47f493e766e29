#include "heckit/errors.hpp"
#include "heckit/files.hpp"
#include "heckit/panel.hpp"
#include "heckit/render.hpp"
#include "heckit/replication.hpp"
#include "heckit/synth.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using namespace heckit;

namespace {

struct RunConfig {
    std::string data;
    std::string schema;
    std::string out;
    std::string model = "all";
    std::string vcov = "robust";
    std::string filter = "none";
    double rho = 0.5;
    double sigma_u = 1.0;
    long n = 2000;
    int reps = 200;
    std::uint64_t seed = 7;
    int grid = 100;
    bool verbose = false;
};

unsigned worker_threads() {
    return std::max(1u, std::thread::hardware_concurrency());
}

void note(const RunConfig& cfg, const std::string& msg) {
    if (cfg.verbose) std::cerr << msg << "\n";
}

Panel load(const RunConfig& cfg) {
    const Schema schema = cfg.schema.empty() ? default_schema() : load_schema(cfg.schema);
    if (!fs::exists(cfg.data)) throw DataError("data file not found: " + cfg.data);
    Panel panel = load_panel(cfg.data, schema);
    note(cfg, "loaded " + std::to_string(panel.size()) + " records from " + cfg.data);
    return panel;
}

void emit(const fs::path& out, const std::string& rel, const std::string& content) {
    write_file_atomic(out / rel, content);
}

void write_table(const fs::path& out, const std::string& stem, const TableResult& t) {
    emit(out, "tables/" + stem + ".md", render_markdown(t));
    emit(out, "tables/" + stem + ".csv", render_csv(t));
}

void write_figure(const fs::path& out, const FigureData& f) {
    emit(out, "figures/" + f.id + ".csv", render_figure_csv(f));
    emit(out, "figures/" + f.id + ".svg", render_figure_svg(f));
}

std::vector<FigureData> all_figures(const Panel& panel, int grid) {
    return {gdp_boxplot_stats(panel), conditional_start_curve(panel, log_gdp_grid(panel, grid)),
            goveff_scatter_fit(panel), correlation_matrix(panel, kCorrelationCodes)};
}

std::vector<ModelSpec> selected_specs(const std::string& model) {
    if (model == "all") return builtin_specs();
    return {builtin_spec(std::stoi(model))};
}

int cmd_describe(const RunConfig& cfg) {
    const Panel panel = load(cfg);
    const TableResult t = descriptive_table(panel);
    if (cfg.out.empty()) {
        std::cout << render_markdown(t);
        return 0;
    }
    write_table(cfg.out, "table1", t);
    emit(cfg.out, "report/audit.log", render_audit(panel.audit));
    return 0;
}

int cmd_fit(const RunConfig& cfg) {
    const Panel panel = load(cfg);
    SuiteOptions opts;
    opts.vcov = parse_vcov_variant(cfg.vcov);
    opts.extra_filter = suite_filters(parse_suite_filter(cfg.filter));
    opts.threads = worker_threads();
    const auto runs = fit_models(panel, selected_specs(cfg.model), opts);
    const TableResult t = suite_table(runs, "fit", "Heckman two-step estimates (" + std::string(to_string(opts.vcov)) +
                                                        " s.e., filter " + cfg.filter + ")");
    int status = 0;
    for (const auto& r : runs) {
        if (r.error) {
            std::cerr << "error: " << r.spec.name << ": " << *r.error << "\n";
            status = 1;
        }
        if (r.fit) {
            for (const auto& w : r.fit->warnings) std::cerr << "warning: " << r.spec.name << ": " << w << "\n";
        }
    }
    if (cfg.out.empty()) {
        std::cout << render_markdown(t);
    } else {
        write_table(cfg.out, "fit", t);
    }
    return status;
}

int cmd_replicate(const RunConfig& cfg) {
    const Panel panel = load(cfg);
    const fs::path out = cfg.out;
    note(cfg, "fitting models");
    const ReplicationTables tables = run_replication(panel, parse_vcov_variant(cfg.vcov));
    write_table(out, "table1", tables.table1);
    write_table(out, "table2", tables.table2);
    write_table(out, "table2_alt", tables.table2_alt);
    write_table(out, "table3", tables.table3);
    write_table(out, "table4", tables.table4);
    note(cfg, "building figures");
    for (const auto& f : all_figures(panel, cfg.grid)) write_figure(out, f);
    emit(out, "report/replication_diff.md", replication_diff_report(panel, tables));
    emit(out, "report/audit.log", render_audit(panel.audit));
    note(cfg, "wrote " + out.string());
    return 0;
}

int cmd_figures(const RunConfig& cfg) {
    const Panel panel = load(cfg);
    for (const auto& f : all_figures(panel, cfg.grid)) write_figure(cfg.out, f);
    return 0;
}

int cmd_simulate(const RunConfig& cfg) {
    synth::DgpConfig dgp = synth::default_config();
    dgp.rho = cfg.rho;
    dgp.sigma_u = cfg.sigma_u;
    dgp.n = cfg.n;
    dgp.seed = cfg.seed;
    synth::validate(dgp);
    note(cfg, "running " + std::to_string(cfg.reps) + " replications");
    const auto report = synth::monte_carlo(dgp, cfg.reps, {worker_threads()});
    if (report.failures > 0) std::cerr << "warning: " << report.failures << " replications failed\n";
    if (cfg.out.empty()) {
        std::cout << synth::render_report_markdown(report);
        return 0;
    }
    emit(cfg.out, "simulation/recovery.csv", synth::render_report_csv(report));
    emit(cfg.out, "simulation/recovery.md", synth::render_report_markdown(report));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    CLI::App app{"Heckman two-step selection models for vaccination roll-out data"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1, 1);
    app.option_defaults()->always_capture_default();
    app.set_version_flag("--version", std::string("heckit 1.0.0"));

    auto data_opts = [&](CLI::App* sub, bool need_out) {
        sub->add_option("--data", cfg.data, "country snapshot CSV")->required();
        sub->add_option("--schema", cfg.schema, "schema JSON (built-in when omitted)");
        auto* out = sub->add_option("--out", cfg.out, "output directory");
        if (need_out) out->required();
        sub->add_flag("--verbose", cfg.verbose, "progress messages on stderr");
    };

    auto* describe = app.add_subcommand("describe", "descriptive statistics (Table 1)");
    data_opts(describe, false);

    auto* fit = app.add_subcommand("fit", "fit one or all built-in models");
    data_opts(fit, false);
    fit->add_option("--model", cfg.model, "model number 1-5 or 'all'")
        ->check(CLI::IsMember({"1", "2", "3", "4", "5", "all"}));
    fit->add_option("--vcov", cfg.vcov, "outcome standard errors")->check(CLI::IsMember({"robust", "heckman"}));
    fit->add_option("--filter", cfg.filter, "outlier filter")->check(CLI::IsMember({"none", "table3", "table4"}));

    auto* replicate = app.add_subcommand("replicate", "tables, figures and the reference diff report");
    data_opts(replicate, true);
    replicate->add_option("--vcov", cfg.vcov, "outcome standard errors for the main tables")
        ->check(CLI::IsMember({"robust", "heckman"}));
    replicate->add_option("--grid", cfg.grid, "points on the figure 2 curve")->check(CLI::Range(2, 100000));

    auto* figures = app.add_subcommand("figures", "figure data and SVG renderings");
    data_opts(figures, true);
    figures->add_option("--grid", cfg.grid, "points on the figure 2 curve")->check(CLI::Range(2, 100000));

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo recovery on synthetic selection data");
    simulate->add_option("--rho", cfg.rho, "error correlation")->check(CLI::Range(-0.999999, 0.999999));
    simulate->add_option("--sigma-u", cfg.sigma_u, "outcome error scale")->check(CLI::PositiveNumber);
    simulate->add_option("--n", cfg.n, "observations per replication")->check(CLI::Range(50L, 100000000L));
    simulate->add_option("--reps", cfg.reps, "replications")->check(CLI::Range(50, 10000000));
    simulate->add_option("--seed", cfg.seed, "random seed");
    simulate->add_option("--out", cfg.out, "output directory (stdout when omitted)");
    simulate->add_flag("--verbose", cfg.verbose, "progress messages on stderr");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*describe) return cmd_describe(cfg);
        if (*fit) return cmd_fit(cfg);
        if (*replicate) return cmd_replicate(cfg);
        if (*figures) return cmd_figures(cfg);
        if (*simulate) return cmd_simulate(cfg);
    } catch (const ParseError& e) {
        std::cerr << "error: parse: " << cfg.data << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
