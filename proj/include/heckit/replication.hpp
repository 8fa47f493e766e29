#pragma once

#include "heckit/heckman.hpp"
#include "heckit/model_frame.hpp"
#include "heckit/panel.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace heckit {

// Models 1 to 5.
ModelSpec builtin_spec(int model);
std::vector<ModelSpec> builtin_specs();

enum class SuiteFilter { none, table3, table4 };

SuiteFilter parse_suite_filter(std::string_view text);
std::vector<PercentileFilter> suite_filters(SuiteFilter filter);

struct Cell {
    double value = 0.0;
    std::optional<double> se;
    Stars stars = Stars::none;
};

struct TableRow {
    std::string code;
    std::string label;
    std::vector<std::optional<Cell>> cells;
};

struct TableResult {
    std::string id;
    std::string title;
    std::vector<std::string> columns;
    std::vector<int> column_model;          // model number per column, 0 when not a model column
    std::vector<std::string> column_stage;  // "outcome", "selection" or a group name
    std::vector<TableRow> rows;
    std::vector<std::optional<long>> observations;
    std::vector<std::optional<std::string>> column_errors;
    std::vector<std::string> notes;
    bool inline_se = false;  // render "value (se)" in one cell

    const TableRow* row(std::string_view code) const;
    // Column index of a model's outcome (stage "outcome") or selection (stage "selection") column.
    std::optional<std::size_t> model_column(int model, std::string_view stage) const;
    std::optional<Cell> cell(int model, std::string_view stage, std::string_view code) const;
};

std::string display_label(std::string_view code);

TableResult descriptive_table(const Panel& panel);

struct SuiteOptions {
    VcovVariant vcov = VcovVariant::plain_robust;
    std::vector<PercentileFilter> extra_filter;
    unsigned threads = 1;
};

struct ModelRun {
    ModelSpec spec;
    std::optional<HeckmanFit> fit;
    std::optional<std::string> error;
};

// One fit per spec, in spec order; failures are recorded rather than thrown.
std::vector<ModelRun> fit_models(const Panel& panel, const std::vector<ModelSpec>& specs, const SuiteOptions& options);

TableResult suite_table(const std::vector<ModelRun>& runs, std::string id, std::string title);

TableResult run_model_suite(const Panel& panel, const std::vector<ModelSpec>& specs,
                            VcovVariant vcov = VcovVariant::plain_robust);

// Table 3 filters gov_eff then gdp at (0.05, 0.95); Table 4 filters vac_php at (0, 0.95).
std::pair<TableResult, TableResult> run_outlier_suites(const Panel& panel, const std::vector<ModelSpec>& specs,
                                                       VcovVariant vcov = VcovVariant::plain_robust);

struct Series {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::string> labels;
    std::vector<std::vector<double>> rows;

    std::optional<std::size_t> column(std::string_view name) const;
};

struct FigureData {
    std::string id;
    std::string title;
    std::vector<Series> series;
    std::vector<std::pair<std::string, double>> summary;

    const Series* find(std::string_view name) const;
    std::optional<double> stat(std::string_view key) const;
};

FigureData correlation_matrix(const Panel& panel, const std::vector<std::string>& codes);
FigureData gdp_boxplot_stats(const Panel& panel);
FigureData conditional_start_curve(const Panel& panel, const std::vector<double>& grid);
FigureData goveff_scatter_fit(const Panel& panel);

// Evenly spaced points over the observed log GDP range.
std::vector<double> log_gdp_grid(const Panel& panel, int points);

inline const std::vector<std::string> kCorrelationCodes = {
    "vac_php", "cases", "days", "gov_response", "gdp", "gdp_pc_ppp", "exports",
    "health_exp", "military_exp", "gov_eff", "pop_65", "soft_power_30"};

struct ReferenceCell {
    int table = 0;
    int model = 0;
    std::string stage;
    std::string code;
    double coef = 0.0;
    double se = 0.0;
    Stars stars = Stars::none;
};

// Published coefficient estimates for Tables 2 to 4.
const std::vector<ReferenceCell>& reference_cells();

struct ReferenceSummary {
    std::string code;
    std::optional<double> all_mean, all_sd, no_mean, no_sd, yes_mean, yes_sd;
};

// Published descriptive statistics for Table 1.
const std::vector<ReferenceSummary>& reference_descriptives();

// Published observation counts; table 2 to 4, model 1 to 5.
std::optional<long> reference_observations(int table, int model);

struct ReplicationTables {
    TableResult table1;
    TableResult table2;
    TableResult table2_alt;  // the other covariance variant
    TableResult table3;
    TableResult table4;
};

ReplicationTables run_replication(const Panel& panel, VcovVariant vcov);

// Markdown listing reference against computed value for every published cell.
std::string replication_diff_report(const Panel& panel, const ReplicationTables& tables);

}  // namespace heckit
