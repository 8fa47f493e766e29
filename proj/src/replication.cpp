#include "heckit/replication.hpp"

#include "heckit/errors.hpp"
#include "heckit/normal.hpp"
#include "heckit/render.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace heckit {
namespace {

const std::vector<std::string> kRowOrder = {
    "cases",  "days",          "gov_response", "gdp",   "gdp_pc_ppp", "exports", "health_exp", "military_exp",
    "gov_eff", "pop_65",       "soft_power_30", "west", "china",      "russia",  "lambda",     "const"};

const std::vector<std::string> kDescriptiveCodes = {"vac_php", "cases", "days", "gov_response", "gdp", "gdp_pc_ppp",
                                                    "exports", "health_exp", "military_exp", "gov_eff", "pop_65"};

struct MeanSd {
    std::size_t n = 0;
    double mean = 0.0;
    std::optional<double> sd;
};

MeanSd mean_sd(const std::vector<double>& v) {
    MeanSd out;
    out.n = v.size();
    if (v.empty()) return out;
    double s = 0.0;
    for (double x : v) s += x;
    out.mean = s / static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - out.mean) * (x - out.mean);
        out.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
    }
    return out;
}

std::optional<Cell> coef_cell(double coef, double var) {
    Cell c;
    c.value = coef;
    if (std::isfinite(var) && var > 0.0) {
        c.se = std::sqrt(var);
        c.stars = significance_stars(coef, *c.se);
    }
    return c;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2) return std::nan("");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return std::nan("");
    return sxy / std::sqrt(sxx * syy);
}

double two_sided_p(double t) { return 2.0 * normal_cdf(-std::abs(t)); }

std::string format_coef(double coef, std::optional<double> se, Stars stars) {
    std::string s = round_fixed(coef) + std::string(to_string(stars));
    if (se) s += " (" + round_fixed(*se) + ")";
    return s;
}

}  // namespace

ModelSpec builtin_spec(int model) {
    ModelSpec s;
    s.name = "Model " + std::to_string(model);
    switch (model) {
        case 1:
            s.selection_vars = {"cases", "gov_response"};
            s.outcome_vars = {"cases", "days", "gov_response"};
            break;
        case 2:
            s.selection_vars = {"cases", "soft_power_30"};
            s.outcome_vars = {"cases", "days", "gov_eff"};
            break;
        case 3:
            s.selection_vars = {"cases", "gov_response", "exports", "health_exp", "military_exp", "soft_power_30"};
            s.outcome_vars = {"cases", "days", "gov_response", "health_exp", "military_exp"};
            break;
        case 4:
            s.selection_vars = {"cases", "gov_response", "gdp", "exports", "health_exp", "military_exp",
                                "soft_power_30"};
            s.outcome_vars = {"cases", "days", "gov_response", "gdp", "health_exp", "military_exp", "gov_eff",
                              "pop_65"};
            break;
        case 5:
            s.selection_vars = {"cases", "gov_response", "gdp_pc_ppp", "exports", "health_exp", "military_exp",
                                "soft_power_30"};
            s.outcome_vars = {"cases", "days", "gov_response", "gdp_pc_ppp", "health_exp", "military_exp",
                              "gov_eff", "pop_65"};
            break;
        default:
            throw std::invalid_argument("built-in models are numbered 1 to 5");
    }
    return s;
}

std::vector<ModelSpec> builtin_specs() {
    std::vector<ModelSpec> out;
    for (int m = 1; m <= 5; ++m) out.push_back(builtin_spec(m));
    return out;
}

SuiteFilter parse_suite_filter(std::string_view text) {
    if (text == "none") return SuiteFilter::none;
    if (text == "table3") return SuiteFilter::table3;
    if (text == "table4") return SuiteFilter::table4;
    throw std::invalid_argument("unknown filter '" + std::string(text) + "'");
}

std::vector<PercentileFilter> suite_filters(SuiteFilter filter) {
    switch (filter) {
        case SuiteFilter::none: return {};
        case SuiteFilter::table3: return {{"gov_eff", 0.05, 0.95}, {"gdp", 0.05, 0.95}};
        case SuiteFilter::table4: return {{"vac_php", 0.0, 0.95}};
    }
    return {};
}

const TableRow* TableResult::row(std::string_view code) const {
    for (const auto& r : rows) {
        if (r.code == code) return &r;
    }
    return nullptr;
}

std::optional<std::size_t> TableResult::model_column(int model, std::string_view stage) const {
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (c < column_model.size() && column_model[c] == model && column_stage[c] == stage) return c;
    }
    return std::nullopt;
}

std::optional<Cell> TableResult::cell(int model, std::string_view stage, std::string_view code) const {
    const auto c = model_column(model, stage);
    const TableRow* r = row(code);
    if (!c || !r || *c >= r->cells.size()) return std::nullopt;
    return r->cells[*c];
}

std::string display_label(std::string_view code) {
    static const std::map<std::string, std::string, std::less<>> labels = {
        {"vac_php", "Vaccinations per hundred (log)"},
        {"started", "Started vaccination"},
        {"cases", "Cases per million (log)"},
        {"days", "Days since first vaccination"},
        {"gov_response", "Government response (log)"},
        {"gdp", "GDP (log)"},
        {"gdp_pc_ppp", "GDP per capita, PPP (log)"},
        {"exports", "Exports, % of GDP (log)"},
        {"health_exp", "Health expenditure, % of GDP (log)"},
        {"military_exp", "Military expenditure, % of GDP (log)"},
        {"gov_eff", "Government effectiveness"},
        {"pop_65", "Population 65+ (log)"},
        {"soft_power_30", "Soft Power 30"},
        {"west", "Western vaccine"},
        {"china", "Chinese vaccine"},
        {"russia", "Russian vaccine"},
        {"lambda", "Inverse Mills ratio"},
        {"const", "Constant"},
    };
    auto it = labels.find(code);
    return it == labels.end() ? std::string(code) : it->second;
}

TableResult descriptive_table(const Panel& panel) {
    TableResult t;
    t.id = "table1";
    t.title = "Descriptive statistics";
    t.columns = {"All countries", "Not started", "Started"};
    t.column_model = {0, 0, 0};
    t.column_stage = {"all", "not_started", "started"};
    t.column_errors.assign(3, std::nullopt);
    t.inline_se = true;

    auto group_of = [&](const CountryRecord& r) -> std::optional<int> {
        const auto s = r.value(kStarted);
        if (!s) return std::nullopt;
        return *s == 1.0 ? 2 : 1;
    };

    for (const auto& code : kDescriptiveCodes) {
        if (!panel.schema.find(code)) continue;
        const bool raw_scale = code == "gov_response";
        std::vector<std::vector<double>> values(3);
        for (const auto& r : panel.records) {
            const auto v = raw_scale ? r.raw_value(code) : r.value(code);
            if (!v) continue;
            values[0].push_back(*v);
            if (auto g = group_of(r)) values[static_cast<std::size_t>(*g)].push_back(*v);
        }
        TableRow row;
        row.code = code;
        row.label = raw_scale ? "Government response (index)" : display_label(code);
        for (const auto& v : values) {
            if (v.empty()) {
                row.cells.emplace_back(std::nullopt);
                continue;
            }
            const MeanSd ms = mean_sd(v);
            row.cells.push_back(Cell{ms.mean, ms.sd, Stars::none});
        }
        t.rows.push_back(std::move(row));
    }
    long all = 0, no = 0, yes = 0;
    for (const auto& r : panel.records) {
        ++all;
        if (auto g = group_of(r)) (*g == 2 ? yes : no) += 1;
    }
    t.observations = {all, no, yes};
    t.notes = {"Standard deviations in parentheses.",
               "Logged variables are summarised on the log scale; government response on its index scale."};
    return t;
}

std::vector<ModelRun> fit_models(const Panel& panel, const std::vector<ModelSpec>& specs,
                                 const SuiteOptions& options) {
    std::vector<ModelRun> runs(specs.size());
    const Panel base = apply_filters(panel, options.extra_filter);
    auto run_one = [&](std::size_t i) {
        ModelRun& run = runs[i];
        run.spec = specs[i];
        try {
            const ModelFrame frame = build_model_frame(base, specs[i]);
            HeckmanOptions opts;
            opts.vcov = options.vcov;
            run.fit = fit_two_step(frame, opts);
        } catch (const Error& e) {
            run.error = e.what();
        } catch (const std::invalid_argument& e) {
            run.error = e.what();
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(specs.size())));
    if (threads == 1) {
        for (std::size_t i = 0; i < specs.size(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < specs.size(); i = next++) run_one(i);
            });
        }
        for (auto& th : pool) th.join();
    }
    return runs;
}

TableResult suite_table(const std::vector<ModelRun>& runs, std::string id, std::string title) {
    TableResult t;
    t.id = std::move(id);
    t.title = std::move(title);
    int col = 0;
    std::vector<bool> used(kRowOrder.size(), false);
    for (std::size_t m = 0; m < runs.size(); ++m) {
        const int model = static_cast<int>(m) + 1;
        for (const char* stage : {"outcome", "selection"}) {
            ++col;
            const std::string dep = std::string(stage) == "outcome" ? std::string(kVacPhp) : std::string(kStarted);
            t.columns.push_back("(" + std::to_string(col) + ") " + runs[m].spec.name + " " + dep);
            t.column_model.push_back(model);
            t.column_stage.emplace_back(stage);
            t.column_errors.push_back(runs[m].error);
            t.observations.push_back(runs[m].fit ? std::optional<long>(runs[m].fit->n_total) : std::nullopt);
        }
    }
    for (std::size_t k = 0; k < kRowOrder.size(); ++k) {
        TableRow row;
        row.code = kRowOrder[k];
        row.label = display_label(row.code);
        bool any = false;
        for (const auto& run : runs) {
            std::optional<Cell> out_cell, sel_cell;
            if (run.fit) {
                const HeckmanFit& f = *run.fit;
                for (std::size_t j = 0; j < f.outcome_columns.size(); ++j) {
                    if (f.outcome_columns[j] != row.code) continue;
                    const Index i = static_cast<Index>(j);
                    out_cell = coef_cell(f.outcome_coef(i), f.outcome_vcov(i, i));
                }
                if (f.corrected) {
                    for (std::size_t j = 0; j < f.selection_columns.size(); ++j) {
                        if (f.selection_columns[j] != row.code) continue;
                        const Index i = static_cast<Index>(j);
                        sel_cell = coef_cell(f.first_stage.coef(i), f.selection_vcov(i, i));
                    }
                }
            }
            any = any || out_cell || sel_cell;
            row.cells.push_back(out_cell);
            row.cells.push_back(sel_cell);
        }
        if (any) t.rows.push_back(std::move(row));
    }
    for (const auto& run : runs) {
        if (run.fit) {
            t.notes.push_back(run.spec.name + ": " + std::to_string(run.fit->n_total) + " observations, " +
                              std::to_string(run.fit->n_selected) + " selected.");
            for (const auto& w : run.fit->warnings) t.notes.push_back(run.spec.name + ": " + w);
        } else {
            t.notes.push_back(run.spec.name + ": " + run.error.value_or("not estimated"));
        }
    }
    return t;
}

TableResult run_model_suite(const Panel& panel, const std::vector<ModelSpec>& specs, VcovVariant vcov) {
    SuiteOptions o;
    o.vcov = vcov;
    TableResult t = suite_table(fit_models(panel, specs, o), "table2", "Two-step selection models");
    t.notes.push_back(vcov == VcovVariant::plain_robust
                          ? "Standard errors: HC1 robust (outcome), sandwich (selection)."
                          : "Standard errors: two-step corrected (outcome), information matrix (selection).");
    t.notes.emplace_back("Outcome stage includes western, Chinese and Russian vaccine indicators.");
    t.notes.emplace_back("*** p<0.01, ** p<0.05, * p<0.1");
    return t;
}

std::pair<TableResult, TableResult> run_outlier_suites(const Panel& panel, const std::vector<ModelSpec>& specs,
                                                       VcovVariant vcov) {
    auto run = [&](SuiteFilter f, std::string id, std::string title) {
        SuiteOptions o;
        o.vcov = vcov;
        o.extra_filter = suite_filters(f);
        TableResult t = suite_table(fit_models(panel, specs, o), std::move(id), std::move(title));
        t.notes.emplace_back("*** p<0.01, ** p<0.05, * p<0.1");
        return t;
    };
    return {run(SuiteFilter::table3, "table3", "Gov. effectiveness and GDP outliers (5th/95th percentile) removed"),
            run(SuiteFilter::table4, "table4", "Vaccination rate outliers (above 95th percentile) removed")};
}

std::optional<std::size_t> Series::column(std::string_view n) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == n) return i;
    }
    return std::nullopt;
}

const Series* FigureData::find(std::string_view n) const {
    for (const auto& s : series) {
        if (s.name == n) return &s;
    }
    return nullptr;
}

std::optional<double> FigureData::stat(std::string_view key) const {
    for (const auto& [k, v] : summary) {
        if (k == key) return v;
    }
    return std::nullopt;
}

FigureData correlation_matrix(const Panel& panel, const std::vector<std::string>& codes) {
    if (codes.size() < 2) throw std::invalid_argument("correlation matrix needs at least two variables");
    for (const auto& c : codes) {
        if (!panel.schema.find(c)) throw std::invalid_argument("unknown variable '" + c + "'");
    }
    FigureData f;
    f.id = "figA1";
    f.title = "Correlation matrix";
    Series s;
    s.name = "correlation";
    s.columns = codes;
    s.labels = codes;
    for (const auto& a : codes) {
        std::vector<double> row;
        for (const auto& b : codes) {
            std::vector<double> x, y;
            for (const auto& r : panel.records) {
                const auto va = r.value(a);
                const auto vb = r.value(b);
                if (va && vb) {
                    x.push_back(*va);
                    y.push_back(*vb);
                }
            }
            row.push_back(pearson(x, y));
        }
        s.rows.push_back(std::move(row));
    }
    f.series.push_back(std::move(s));
    return f;
}

FigureData gdp_boxplot_stats(const Panel& panel) {
    FigureData f;
    f.id = "fig1";
    f.title = "Log GDP by vaccination status";
    Series s;
    s.name = "boxplot";
    s.columns = {"min", "q1", "median", "q3", "max", "n"};
    std::vector<double> groups[2];
    for (const auto& r : panel.records) {
        const auto st = r.value(kStarted);
        const auto g = r.value("gdp");
        if (st && g) groups[*st == 1.0 ? 1 : 0].push_back(*g);
    }
    const char* names[2] = {"not_started", "started"};
    for (int k = 0; k < 2; ++k) {
        const auto& v = groups[k];
        s.labels.emplace_back(names[k]);
        if (v.empty()) {
            s.rows.push_back(std::vector<double>(5, std::nan("")));
            s.rows.back().push_back(0.0);
            continue;
        }
        s.rows.push_back({quantile(v, 0.0), quantile(v, 0.25), quantile(v, 0.5), quantile(v, 0.75), quantile(v, 1.0),
                          static_cast<double>(v.size())});
    }
    f.series.push_back(std::move(s));
    return f;
}

std::vector<double> log_gdp_grid(const Panel& panel, int points) {
    if (points < 2) throw std::invalid_argument("grid needs at least two points");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& r : panel.records) {
        if (auto g = r.value("gdp")) {
            lo = std::min(lo, *g);
            hi = std::max(hi, *g);
        }
    }
    if (!(lo <= hi)) throw DataError("no log GDP values in the panel");
    std::vector<double> grid;
    for (int i = 0; i < points; ++i) grid.push_back(lo + (hi - lo) * static_cast<double>(i) / (points - 1));
    return grid;
}

FigureData conditional_start_curve(const Panel& panel, const std::vector<double>& grid) {
    std::vector<const CountryRecord*> rows;
    for (const auto& r : panel.records) {
        if (r.value(kStarted) && r.value("gdp")) rows.push_back(&r);
    }
    if (rows.empty()) throw DataError("no rows with both started and gdp");
    const Index n = static_cast<Index>(rows.size());
    Vector y(n);
    Matrix x(n, 2);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (Index i = 0; i < n; ++i) {
        const auto& r = *rows[static_cast<std::size_t>(i)];
        y(i) = *r.value(kStarted);
        x(i, 0) = *r.value("gdp");
        x(i, 1) = 1.0;
        lo = std::min(lo, x(i, 0));
        hi = std::max(hi, x(i, 0));
    }
    for (double g : grid) {
        if (!(g >= lo - 1.0 && g <= hi + 1.0)) {
            throw std::invalid_argument("grid point outside the observed log GDP range +/- 1");
        }
    }
    const ProbitFit fit = probit::fit(y, x);
    const double b = fit.coef(0), a = fit.coef(1);
    const Matrix& v = fit.vcov;

    FigureData f;
    f.id = "fig2";
    f.title = "Probability of starting vaccination given log GDP";
    Series curve;
    curve.name = "curve";
    curve.columns = {"log_gdp", "probability", "lower", "upper"};
    constexpr double z95 = 1.959963984540054;
    for (double g : grid) {
        const double idx = a + b * g;
        const double se = std::sqrt(std::max(0.0, g * g * v(0, 0) + 2.0 * g * v(0, 1) + v(1, 1)));
        curve.labels.emplace_back("");
        curve.rows.push_back({g, normal_cdf(idx), normal_cdf(idx - z95 * se), normal_cdf(idx + z95 * se)});
    }
    Series points;
    points.name = "countries";
    points.columns = {"log_gdp", "started", "soft_power_30"};
    for (Index i = 0; i < n; ++i) {
        const auto& r = *rows[static_cast<std::size_t>(i)];
        points.labels.push_back(r.iso3);
        points.rows.push_back({x(i, 0), y(i), r.value("soft_power_30").value_or(std::nan(""))});
    }
    f.series.push_back(std::move(curve));
    f.series.push_back(std::move(points));
    const double se_b = std::sqrt(v(0, 0));
    f.summary = {{"intercept", a}, {"slope", b}, {"slope_se", se_b}, {"slope_p", two_sided_p(b / se_b)},
                 {"n", static_cast<double>(n)}};
    return f;
}

FigureData goveff_scatter_fit(const Panel& panel) {
    std::vector<const CountryRecord*> rows;
    for (const auto& r : panel.records) {
        if (r.value(kStarted) == 1.0 && r.value("gov_eff") && r.value(kVacPhp)) rows.push_back(&r);
    }
    if (rows.size() < 3) throw DataError("need at least three started countries with gov_eff and vac_php");
    const Index n = static_cast<Index>(rows.size());
    Vector y(n);
    Matrix x(n, 2);
    for (Index i = 0; i < n; ++i) {
        const auto& r = *rows[static_cast<std::size_t>(i)];
        x(i, 0) = *r.value("gov_eff");
        x(i, 1) = 1.0;
        y(i) = *r.value(kVacPhp);
    }
    const OlsFit o = ols(y, x, {"gov_eff", "const"});
    const double slope = o.coef(0), intercept = o.coef(1);
    const double s2 = o.resid.squaredNorm() / static_cast<double>(n - 2);
    const double xbar = x.col(0).mean();
    const double sxx = (x.col(0).array() - xbar).square().sum();
    const double se = std::sqrt(s2 / sxx);
    const double p = se > 0.0 ? two_sided_p(slope / se) : 0.0;

    FigureData f;
    f.id = "fig3";
    f.title = "Government effectiveness and log vaccinations per hundred";
    Series pts;
    pts.name = "countries";
    pts.columns = {"gov_eff", "log_vac_php"};
    for (Index i = 0; i < n; ++i) {
        pts.labels.push_back(rows[static_cast<std::size_t>(i)]->iso3);
        pts.rows.push_back({x(i, 0), y(i)});
    }
    Series line;
    line.name = "fit";
    line.columns = {"gov_eff", "log_vac_php"};
    const double lo = x.col(0).minCoeff(), hi = x.col(0).maxCoeff();
    line.labels = {"", ""};
    line.rows = {{lo, intercept + slope * lo}, {hi, intercept + slope * hi}};
    f.series.push_back(std::move(pts));
    f.series.push_back(std::move(line));
    f.summary = {{"intercept", intercept}, {"slope", slope}, {"slope_se", se}, {"slope_p", p},
                 {"n", static_cast<double>(n)}};
    return f;
}

const std::vector<ReferenceCell>& reference_cells() {
    static const std::vector<ReferenceCell> cells = [] {
        static const char* text = R"(
2 1 outcome cases 0.361 0.165 **
2 1 outcome days 0.087 0.018 ***
2 1 outcome gov_response -0.900 1.276 -
2 1 outcome const -2.022 5.632 -
2 1 selection cases 0.525 0.130 ***
2 1 selection gov_response -0.452 0.517 -
2 1 selection const -3.408 1.872 *
2 2 outcome cases 0.297 0.123 **
2 2 outcome days 0.069 0.015 ***
2 2 outcome gov_eff 0.718 0.217 ***
2 2 outcome const -5.120 1.213 ***
2 2 selection cases 0.504 0.096 ***
2 2 selection soft_power_30 2.129 0.352 ***
2 2 selection const -5.538 0.935 ***
2 3 outcome cases 0.315 0.121 ***
2 3 outcome days 0.085 0.020 ***
2 3 outcome gov_response -0.889 1.232 -
2 3 outcome health_exp -0.328 0.560 -
2 3 outcome military_exp 0.239 0.267 -
2 3 outcome const -0.878 5.597 -
2 3 selection cases 0.567 0.145 ***
2 3 selection gov_response -0.205 0.716 -
2 3 selection exports 0.320 0.309 -
2 3 selection health_exp -0.521 0.515 -
2 3 selection military_exp 0.180 0.193 -
2 3 selection soft_power_30 2.337 0.435 ***
2 3 selection const -5.519 3.423 -
2 4 outcome cases 0.304 0.146 **
2 4 outcome days 0.071 0.018 ***
2 4 outcome gov_response -0.356 1.287 -
2 4 outcome gdp -0.178 0.199 -
2 4 outcome health_exp 0.037 0.819 -
2 4 outcome military_exp 0.281 0.215 -
2 4 outcome gov_eff 0.782 0.255 ***
2 4 outcome pop_65 -0.221 0.427 -
2 4 outcome const 1.746 10.182 -
2 4 selection cases 0.469 0.120 ***
2 4 selection gov_response 0.086 0.818 -
2 4 selection gdp 0.400 0.127 ***
2 4 selection exports 1.090 0.378 ***
2 4 selection health_exp 0.044 0.555 -
2 4 selection military_exp -0.005 0.202 -
2 4 selection soft_power_30 1.224 0.487 **
2 4 selection const -19.707 6.337 ***
2 5 outcome cases 0.254 0.128 **
2 5 outcome days 0.068 0.019 ***
2 5 outcome gov_response -0.502 1.334 -
2 5 outcome gdp_pc_ppp 0.574 0.697 -
2 5 outcome health_exp -0.439 0.543 -
2 5 outcome military_exp 0.245 0.233 -
2 5 outcome gov_eff 0.335 0.525 -
2 5 outcome pop_65 -0.003 0.406 -
2 5 outcome const -6.979 6.517 -
2 5 selection cases 0.387 0.150 **
2 5 selection gov_response 0.021 0.750 -
2 5 selection gdp_pc_ppp 0.737 0.281 ***
2 5 selection exports -0.022 0.344 -
2 5 selection health_exp -0.323 0.599 -
2 5 selection military_exp 0.124 0.177 -
2 5 selection soft_power_30 1.286 0.368 ***
2 5 selection const -10.902 4.322 **
3 1 outcome cases 0.518 0.309 *
3 1 outcome days 0.083 0.024 ***
3 1 outcome gov_response -1.642 1.788 -
3 1 outcome const -1.209 9.037 -
3 1 selection cases 0.821 0.169 ***
3 1 selection gov_response -0.618 0.704 -
3 1 selection const -5.795 2.998 *
3 2 outcome cases 0.113 0.316 -
3 2 outcome days 0.065 0.018 ***
3 2 outcome gov_eff 1.405 0.454 ***
3 2 outcome const -3.442 3.466 -
3 2 selection cases 0.692 0.143 ***
3 2 selection soft_power_30 1.735 0.307 ***
3 2 selection const -7.327 1.443 ***
3 3 outcome cases 0.711 0.383 *
3 3 outcome days 0.070 0.035 **
3 3 outcome gov_response -1.537 1.656 -
3 3 outcome health_exp -1.575 0.957 *
3 3 outcome military_exp 0.040 0.347 -
3 3 outcome const 0.834 9.224 -
3 3 selection cases 0.600 0.160 ***
3 3 selection gov_response -0.187 0.808 -
3 3 selection exports 0.667 0.460 -
3 3 selection health_exp 0.214 0.594 -
3 3 selection military_exp 0.333 0.240 -
3 3 selection soft_power_30 1.599 0.355 ***
3 3 selection const -8.669 4.832 *
3 4 outcome cases 0.228 0.487 -
3 4 outcome days 0.063 0.028 **
3 4 outcome gov_response -0.824 1.749 -
3 4 outcome gdp -0.243 0.237 -
3 4 outcome health_exp -1.134 1.413 -
3 4 outcome military_exp 0.040 0.258 -
3 4 outcome gov_eff 1.447 0.535 ***
3 4 outcome pop_65 -0.166 0.473 -
3 4 outcome const 8.852 13.238 -
3 4 selection cases 0.504 0.136 ***
3 4 selection gov_response 0.120 0.915 -
3 4 selection gdp 0.313 0.140 **
3 4 selection exports 1.284 0.561 **
3 4 selection health_exp 0.560 0.680 -
3 4 selection military_exp 0.159 0.231 -
3 4 selection soft_power_30 0.879 0.525 *
3 4 selection const -19.759 8.104 **
4 1 outcome cases 0.425 0.145 ***
4 1 outcome days 0.088 0.016 ***
4 1 outcome gov_response -0.490 1.081 -
4 1 outcome const -4.431 4.492 -
4 1 selection cases 0.516 0.130 ***
4 1 selection gov_response -0.403 0.511 -
4 1 selection const -3.545 1.870 *
4 2 outcome cases 0.290 0.105 ***
4 2 outcome days 0.070 0.013 ***
4 2 outcome gov_eff 0.573 0.182 ***
4 2 outcome const -4.660 1.063 ***
4 2 selection cases 0.496 0.099 ***
4 2 selection soft_power_30 2.197 0.352 ***
4 2 selection const -5.526 0.966 ***
4 3 outcome cases 0.284 0.115 **
4 3 outcome days 0.079 0.018 ***
4 3 outcome gov_response -0.250 1.017 -
4 3 outcome health_exp 0.195 0.473 -
4 3 outcome military_exp 0.076 0.199 -
4 3 outcome const -3.570 4.507 -
4 3 selection cases 0.556 0.142 ***
4 3 selection gov_response -0.084 0.732 -
4 3 selection health_exp -0.497 0.518 -
4 3 selection military_exp 0.158 0.202 -
4 3 selection soft_power_30 2.407 0.416 ***
4 3 selection const -5.856 3.602 -
4 4 outcome cases 0.331 0.092 ***
4 4 outcome days 0.064 0.017 ***
4 4 outcome gov_response 1.091 0.982 -
4 4 outcome gdp 0.042 0.101 -
4 4 outcome exports 0.276 0.298 -
4 4 outcome health_exp -0.583 0.591 -
4 4 outcome military_exp 0.265 0.161 -
4 4 outcome gov_eff 0.519 0.217 **
4 4 outcome pop_65 0.633 0.315 **
4 4 outcome const -11.672 5.432 **
4 4 selection cases 0.488 0.125 ***
4 4 selection gov_response 0.242 0.881 -
4 4 selection gdp 0.498 0.118 ***
4 4 selection exports 1.163 0.454 **
4 4 selection health_exp 0.107 0.605 -
4 4 selection military_exp -0.020 0.215 -
4 4 selection soft_power_30 1.191 0.488 **
4 4 selection const -23.542 6.985 ***
)";
        std::vector<ReferenceCell> out;
        std::istringstream in(text);
        ReferenceCell c;
        std::string stars;
        while (in >> c.table >> c.model >> c.stage >> c.code >> c.coef >> c.se >> stars) {
            c.stars = stars == "***" ? Stars::three : stars == "**" ? Stars::two : stars == "*" ? Stars::one : Stars::none;
            out.push_back(c);
        }
        return out;
    }();
    return cells;
}

const std::vector<ReferenceSummary>& reference_descriptives() {
    static const std::vector<ReferenceSummary> rows = {
        {"vac_php", 0.55, 1.57, std::nullopt, std::nullopt, 0.55, 1.57},
        {"cases", 8.47, 2.31, 7.75, 2.28, 10.21, 1.17},
        {"days", 27.11, 10.24, std::nullopt, std::nullopt, 27.11, 10.24},
        {"gov_response", 57.22, 11.56, 56.83, 12.76, 58.0, 8.70},
        {"gdp", 25.05, 2.24, 24.32, 2.04, 26.67, 1.76},
        {"gdp_pc_ppp", 9.41, 1.16, 8.92, 1.02, 10.49, 0.61},
        {"exports", 3.57, 0.61, 3.45, 0.58, 3.84, 0.61},
        {"health_exp", 1.77, 0.43, 1.69, 0.44, 1.97, 0.36},
        {"military_exp", 0.39, 0.92, 0.33, 1.03, 0.51, 0.67},
        {"gov_eff", -0.05, 0.99, -0.43, 0.84, 0.83, 0.74},
        {"pop_65", 0.55, 0.46, 0.41, 0.38, 0.86, 0.48},
    };
    return rows;
}

std::optional<long> reference_observations(int table, int model) {
    static const std::map<std::pair<int, int>, long> counts = {
        {{2, 1}, 165}, {{2, 2}, 187}, {{2, 3}, 151}, {{2, 4}, 148}, {{2, 5}, 148},
        {{3, 1}, 131}, {{3, 2}, 142}, {{3, 3}, 123}, {{3, 4}, 123},
        {{4, 1}, 162}, {{4, 2}, 184}, {{4, 3}, 148}, {{4, 4}, 145}};
    auto it = counts.find({table, model});
    if (it == counts.end()) return std::nullopt;
    return it->second;
}

ReplicationTables run_replication(const Panel& panel, VcovVariant vcov) {
    ReplicationTables t;
    t.table1 = descriptive_table(panel);
    const auto specs = builtin_specs();
    t.table2 = run_model_suite(panel, specs, vcov);
    const VcovVariant other =
        vcov == VcovVariant::plain_robust ? VcovVariant::heckman_corrected : VcovVariant::plain_robust;
    t.table2_alt = run_model_suite(panel, specs, other);
    t.table2_alt.id = "table2_" + std::string(to_string(other));
    const std::vector<ModelSpec> first_four(specs.begin(), specs.begin() + 4);
    auto [t3, t4] = run_outlier_suites(panel, first_four, vcov);
    t.table3 = std::move(t3);
    t.table4 = std::move(t4);
    return t;
}

std::string replication_diff_report(const Panel& panel, const ReplicationTables& tables) {
    std::ostringstream out;
    out << "# Replication diff\n\n";
    out << "Reference values are the published estimates; computed values come from the shipped snapshot.\n";
    out << "Acceptance is judged on sign and significance pattern, not on exact equality.\n\n";

    out << "## Table 1: descriptive statistics\n\n";
    out << "| variable | group | reference mean (sd) | computed mean (sd) | mean difference |\n";
    out << "|---|---|---|---|---|\n";
    const char* groups[3] = {"all", "not started", "started"};
    for (const auto& ref : reference_descriptives()) {
        const TableRow* row = tables.table1.row(ref.code);
        const std::optional<double> means[3] = {ref.all_mean, ref.no_mean, ref.yes_mean};
        const std::optional<double> sds[3] = {ref.all_sd, ref.no_sd, ref.yes_sd};
        for (int g = 0; g < 3; ++g) {
            if (!means[g]) continue;
            std::optional<Cell> c;
            if (row && row->cells.size() > static_cast<std::size_t>(g)) c = row->cells[static_cast<std::size_t>(g)];
            out << "| " << ref.code << " | " << groups[g] << " | " << round_fixed(*means[g], 2) << " ("
                << round_fixed(*sds[g], 2) << ") | ";
            if (c) {
                out << round_fixed(c->value, 2);
                if (c->se) out << " (" << round_fixed(*c->se, 2) << ")";
                out << " | " << round_fixed(c->value - *means[g], 2) << " |\n";
            } else {
                out << "missing | |\n";
            }
        }
    }
    out << "\n| count | reference | computed |\n|---|---|---|\n";
    const long ref_counts[3] = {189, 133, 56};
    for (int g = 0; g < 3; ++g) {
        const auto& obs = tables.table1.observations;
        out << "| " << groups[g] << " | " << ref_counts[g] << " | "
            << (obs.size() > static_cast<std::size_t>(g) && obs[static_cast<std::size_t>(g)]
                    ? std::to_string(*obs[static_cast<std::size_t>(g)])
                    : std::string("missing"))
            << " |\n";
    }

    const FigureData corr = correlation_matrix(panel, {"gov_eff", "gdp_pc_ppp"});
    out << "\n## Correlation of gov_eff and gdp_pc_ppp\n\n";
    out << "reference 0.83, computed " << round_fixed(corr.series[0].rows[0][1]) << "\n";

    const TableResult* suites[3] = {&tables.table2, &tables.table3, &tables.table4};
    for (int t = 2; t <= 4; ++t) {
        const TableResult& table = *suites[t - 2];
        out << "\n## Table " << t << ": " << table.title << "\n\n";
        out << "| model | reference N | computed N |\n|---|---|---|\n";
        for (int m = 1; m <= (t == 2 ? 5 : 4); ++m) {
            const auto col = table.model_column(m, "outcome");
            std::string computed = "error";
            if (col && table.observations[*col]) computed = std::to_string(*table.observations[*col]);
            out << "| " << m << " | " << reference_observations(t, m).value_or(0) << " | " << computed << " |\n";
        }
        out << "\n| model | stage | variable | reference | computed | sign | stars |";
        if (t == 2) out << " computed, alternative s.e. |";
        out << "\n|---|---|---|---|---|---|---|" << (t == 2 ? "---|" : "") << "\n";
        int sign_ok = 0, star_ok = 0, total = 0;
        for (const auto& ref : reference_cells()) {
            if (ref.table != t) continue;
            const auto c = table.cell(ref.model, ref.stage, ref.code);
            out << "| " << ref.model << " | " << ref.stage << " | " << ref.code << " | "
                << format_coef(ref.coef, ref.se, ref.stars) << " | ";
            ++total;
            if (!c) {
                out << "not estimated | | |";
                if (t == 2) out << " |";
                out << "\n";
                continue;
            }
            const bool same_sign = (c->value > 0) == (ref.coef > 0);
            const bool same_stars = c->stars == ref.stars;
            sign_ok += same_sign;
            star_ok += same_stars;
            out << format_coef(c->value, c->se, c->stars) << " | " << (same_sign ? "yes" : "no") << " | "
                << (same_stars ? "yes" : "no") << " |";
            if (t == 2) {
                const auto alt = tables.table2_alt.cell(ref.model, ref.stage, ref.code);
                out << " " << (alt ? format_coef(alt->value, alt->se, alt->stars) : std::string("")) << " |";
            }
            out << "\n";
        }
        out << "\nSign agreement " << sign_ok << "/" << total << ", star agreement " << star_ok << "/" << total
            << ".\n";
        for (std::size_t c = 0; c < table.column_errors.size(); ++c) {
            if (table.column_errors[c]) out << "\nError in " << table.columns[c] << ": " << *table.column_errors[c] << "\n";
        }
    }
    return out.str();
}

}  // namespace heckit
