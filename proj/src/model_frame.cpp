#include "heckit/model_frame.hpp"

#include "heckit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <utility>

namespace heckit {
namespace {

bool contains(const std::vector<std::string>& v, std::string_view s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

void require_unique(const std::vector<std::string>& v, const std::string& stage) {
    std::set<std::string> seen;
    for (const auto& c : v) {
        if (!seen.insert(c).second) throw std::invalid_argument(stage + " variable '" + c + "' listed twice");
    }
}

}  // namespace

void validate_spec(const ModelSpec& spec) {
    require_unique(spec.selection_vars, "selection");
    require_unique(spec.outcome_vars, "outcome");
    if (contains(spec.selection_vars, "days")) throw std::invalid_argument("days cannot enter the selection stage");
    if (contains(spec.selection_vars, "gov_eff")) throw std::invalid_argument("gov_eff cannot enter the selection stage");
    if (contains(spec.outcome_vars, "soft_power_30")) {
        throw std::invalid_argument("soft_power_30 cannot enter the outcome stage");
    }
    for (const auto& f : spec.panel_filter) {
        if (!(f.low_p < f.high_p)) throw std::invalid_argument("filter on " + f.code + " requires low_p < high_p");
    }
}

Panel apply_filters(const Panel& panel, const std::vector<PercentileFilter>& filters) {
    Panel out = panel;
    for (const auto& f : filters) out = filter_percentile(out, f.code, f.low_p, f.high_p);
    return out;
}

void validate_frame(const ModelFrame& f) {
    const Index n = f.selection_x.rows();
    if (n == 0) throw DataError("model frame has no rows");
    if (f.selection_y.size() != n || static_cast<Index>(f.selection_rows.size()) != n) {
        throw std::invalid_argument("selection stage dimensions disagree");
    }
    if (static_cast<Index>(f.selection_columns.size()) != f.selection_x.cols()) {
        throw std::invalid_argument("selection column labels disagree with the matrix");
    }
    const Index m = f.outcome_x.rows();
    if (f.outcome_y.size() != m || static_cast<Index>(f.outcome_rows.size()) != m ||
        static_cast<Index>(f.selected.size()) != m) {
        throw std::invalid_argument("outcome stage dimensions disagree");
    }
    if (static_cast<Index>(f.outcome_columns.size()) != f.outcome_x.cols()) {
        throw std::invalid_argument("outcome column labels disagree with the matrix");
    }
    if (!f.selection_x.allFinite() || !f.selection_y.allFinite() || !f.outcome_x.allFinite() ||
        !f.outcome_y.allFinite()) {
        throw DataError("model frame contains missing or non-finite values");
    }
    Index k = 0;
    for (Index i = 0; i < n; ++i) {
        const double v = f.selection_y(i);
        if (v != 0.0 && v != 1.0) throw DataError("selection indicator must be 0 or 1");
        if (v == 1.0) {
            if (k >= m || f.selected[static_cast<std::size_t>(k)] != i) {
                throw std::invalid_argument("outcome rows must be exactly the selected rows, in order");
            }
            ++k;
        }
    }
    if (k != m) throw std::invalid_argument("outcome rows must be exactly the selected rows, in order");
    require_full_rank(f.selection_x, f.selection_columns);
    if (m > 0) require_full_rank(f.outcome_x, f.outcome_columns);
}

ModelFrame build_model_frame(const Panel& panel, const ModelSpec& spec) {
    validate_spec(spec);
    const Panel filtered = apply_filters(panel, spec.panel_filter);

    std::vector<std::string> outcome_cols = spec.outcome_vars;
    if (spec.include_vaccine_dummies) {
        for (const auto& d : kVaccineDummies) {
            if (!contains(outcome_cols, d)) outcome_cols.push_back(d);
        }
    }
    for (const auto* list : {&spec.selection_vars, &std::as_const(outcome_cols)}) {
        for (const auto& c : *list) {
            if (!filtered.schema.find(c)) throw SchemaError("unknown variable '" + c + "' in " + spec.name);
        }
    }
    for (const auto& c : {spec.indicator, spec.outcome}) {
        if (!filtered.schema.find(c)) throw SchemaError("unknown variable '" + c + "' in " + spec.name);
    }

    auto complete = [](const CountryRecord& r, const std::vector<std::string>& codes) {
        return std::all_of(codes.begin(), codes.end(), [&](const std::string& c) { return r.value(c).has_value(); });
    };

    std::vector<const CountryRecord*> rows;
    for (const auto& r : filtered.records) {
        const auto v = r.value(spec.indicator);
        if (!v || !complete(r, spec.selection_vars)) continue;
        if (*v == 1.0 && (!complete(r, outcome_cols) || !r.value(spec.outcome))) continue;
        rows.push_back(&r);
    }
    if (rows.empty()) throw DataError("no usable rows for " + spec.name);
    // Canonical row order: by iso3.
    std::sort(rows.begin(), rows.end(), [](const CountryRecord* a, const CountryRecord* b) { return a->iso3 < b->iso3; });

    ModelFrame f;
    f.selection_columns = spec.selection_vars;
    f.selection_columns.push_back("const");
    f.outcome_columns = outcome_cols;
    f.outcome_columns.push_back("const");

    const Index n = static_cast<Index>(rows.size());
    const Index ks = static_cast<Index>(f.selection_columns.size());
    const Index ko = static_cast<Index>(f.outcome_columns.size());
    f.selection_y.resize(n);
    f.selection_x.resize(n, ks);
    Index m = 0;
    for (Index i = 0; i < n; ++i) {
        const auto& r = *rows[static_cast<std::size_t>(i)];
        f.selection_y(i) = *r.value(spec.indicator);
        for (Index j = 0; j + 1 < ks; ++j) f.selection_x(i, j) = *r.value(spec.selection_vars[static_cast<std::size_t>(j)]);
        f.selection_x(i, ks - 1) = 1.0;
        f.selection_rows.push_back(r.iso3);
        if (f.selection_y(i) == 1.0) ++m;
    }
    if (m == 0) throw DataError("no selected rows for " + spec.name);

    f.outcome_y.resize(m);
    f.outcome_x.resize(m, ko);
    Index k = 0;
    for (Index i = 0; i < n; ++i) {
        if (f.selection_y(i) != 1.0) continue;
        const auto& r = *rows[static_cast<std::size_t>(i)];
        f.outcome_y(k) = *r.value(spec.outcome);
        for (Index j = 0; j + 1 < ko; ++j) f.outcome_x(k, j) = *r.value(outcome_cols[static_cast<std::size_t>(j)]);
        f.outcome_x(k, ko - 1) = 1.0;
        f.outcome_rows.push_back(r.iso3);
        f.selected.push_back(i);
        ++k;
    }

    require_full_rank(f.selection_x, f.selection_columns);
    require_full_rank(f.outcome_x, f.outcome_columns);
    return f;
}

}  // namespace heckit
