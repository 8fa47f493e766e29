#include "heckit/errors.hpp"
#include "heckit/heckman.hpp"
#include "heckit/model_frame.hpp"
#include "heckit/replication.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>

using namespace heckit;
using heckit::testing::snapshot;

TEST(BuildModelFrame, PublishedRowCounts) {
    const std::map<int, Index> rows = {{1, 165}, {2, 187}, {3, 151}, {4, 148}, {5, 148}};
    for (const auto& [model, n] : rows) {
        const ModelFrame f = build_model_frame(snapshot(), builtin_spec(model));
        EXPECT_EQ(f.n_total(), n) << "model " << model;
        EXPECT_NO_THROW(validate_frame(f));
    }
}

TEST(BuildModelFrame, OutcomeRowsAreTheSelectedRows) {
    const ModelFrame f = build_model_frame(snapshot(), builtin_spec(3));
    Index k = 0;
    for (Index i = 0; i < f.n_total(); ++i) {
        if (f.selection_y(i) != 1.0) continue;
        EXPECT_EQ(f.selected[static_cast<std::size_t>(k)], i);
        EXPECT_EQ(f.outcome_rows[static_cast<std::size_t>(k)], f.selection_rows[static_cast<std::size_t>(i)]);
        ++k;
    }
    EXPECT_EQ(k, f.n_selected());
    EXPECT_EQ(f.selection_columns.back(), "const");
    EXPECT_EQ(f.outcome_columns.back(), "const");
    EXPECT_TRUE((f.selection_x.col(f.selection_x.cols() - 1).array() == 1.0).all());
}

TEST(BuildModelFrame, DummiesOnlyInOutcomeStage) {
    const ModelFrame f = build_model_frame(snapshot(), builtin_spec(2));
    for (const auto& d : kVaccineDummies) {
        EXPECT_EQ(std::count(f.selection_columns.begin(), f.selection_columns.end(), d), 0);
        EXPECT_EQ(std::count(f.outcome_columns.begin(), f.outcome_columns.end(), d), 1);
    }
}

TEST(BuildModelFrame, UnknownVariableIsSchemaError) {
    ModelSpec spec = builtin_spec(1);
    spec.selection_vars.push_back("moon_phase");
    EXPECT_THROW(build_model_frame(snapshot(), spec), SchemaError);
}

TEST(BuildModelFrame, CollinearColumnsNamed) {
    Panel p = snapshot();
    for (auto& r : p.records) r.values["exports"] = r.values["cases"];
    ModelSpec spec = builtin_spec(1);
    spec.selection_vars.push_back("exports");
    try {
        build_model_frame(p, spec);
        FAIL() << "expected RankDeficientError";
    } catch (const RankDeficientError& e) {
        EXPECT_EQ(e.columns(), std::vector<std::string>{"exports"});
    }
}

TEST(ValidateSpec, ExclusionPattern) {
    ModelSpec spec = builtin_spec(2);
    spec.selection_vars.push_back("days");
    EXPECT_THROW(validate_spec(spec), std::invalid_argument);
    spec = builtin_spec(2);
    spec.selection_vars.push_back("gov_eff");
    EXPECT_THROW(validate_spec(spec), std::invalid_argument);
    spec = builtin_spec(2);
    spec.outcome_vars.push_back("soft_power_30");
    EXPECT_THROW(validate_spec(spec), std::invalid_argument);
    spec = builtin_spec(2);
    spec.outcome_vars.push_back("cases");
    EXPECT_THROW(validate_spec(spec), std::invalid_argument);
    for (const auto& s : builtin_specs()) EXPECT_NO_THROW(validate_spec(s));
}

TEST(BuildModelFrame, AddingAVariableNeverIncreasesRows) {
    const std::vector<std::string> extra_sel = {"gov_response", "gdp", "gdp_pc_ppp", "exports", "health_exp",
                                                "military_exp", "soft_power_30"};
    const std::vector<std::string> extra_out = {"days", "gov_response", "gdp", "gov_eff", "pop_65", "health_exp"};
    for (int model = 1; model <= 5; ++model) {
        const ModelSpec base = builtin_spec(model);
        const Index n0 = build_model_frame(snapshot(), base).n_total();
        for (const auto& v : extra_sel) {
            if (std::count(base.selection_vars.begin(), base.selection_vars.end(), v)) continue;
            ModelSpec s = base;
            s.selection_vars.push_back(v);
            try {
                EXPECT_LE(build_model_frame(snapshot(), s).n_total(), n0) << model << " + " << v;
            } catch (const RankDeficientError&) {
            }
        }
        for (const auto& v : extra_out) {
            if (std::count(base.outcome_vars.begin(), base.outcome_vars.end(), v)) continue;
            ModelSpec s = base;
            s.outcome_vars.push_back(v);
            try {
                EXPECT_LE(build_model_frame(snapshot(), s).n_total(), n0) << model << " + " << v;
            } catch (const RankDeficientError&) {
            }
        }
    }
}

TEST(BuildModelFrame, OrderInvariant) {
    Panel shuffled = snapshot();
    std::mt19937_64 gen(5);
    for (int model = 1; model <= 5; ++model) {
        std::shuffle(shuffled.records.begin(), shuffled.records.end(), gen);
        const ModelFrame a = build_model_frame(snapshot(), builtin_spec(model));
        const ModelFrame b = build_model_frame(shuffled, builtin_spec(model));
        ASSERT_EQ(a.n_total(), b.n_total());
        ASSERT_EQ(a.n_selected(), b.n_selected());
        std::map<std::string, Index> pos;
        for (Index i = 0; i < b.n_total(); ++i) pos[b.selection_rows[static_cast<std::size_t>(i)]] = i;
        for (Index i = 0; i < a.n_total(); ++i) {
            const Index j = pos.at(a.selection_rows[static_cast<std::size_t>(i)]);
            EXPECT_EQ(a.selection_x.row(i), b.selection_x.row(j));
            EXPECT_EQ(a.selection_y(i), b.selection_y(j));
        }
        for (auto variant : {VcovVariant::plain_robust, VcovVariant::heckman_corrected}) {
            HeckmanOptions opts;
            opts.vcov = variant;
            const HeckmanFit fa = fit_two_step(a, opts);
            const HeckmanFit fb = fit_two_step(b, opts);
            EXPECT_LT((fa.outcome_coef - fb.outcome_coef).cwiseAbs().maxCoeff(), 1e-10) << model;
            EXPECT_LT((fa.first_stage.coef - fb.first_stage.coef).cwiseAbs().maxCoeff(), 1e-10) << model;
            EXPECT_LT((fa.outcome_vcov - fb.outcome_vcov).cwiseAbs().maxCoeff(), 1e-10) << model;
            EXPECT_LT((fa.selection_vcov - fb.selection_vcov).cwiseAbs().maxCoeff(), 1e-10) << model;
        }
    }
}

TEST(ApplyFilters, PublishedFilteredCounts) {
    const ModelFrame t3 = build_model_frame(apply_filters(snapshot(), suite_filters(SuiteFilter::table3)),
                                            builtin_spec(1));
    EXPECT_EQ(t3.n_total(), 131);
    const ModelFrame t4 = build_model_frame(apply_filters(snapshot(), suite_filters(SuiteFilter::table4)),
                                            builtin_spec(1));
    EXPECT_EQ(t4.n_total(), 162);
}
