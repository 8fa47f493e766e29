#include "heckit/errors.hpp"
#include "heckit/heckman.hpp"
#include "heckit/normal.hpp"
#include "heckit/replication.hpp"
#include "heckit/synth.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>

using namespace heckit;

namespace {

synth::SyntheticSample sample(std::uint64_t stream, double rho = 0.5, Index n = 2000) {
    auto c = synth::default_config();
    c.rho = rho;
    c.n = n;
    c.seed = 99;
    c.stream = stream;
    return synth::generate(c);
}

Matrix hc1_by_loops(const Matrix& x, const Vector& e) {
    const Index n = x.rows(), k = x.cols();
    Matrix xtx = Matrix::Zero(k, k), meat = Matrix::Zero(k, k);
    for (Index i = 0; i < n; ++i) {
        for (Index a = 0; a < k; ++a) {
            for (Index b = 0; b < k; ++b) {
                xtx(a, b) += x(i, a) * x(i, b);
                meat(a, b) += e(i) * e(i) * x(i, a) * x(i, b);
            }
        }
    }
    const Matrix inv = xtx.inverse();
    return inv * meat * inv * (static_cast<double>(n) / static_cast<double>(n - k));
}

ModelFrame permuted(const ModelFrame& f, std::uint64_t seed) {
    std::vector<Index> perm(static_cast<std::size_t>(f.n_total()));
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 gen(seed);
    std::shuffle(perm.begin(), perm.end(), gen);
    ModelFrame g;
    g.selection_columns = f.selection_columns;
    g.outcome_columns = f.outcome_columns;
    g.selection_y.resize(f.n_total());
    g.selection_x.resize(f.n_total(), f.selection_x.cols());
    std::vector<Index> outcome_of(static_cast<std::size_t>(f.n_total()), -1);
    for (std::size_t k = 0; k < f.selected.size(); ++k) outcome_of[static_cast<std::size_t>(f.selected[k])] = static_cast<Index>(k);
    std::vector<Index> picks;
    for (Index i = 0; i < f.n_total(); ++i) {
        const Index src = perm[static_cast<std::size_t>(i)];
        g.selection_y(i) = f.selection_y(src);
        g.selection_x.row(i) = f.selection_x.row(src);
        g.selection_rows.push_back(f.selection_rows[static_cast<std::size_t>(src)]);
        if (f.selection_y(src) == 1.0) {
            picks.push_back(outcome_of[static_cast<std::size_t>(src)]);
            g.selected.push_back(i);
        }
    }
    g.outcome_y.resize(f.n_selected());
    g.outcome_x.resize(f.n_selected(), f.outcome_x.cols());
    for (std::size_t k = 0; k < picks.size(); ++k) {
        g.outcome_y(static_cast<Index>(k)) = f.outcome_y(picks[k]);
        g.outcome_x.row(static_cast<Index>(k)) = f.outcome_x.row(picks[k]);
        g.outcome_rows.push_back(f.outcome_rows[static_cast<std::size_t>(picks[k])]);
    }
    return g;
}

}  // namespace

TEST(Ols, Examples) {
    Matrix x(4, 2);
    x << 1, 1, 2, 1, 3, 1, 4, 1;
    Vector y = 2.0 * x.col(0);
    OlsFit f = ols(y, x);
    EXPECT_NEAR(f.coef(0), 2.0, 1e-14);
    EXPECT_NEAR(f.coef(1), 0.0, 1e-14);
    y.setConstant(5.0);
    f = ols(y, x);
    EXPECT_NEAR(f.coef(0), 0.0, 1e-14);
    EXPECT_NEAR(f.coef(1), 5.0, 1e-14);
}

TEST(Ols, MatchesNormalEquations) {
    std::mt19937_64 gen(4);
    std::normal_distribution<double> nd;
    for (int t = 0; t < 20; ++t) {
        Matrix x(20, 3);
        Vector y(20);
        for (Index i = 0; i < 20; ++i) {
            x(i, 0) = nd(gen);
            x(i, 1) = nd(gen);
            x(i, 2) = 1.0;
            y(i) = nd(gen);
        }
        const OlsFit f = ols(y, x);
        const Vector ne = (x.transpose() * x).inverse() * (x.transpose() * y);
        EXPECT_LT((f.coef - ne).cwiseAbs().maxCoeff(), 1e-9);
        EXPECT_LT((x.transpose() * f.resid).cwiseAbs().maxCoeff(), 1e-8);
    }
}

TEST(Ols, Errors) {
    Matrix x(4, 3);
    x << 1, 2, 1, 2, 4, 1, 3, 6, 1, 5, 10, 1;
    Vector y(4);
    y << 1, 2, 3, 4;
    try {
        ols(y, x, {"a", "b", "const"});
        FAIL();
    } catch (const RankDeficientError& e) {
        EXPECT_EQ(e.columns(), std::vector<std::string>{"b"});
    }
    EXPECT_THROW(ols(y.head(3), Matrix::Random(3, 3)), DataError);
}

TEST(VcovVariant, ParseAndName) {
    EXPECT_EQ(parse_vcov_variant("robust"), VcovVariant::plain_robust);
    EXPECT_EQ(parse_vcov_variant("heckman"), VcovVariant::heckman_corrected);
    EXPECT_EQ(to_string(VcovVariant::heckman_corrected), "heckman");
    EXPECT_THROW(parse_vcov_variant("hc3"), std::invalid_argument);
}

TEST(FitTwoStep, StructureOnSyntheticData) {
    const auto s = sample(0);
    for (auto variant : {VcovVariant::plain_robust, VcovVariant::heckman_corrected}) {
        HeckmanOptions o;
        o.vcov = variant;
        const HeckmanFit f = fit_two_step(s.frame, o);
        EXPECT_TRUE(f.corrected);
        EXPECT_EQ(f.variant, variant);
        EXPECT_LE(f.n_selected, f.n_total);
        EXPECT_EQ(f.outcome_coef.size(), s.frame.outcome_x.cols() + 1);
        EXPECT_EQ(f.outcome_columns.back(), "lambda");
        EXPECT_EQ(f.imr_coef, f.outcome_coef(f.outcome_coef.size() - 1));
        EXPECT_EQ(f.outcome_vcov, f.outcome_vcov.transpose());
        EXPECT_TRUE((f.outcome_vcov.diagonal().array() > 0).all());
        EXPECT_TRUE((f.selection_vcov.diagonal().array() > 0).all());
        for (Index i = 0; i < f.n_selected; ++i) {
            const double z = s.frame.selection_x.row(s.frame.selected[static_cast<std::size_t>(i)]).dot(f.first_stage.coef);
            EXPECT_EQ(f.lambda(i), inverse_mills(z));
        }
        EXPECT_LT((f.design.transpose() * f.residuals).cwiseAbs().maxCoeff(), 1e-8);
    }
}

TEST(FitTwoStep, SelectionVcovFollowsVariant) {
    const auto s = sample(1);
    HeckmanOptions o;
    const HeckmanFit robust = fit_two_step(s.frame, o);
    EXPECT_EQ(robust.selection_vcov, probit::sandwich_vcov(robust.first_stage, s.frame.selection_y, s.frame.selection_x));
    o.vcov = VcovVariant::heckman_corrected;
    const HeckmanFit corrected = fit_two_step(s.frame, o);
    EXPECT_EQ(corrected.selection_vcov, corrected.first_stage.vcov);
}

TEST(FitTwoStep, AllSelectedDegradesToOls) {
    auto s = sample(2);
    ModelFrame f;
    f.selection_columns = s.frame.outcome_columns;
    f.outcome_columns = s.frame.outcome_columns;
    f.selection_x = s.frame.outcome_x;
    f.outcome_x = s.frame.outcome_x;
    f.outcome_y = s.frame.outcome_y;
    f.selection_y = Vector::Ones(f.outcome_x.rows());
    f.selection_rows = s.frame.outcome_rows;
    f.outcome_rows = s.frame.outcome_rows;
    for (Index i = 0; i < f.outcome_x.rows(); ++i) f.selected.push_back(i);
    const HeckmanFit h = fit_two_step(f);
    EXPECT_FALSE(h.corrected);
    EXPECT_FALSE(h.warnings.empty());
    EXPECT_TRUE(std::isnan(h.imr_coef));
    const OlsFit o = ols(f.outcome_y, f.outcome_x);
    EXPECT_LT((h.outcome_coef - o.coef).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_EQ(h.outcome_coef.size(), f.outcome_x.cols());
}

TEST(FitTwoStep, ReorderingRowsChangesNothing) {
    const auto s = sample(3);
    for (auto variant : {VcovVariant::plain_robust, VcovVariant::heckman_corrected}) {
        HeckmanOptions o;
        o.vcov = variant;
        const HeckmanFit a = fit_two_step(s.frame, o);
        const HeckmanFit b = fit_two_step(permuted(s.frame, 8), o);
        EXPECT_LT((a.outcome_coef - b.outcome_coef).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LT((a.first_stage.coef - b.first_stage.coef).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LT((a.outcome_vcov - b.outcome_vcov).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LT((a.selection_vcov - b.selection_vcov).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_NEAR(a.first_stage.loglik, b.first_stage.loglik, 1e-10);
    }
}

TEST(FitTwoStep, ExclusionRestrictionKeepsLambdaIdentified) {
    int fired_identical = 0, fired_excluded = 0;
    for (std::uint64_t r = 0; r < 100; ++r) {
        synth::DgpConfig c;
        c.covariate_law = synth::CovariateLaw::bernoulli_half;
        c.n = 400;
        c.seed = 2024;
        c.stream = r;
        c.outcome_coef = Vector(2);
        c.outcome_coef << 1.0, 0.5;
        c.selection_coef = Vector(2);
        c.selection_coef << 1.0, -0.3;
        try {
            fit_two_step(synth::generate(c).frame);
        } catch (const IdentificationError& e) {
            ++fired_identical;
            EXPECT_NE(std::string(e.what()).find("excluded"), std::string::npos);
        }
        c.selection_coef = Vector(3);
        c.selection_coef << 1.0, 1.0, -0.8;
        try {
            fit_two_step(synth::generate(c).frame);
        } catch (const IdentificationError&) {
            ++fired_excluded;
        }
    }
    EXPECT_GE(fired_identical, 90);
    EXPECT_LE(fired_excluded, 10);
    EXPECT_GT(fired_identical, 5 * std::max(1, fired_excluded));
}

TEST(PlainRobustVcov, MatchesExplicitHc1) {
    const auto s = sample(4);
    const HeckmanFit f = fit_two_step(s.frame);
    const Matrix want = hc1_by_loops(f.design, f.residuals);
    EXPECT_LT((f.outcome_vcov - want).cwiseAbs().maxCoeff(), 1e-12 * want.cwiseAbs().maxCoeff());
}

TEST(PlainRobustVcov, HomoskedasticLargeNMatchesClassical) {
    std::mt19937_64 gen(6);
    std::normal_distribution<double> nd;
    const Index n = 50000;
    HeckmanFit f;
    f.design = Matrix(n, 3);
    Vector y(n);
    for (Index i = 0; i < n; ++i) {
        f.design(i, 0) = nd(gen);
        f.design(i, 1) = nd(gen);
        f.design(i, 2) = 1.0;
        y(i) = 1.0 + f.design(i, 0) - f.design(i, 1) + nd(gen);
    }
    f.residuals = ols(y, f.design).resid;
    const Matrix hc1 = plain_robust_vcov(f);
    const Matrix classical =
        (f.residuals.squaredNorm() / static_cast<double>(n - 3)) * (f.design.transpose() * f.design).inverse();
    for (Index i = 0; i < 3; ++i) {
        for (Index j = 0; j < 3; ++j) {
            const double scale = std::sqrt(classical(i, i) * classical(j, j));
            EXPECT_LE(std::abs(hc1(i, j) - classical(i, j)), 0.10 * scale);
        }
    }
    EXPECT_EQ(hc1, hc1.transpose());
    EXPECT_GE(Eigen::SelfAdjointEigenSolver<Matrix>(hc1).eigenvalues().minCoeff(), 0.0);
}

TEST(PlainRobustVcov, DuplicatingObservationsHalvesVariances) {
    const auto s = sample(5, 0.5, 600);
    const HeckmanFit f = fit_two_step(s.frame);
    HeckmanFit d = f;
    d.design = Matrix(2 * f.design.rows(), f.design.cols());
    d.design << f.design, f.design;
    d.residuals = Vector(2 * f.residuals.size());
    d.residuals << f.residuals, f.residuals;
    const Vector ratio = plain_robust_vcov(d).diagonal().cwiseQuotient(f.outcome_vcov.diagonal());
    EXPECT_GE(ratio.minCoeff(), 0.45);
    EXPECT_LE(ratio.maxCoeff(), 0.55);
}

TEST(HeckmanCorrectedVcov, VanishingCorrectionGivesClassicalCovariance) {
    const auto s = sample(6);
    HeckmanOptions o;
    o.vcov = VcovVariant::heckman_corrected;
    HeckmanFit f = fit_two_step(s.frame, o);
    f.imr_coef = 0.0;
    const Matrix v = heckman_corrected_vcov(f, s.frame);
    const double m = static_cast<double>(f.design.rows());
    const Matrix want = (f.residuals.squaredNorm() / m) * (f.design.transpose() * f.design).inverse();
    EXPECT_LT((v - want).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_EQ(v, v.transpose());
}

TEST(HeckmanCorrectedVcov, ShrinksTowardPlainAsImrVanishes) {
    const auto s = sample(7);
    HeckmanOptions o;
    o.vcov = VcovVariant::heckman_corrected;
    HeckmanFit f = fit_two_step(s.frame, o);
    const double m = static_cast<double>(f.design.rows());
    const Matrix base = (f.residuals.squaredNorm() / m) * (f.design.transpose() * f.design).inverse();
    double prev = std::numeric_limits<double>::infinity();
    for (double scale : {1.0, 0.5, 0.1, 0.01}) {
        HeckmanFit g = f;
        g.imr_coef = f.imr_coef * scale;
        const double gap = (heckman_corrected_vcov(g, s.frame) - base).cwiseAbs().maxCoeff();
        EXPECT_LT(gap, prev);
        prev = gap;
    }
}

TEST(SignificanceStars, Thresholds) {
    EXPECT_EQ(significance_stars(0.718, 0.217), Stars::three);
    EXPECT_EQ(significance_stars(0.574, 0.697), Stars::none);
    EXPECT_EQ(significance_stars(0.0, 3.0), Stars::none);
    EXPECT_EQ(significance_stars(-2.0, 1.0), Stars::two);
    EXPECT_EQ(significance_stars(1.7, 1.0), Stars::one);
    EXPECT_EQ(significance_stars(2.6, 1.0), Stars::three);
    EXPECT_EQ(significance_stars(1.644854, 1.0), Stars::none);
    EXPECT_THROW(significance_stars(1.0, 0.0), std::invalid_argument);
    EXPECT_THROW(significance_stars(1.0, -1.0), std::invalid_argument);
    EXPECT_EQ(to_string(Stars::two), "**");
}

TEST(FitTwoStep, SnapshotModel2GovEff) {
    const ModelFrame f = build_model_frame(heckit::testing::snapshot(), builtin_spec(2));
    const HeckmanFit h = fit_two_step(f);
    const auto j = static_cast<Index>(std::find(h.outcome_columns.begin(), h.outcome_columns.end(), "gov_eff") -
                                      h.outcome_columns.begin());
    const double coef = h.outcome_coef(j);
    EXPECT_GT(coef, 0.0);
    EXPECT_EQ(significance_stars(coef, std::sqrt(h.outcome_vcov(j, j))), Stars::three);
}
