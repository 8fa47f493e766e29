#pragma once

#include "heckit/linalg.hpp"
#include "heckit/model_frame.hpp"
#include "heckit/probit.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace heckit {

struct OlsFit {
    Vector coef;
    Vector resid;
};

// Least squares by column-pivoted QR. Throws RankDeficientError naming the collinear columns.
OlsFit ols(const Vector& y, const Matrix& x, const std::vector<std::string>& names = {});

enum class VcovVariant { plain_robust, heckman_corrected };

std::string_view to_string(VcovVariant v);
VcovVariant parse_vcov_variant(std::string_view text);

struct HeckmanOptions {
    VcovVariant vcov = VcovVariant::plain_robust;
    probit::Options probit;
    double max_condition = 1e10;
};

struct HeckmanFit {
    ProbitFit first_stage;
    // Selection-stage covariance matching the variant: sandwich for plain_robust, information inverse otherwise.
    Matrix selection_vcov;
    std::vector<std::string> selection_columns;

    Vector outcome_coef;  // outcome columns followed by lambda
    std::vector<std::string> outcome_columns;
    double imr_coef = 0.0;
    Matrix outcome_vcov;
    Matrix design;  // second-stage regressors, lambda last
    VcovVariant variant = VcovVariant::plain_robust;

    Index n_total = 0;
    Index n_selected = 0;
    Vector residuals;
    Vector lambda;
    bool corrected = true;  // false when every row was selected and lambda was skipped
    std::vector<std::string> warnings;
};

inline constexpr std::string_view kLambdaColumn = "lambda";

HeckmanFit fit_two_step(const ModelFrame& frame, const HeckmanOptions& options = {});

// HC1 on the second-stage regression, lambda treated as fixed.
Matrix plain_robust_vcov(const HeckmanFit& fit);

// Two-step covariance accounting for the estimated lambda.
Matrix heckman_corrected_vcov(const HeckmanFit& fit, const ModelFrame& frame);

enum class Stars { none, one, two, three };

Stars significance_stars(double coef, double se);
std::string_view to_string(Stars s);

}  // namespace heckit
