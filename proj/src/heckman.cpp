#include "heckit/heckman.hpp"

#include "heckit/errors.hpp"
#include "heckit/normal.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace heckit {

OlsFit ols(const Vector& y, const Matrix& x, const std::vector<std::string>& names) {
    if (y.size() != x.rows()) throw std::invalid_argument("response length does not match the row count");
    if (x.rows() < x.cols() + 1) {
        throw DataError("regression needs more rows than columns (" + std::to_string(x.rows()) + " rows, " +
                        std::to_string(x.cols()) + " columns)");
    }
    require_full_rank(x, names);
    Eigen::ColPivHouseholderQR<Matrix> qr(x);
    OlsFit out;
    out.coef = qr.solve(y);
    out.resid = y - x * out.coef;
    return out;
}

std::string_view to_string(VcovVariant v) {
    return v == VcovVariant::plain_robust ? "robust" : "heckman";
}

VcovVariant parse_vcov_variant(std::string_view text) {
    if (text == "robust" || text == "plain_robust") return VcovVariant::plain_robust;
    if (text == "heckman" || text == "heckman_corrected") return VcovVariant::heckman_corrected;
    throw std::invalid_argument("unknown covariance variant '" + std::string(text) + "'");
}

Matrix plain_robust_vcov(const HeckmanFit& fit) {
    const Matrix& x = fit.design;
    const Index n = x.rows();
    const Index k = x.cols();
    if (n <= k) throw DataError("HC1 covariance needs more rows than columns");
    const Matrix bread = spd_inverse(x.transpose() * x);
    const Vector e2 = fit.residuals.array().square();
    const Matrix meat = x.transpose() * e2.asDiagonal() * x;
    const Matrix v = bread * meat * bread * (static_cast<double>(n) / static_cast<double>(n - k));
    return 0.5 * (v + v.transpose());
}

Matrix heckman_corrected_vcov(const HeckmanFit& fit, const ModelFrame& frame) {
    const Matrix& xs = fit.design;
    const Index m = xs.rows();
    const Matrix bread = spd_inverse(xs.transpose() * xs);
    const double theta = fit.corrected ? fit.imr_coef : 0.0;

    Vector delta = Vector::Zero(m);
    Matrix w;
    if (fit.corrected) {
        w.resize(m, frame.selection_x.cols());
        for (Index i = 0; i < m; ++i) w.row(i) = frame.selection_x.row(frame.selected[static_cast<std::size_t>(i)]);
        const Vector index = w * fit.first_stage.coef;
        for (Index i = 0; i < m; ++i) delta(i) = inverse_mills_delta(index(i));
    }

    double sigma2 = fit.residuals.squaredNorm() / static_cast<double>(m) + theta * theta * delta.mean();
    double rho2 = sigma2 > 0.0 ? theta * theta / sigma2 : 0.0;
    if (rho2 > 1.0) {
        rho2 = 1.0;
        sigma2 = theta * theta;
    }

    Matrix middle = xs.transpose() * xs;
    if (fit.corrected && rho2 > 0.0) {
        middle -= rho2 * (xs.transpose() * delta.asDiagonal() * xs);
        const Matrix xdw = xs.transpose() * delta.asDiagonal() * w;
        middle += rho2 * (xdw * fit.first_stage.vcov * xdw.transpose());
    }
    const Matrix v = sigma2 * (bread * middle * bread);
    return 0.5 * (v + v.transpose());
}

HeckmanFit fit_two_step(const ModelFrame& frame, const HeckmanOptions& options) {
    validate_frame(frame);
    HeckmanFit out;
    out.variant = options.vcov;
    out.selection_columns = frame.selection_columns;
    out.n_total = frame.n_total();
    out.n_selected = frame.n_selected();

    if (out.n_selected == out.n_total) {
        out.corrected = false;
        out.warnings.push_back("every row is selected; the selection correction was skipped");
        out.first_stage.n = out.n_total;
        out.design = frame.outcome_x;
        out.outcome_columns = frame.outcome_columns;
        const OlsFit o = ols(frame.outcome_y, out.design, out.outcome_columns);
        out.outcome_coef = o.coef;
        out.residuals = o.resid;
        out.imr_coef = std::numeric_limits<double>::quiet_NaN();
        out.outcome_vcov = options.vcov == VcovVariant::plain_robust ? plain_robust_vcov(out)
                                                                      : heckman_corrected_vcov(out, frame);
        return out;
    }

    out.first_stage = probit::fit(frame.selection_y, frame.selection_x, options.probit);
    if (!out.first_stage.converged) out.warnings.push_back("first stage did not converge");

    const Index m = out.n_selected;
    const Index k = frame.outcome_x.cols();
    out.lambda.resize(m);
    for (Index i = 0; i < m; ++i) {
        const double z = frame.selection_x.row(frame.selected[static_cast<std::size_t>(i)]).dot(out.first_stage.coef);
        out.lambda(i) = inverse_mills(z);
    }
    out.design.resize(m, k + 1);
    out.design.leftCols(k) = frame.outcome_x;
    out.design.col(k) = out.lambda;
    out.outcome_columns = frame.outcome_columns;
    out.outcome_columns.emplace_back(kLambdaColumn);

    const double cond = scaled_condition_number(out.design);
    if (!(cond <= options.max_condition)) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3g", cond);
        throw IdentificationError(std::string("the inverse Mills ratio is collinear with the outcome regressors "
                                              "(condition number ") +
                                  buf + "); add a selection variable excluded from the outcome stage");
    }

    const OlsFit o = ols(frame.outcome_y, out.design, out.outcome_columns);
    out.outcome_coef = o.coef;
    out.residuals = o.resid;
    out.imr_coef = o.coef(k);

    if (options.vcov == VcovVariant::plain_robust) {
        out.outcome_vcov = plain_robust_vcov(out);
        if (out.first_stage.converged) {
            out.selection_vcov = probit::sandwich_vcov(out.first_stage, frame.selection_y, frame.selection_x);
        } else {
            out.selection_vcov = out.first_stage.vcov;
        }
    } else {
        out.outcome_vcov = heckman_corrected_vcov(out, frame);
        out.selection_vcov = out.first_stage.vcov;
    }
    return out;
}

Stars significance_stars(double coef, double se) {
    if (!(se > 0.0)) throw std::invalid_argument("standard error must be positive");
    const double t = std::abs(coef / se);
    if (t > 2.575829) return Stars::three;
    if (t > 1.959964) return Stars::two;
    if (t > 1.644854) return Stars::one;
    return Stars::none;
}

std::string_view to_string(Stars s) {
    switch (s) {
        case Stars::none: return "";
        case Stars::one: return "*";
        case Stars::two: return "**";
        case Stars::three: return "***";
    }
    return "";
}

}  // namespace heckit
