#include "heckit/probit.hpp"

#include "heckit/errors.hpp"
#include "heckit/normal.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace heckit::probit {
namespace {

void check_dims(const Vector& coef, const Vector& y, const Matrix& x) {
    if (x.cols() != coef.size()) throw std::invalid_argument("coefficient length does not match the column count");
    if (x.rows() != y.size()) throw std::invalid_argument("response length does not match the row count");
}

double sign_of(double y) { return y == 1.0 ? 1.0 : -1.0; }

}  // namespace

double loglik(const Vector& coef, const Vector& y, const Matrix& x) {
    check_dims(coef, y, x);
    const Vector index = x * coef;
    double ll = 0.0;
    for (Index i = 0; i < y.size(); ++i) ll += log_normal_cdf(sign_of(y(i)) * index(i));
    return ll;
}

Matrix score_contributions(const Vector& coef, const Vector& y, const Matrix& x) {
    check_dims(coef, y, x);
    const Vector index = x * coef;
    Matrix s(x.rows(), x.cols());
    for (Index i = 0; i < y.size(); ++i) {
        const double q = sign_of(y(i));
        s.row(i) = (q * inverse_mills(q * index(i))) * x.row(i);
    }
    return s;
}

Vector score(const Vector& coef, const Vector& y, const Matrix& x) {
    return score_contributions(coef, y, x).colwise().sum().transpose();
}

Matrix hessian(const Vector& coef, const Vector& y, const Matrix& x) {
    check_dims(coef, y, x);
    const Vector index = x * coef;
    Vector w(y.size());
    for (Index i = 0; i < y.size(); ++i) w(i) = inverse_mills_delta(sign_of(y(i)) * index(i));
    Matrix h = -(x.transpose() * w.asDiagonal() * x);
    return 0.5 * (h + h.transpose());
}

Fit fit(const Vector& y, const Matrix& x, const Options& options) {
    if (x.rows() != y.size()) throw std::invalid_argument("response length does not match the row count");
    if (x.rows() == 0) throw DataError("probit needs at least one observation");
    Index ones = 0;
    for (Index i = 0; i < y.size(); ++i) {
        if (y(i) != 0.0 && y(i) != 1.0) throw DataError("probit response must be 0 or 1");
        if (y(i) == 1.0) ++ones;
    }
    if (ones == 0 || ones == y.size()) throw DataError("probit response must contain both outcomes");
    require_full_rank(x, {});

    Fit out;
    out.n = x.rows();
    out.coef = Vector::Zero(x.cols());
    out.loglik = loglik(out.coef, y, x);

    for (int iter = 0; iter < options.max_iter; ++iter) {
        const Vector g = score(out.coef, y, x);
        out.score_norm = g.cwiseAbs().maxCoeff();
        if (out.score_norm < options.tol) break;

        const Matrix info = -hessian(out.coef, y, x);
        Eigen::LDLT<Matrix> ldlt(info);
        const Vector step = ldlt.solve(g);
        if (ldlt.info() != Eigen::Success || !step.allFinite()) break;

        double scale = 1.0;
        bool accepted = false;
        Vector trial;
        double trial_ll = 0.0;
        // Differences below a few ulps of the log-likelihood are rounding noise, not a decrease.
        const double slack = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(out.loglik));
        for (int h = 0; h <= options.max_halvings; ++h) {
            trial = out.coef + scale * step;
            trial_ll = loglik(trial, y, x);
            if (std::isfinite(trial_ll) && trial_ll >= out.loglik - slack) {
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if (!accepted) break;
        out.coef = trial;
        out.loglik = trial_ll;
        out.iterations = iter + 1;

        if (out.coef.cwiseAbs().maxCoeff() > options.separation_bound) {
            const double s = score(out.coef, y, x).cwiseAbs().maxCoeff();
            if (s > options.tol) {
                throw SeparationError("probit coefficients diverge (|coef| > " +
                                      std::to_string(options.separation_bound) + "); the outcome is separated");
            }
        }
    }
    out.score_norm = score(out.coef, y, x).cwiseAbs().maxCoeff();
    out.converged = out.score_norm < options.tol;

    const Vector index = x * out.coef;
    bool all_correct = true;
    for (Index i = 0; i < y.size() && all_correct; ++i) all_correct = sign_of(y(i)) * index(i) > 0.0;
    if (all_correct) throw SeparationError("the outcome is perfectly predicted by the covariates (complete separation)");

    try {
        out.vcov = spd_inverse(-hessian(out.coef, y, x));
    } catch (const DataError&) {
        if (out.converged) throw DataError("probit information matrix is singular at the estimate");
        out.vcov = Matrix::Constant(x.cols(), x.cols(), std::numeric_limits<double>::quiet_NaN());
    }
    return out;
}

Vector predict_prob(const Fit& fit, const Matrix& x) {
    if (x.cols() != fit.coef.size()) throw std::invalid_argument("coefficient length does not match the column count");
    const Vector index = x * fit.coef;
    return index.unaryExpr([](double z) { return normal_cdf(z); });
}

Matrix sandwich_vcov(const Fit& fit, const Vector& y, const Matrix& x) {
    if (!fit.converged) throw DataError("sandwich covariance needs a converged probit fit");
    const Matrix bread = spd_inverse(-hessian(fit.coef, y, x));
    const Matrix s = score_contributions(fit.coef, y, x);
    const Matrix meat = s.transpose() * s;
    const Matrix v = bread * meat * bread;
    return 0.5 * (v + v.transpose());
}

}  // namespace heckit::probit
