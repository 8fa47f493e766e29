#pragma once

#include "heckit/linalg.hpp"

namespace heckit::probit {

struct Options {
    double tol = 1e-8;  // on the max-abs score
    int max_iter = 100;
    int max_halvings = 30;
    double separation_bound = 50.0;
};

struct Fit {
    Vector coef;
    Matrix vcov;  // observed-information inverse
    double loglik = 0.0;
    int iterations = 0;
    bool converged = false;
    double score_norm = 0.0;
    Index n = 0;
};

double loglik(const Vector& coef, const Vector& y, const Matrix& x);
Vector score(const Vector& coef, const Vector& y, const Matrix& x);
Matrix hessian(const Vector& coef, const Vector& y, const Matrix& x);

// Per-observation score contributions, one row per observation.
Matrix score_contributions(const Vector& coef, const Vector& y, const Matrix& x);

// Newton iterations from zero with step-halving. Throws SeparationError, RankDeficientError or DataError.
Fit fit(const Vector& y, const Matrix& x, const Options& options = {});

Vector predict_prob(const Fit& fit, const Matrix& x);

// H^-1 (sum s_i s_i') H^-1 with H the negative Hessian at the estimate.
Matrix sandwich_vcov(const Fit& fit, const Vector& y, const Matrix& x);

}  // namespace heckit::probit

namespace heckit {
using ProbitFit = probit::Fit;
}  // namespace heckit
