#include "heckit/linalg.hpp"

#include "heckit/errors.hpp"

#include <limits>

namespace heckit {

std::vector<Index> collinear_columns(const Matrix& x, double tol) {
    std::vector<Index> bad;
    std::vector<Index> kept;
    for (Index j = 0; j < x.cols(); ++j) {
        const Vector col = x.col(j);
        const double norm = col.norm();
        if (norm == 0.0) {
            bad.push_back(j);
            continue;
        }
        if (!kept.empty()) {
            Matrix basis(x.rows(), static_cast<Index>(kept.size()));
            for (std::size_t k = 0; k < kept.size(); ++k) basis.col(static_cast<Index>(k)) = x.col(kept[k]);
            const Vector coef = basis.colPivHouseholderQr().solve(col);
            if ((col - basis * coef).norm() <= tol * norm) {
                bad.push_back(j);
                continue;
            }
        }
        kept.push_back(j);
    }
    return bad;
}

void require_full_rank(const Matrix& x, const std::vector<std::string>& names) {
    const auto bad = collinear_columns(x);
    if (bad.empty()) return;
    std::vector<std::string> cols;
    for (Index j : bad) {
        cols.push_back(static_cast<std::size_t>(j) < names.size() ? names[static_cast<std::size_t>(j)]
                                                                   : "column " + std::to_string(j));
    }
    throw RankDeficientError(std::move(cols));
}

Matrix spd_inverse(const Matrix& a) {
    Eigen::LLT<Matrix> llt(a);
    if (llt.info() != Eigen::Success) throw DataError("matrix is not positive definite");
    Matrix inv = llt.solve(Matrix::Identity(a.rows(), a.cols()));
    return 0.5 * (inv + inv.transpose());
}

double scaled_condition_number(const Matrix& x) {
    Matrix scaled = x;
    for (Index j = 0; j < scaled.cols(); ++j) {
        const double n = scaled.col(j).norm();
        if (n == 0.0) return std::numeric_limits<double>::infinity();
        scaled.col(j) /= n;
    }
    Eigen::JacobiSVD<Matrix> svd(scaled);
    const Vector& s = svd.singularValues();
    const double smin = s(s.size() - 1);
    if (smin == 0.0) return std::numeric_limits<double>::infinity();
    return s(0) / smin;
}

}  // namespace heckit
