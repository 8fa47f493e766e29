#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace heckit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// Columns (in order) that lie in the span of the columns before them.
std::vector<Index> collinear_columns(const Matrix& x, double tol = 1e-8);

// Throws RankDeficientError naming the offending columns.
void require_full_rank(const Matrix& x, const std::vector<std::string>& names);

// Inverse of a symmetric positive definite matrix, symmetrized.
Matrix spd_inverse(const Matrix& a);

// Ratio of extreme singular values after scaling every column to unit length.
double scaled_condition_number(const Matrix& x);

}  // namespace heckit
