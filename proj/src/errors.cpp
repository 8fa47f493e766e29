#include "heckit/errors.hpp"

namespace heckit {

ParseError::ParseError(std::size_t row, std::size_t column, const std::string& message)
    : Error("row " + std::to_string(row) + ", column " + std::to_string(column) + ": " + message),
      row_(row),
      column_(column) {}

namespace {

std::string collinear_message(const std::vector<std::string>& columns) {
    std::string msg = "design matrix is rank deficient; collinear columns:";
    for (const auto& c : columns) msg += " " + c;
    return msg;
}

}  // namespace

RankDeficientError::RankDeficientError(std::vector<std::string> columns)
    : Error(collinear_message(columns)), columns_(std::move(columns)) {}

}  // namespace heckit
