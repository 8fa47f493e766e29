#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace heckit {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A malformed input file. Row and column are 1-based; row 1 is the header.
class ParseError : public Error {
public:
    ParseError(std::size_t row, std::size_t column, const std::string& message);
    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

class DataError : public Error {
public:
    using Error::Error;
};

class RankDeficientError : public Error {
public:
    explicit RankDeficientError(std::vector<std::string> columns);
    const std::vector<std::string>& columns() const noexcept { return columns_; }

private:
    std::vector<std::string> columns_;
};

class SeparationError : public Error {
public:
    using Error::Error;
};

class IdentificationError : public Error {
public:
    using Error::Error;
};

}  // namespace heckit
