#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ultratree {

/// Malformed distance matrix: non-square, asymmetric, negative, nonzero
/// diagonal or a zero distance between distinct points.
class StructuralError : public std::runtime_error {
public:
    StructuralError(std::size_t row, std::size_t col, const std::string& what)
        : std::runtime_error("cell (" + std::to_string(row) + "," + std::to_string(col) + "): " + what),
          row_(row), col_(col) {}

    std::size_t row() const { return row_; }
    std::size_t col() const { return col_; }

private:
    std::size_t row_;
    std::size_t col_;
};

/// Input text could not be parsed. Line and column are 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class NotUltrametricError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class NotSdzError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class CapExceededError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// A generator tree was queried for something that needs a depth horizon.
class HorizonRequiredError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A JSON document has the right syntax but the wrong shape. `where` is a
/// JSON pointer to the offending value.
class SchemaError : public std::runtime_error {
public:
    SchemaError(const std::string& where, const std::string& what)
        : std::runtime_error((where.empty() ? std::string("/") : where) + ": " + what), where_(where) {}

    const std::string& where() const { return where_; }

private:
    std::string where_;
};

}  // namespace ultratree
