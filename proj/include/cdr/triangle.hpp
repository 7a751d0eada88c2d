#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cdr {

/// Raised for any malformed or invalid triangle input. Carries the offending
/// cell when one can be identified (row = origin year i, col = development j).
class TriangleError : public std::runtime_error {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    TriangleError(const std::string& what, std::size_t row = npos, std::size_t col = npos);

    std::size_t row() const noexcept { return row_; }
    std::size_t col() const noexcept { return col_; }

private:
    std::size_t row_;
    std::size_t col_;
};

enum class TriangleKind { cumulative, incremental };

class IncrementalTriangle;

/// Run-off triangle of cumulative paid amounts C(i,j), 0 <= i+j <= I.
///
/// Square (I+1 origin years, I+1 development periods) and strictly positive.
/// Immutable once constructed.
class CumulativeTriangle {
public:
    /// Row i must hold exactly I+1-i values. Throws TriangleError.
    static CumulativeTriangle from_rows(std::vector<std::vector<double>> rows);

    /// Number of origin years, I+1.
    std::size_t size() const noexcept { return rows_.size(); }
    /// Index of the last observed calendar diagonal, I.
    std::size_t last_index() const noexcept { return rows_.size() - 1; }

    double operator()(std::size_t i, std::size_t j) const { return rows_[i][j]; }
    double at(std::size_t i, std::size_t j) const;

    /// Latest observed cumulative amount of origin year i, C(i, I-i).
    double latest(std::size_t i) const { return rows_[i].back(); }

    const std::vector<double>& row(std::size_t i) const { return rows_[i]; }
    const std::vector<std::vector<double>>& rows() const noexcept { return rows_; }

    CumulativeTriangle scaled(double factor) const;

private:
    explicit CumulativeTriangle(std::vector<std::vector<double>> rows) : rows_(std::move(rows)) {}

    std::vector<std::vector<double>> rows_;
};

/// Incremental payments X(i,j) = C(i,j) - C(i,j-1), X(i,0) = C(i,0). May be negative.
class IncrementalTriangle {
public:
    /// Shape is validated (staircase, square); values are not sign-checked.
    static IncrementalTriangle from_rows(std::vector<std::vector<double>> rows);

    std::size_t size() const noexcept { return rows_.size(); }
    double operator()(std::size_t i, std::size_t j) const { return rows_[i][j]; }
    const std::vector<std::vector<double>>& rows() const noexcept { return rows_; }

    /// Row-wise running sums. Throws TriangleError if a cumulative value is not > 0.
    CumulativeTriangle cumulate() const;

private:
    explicit IncrementalTriangle(std::vector<std::vector<double>> rows) : rows_(std::move(rows)) {}

    std::vector<std::vector<double>> rows_;
};

IncrementalTriangle to_incremental(const CumulativeTriangle& tri);

/// Parses the triangle CSV layout:
///
///     # kind=cumulative        (or kind=incremental)
///     C00,C01,C02
///     C10,C11
///     C20
///
/// Shorter rows encode the staircase; trailing cells may be present but must be empty.
/// `kind` is used when the text carries no header; a header that disagrees is an error.
CumulativeTriangle parse_triangle(std::string_view text, TriangleKind kind);
CumulativeTriangle parse_triangle(std::string_view text);

CumulativeTriangle read_triangle_file(const std::string& path);

/// Writes cumulative CSV with shortest round-trip decimal representation.
std::string serialize_triangle(const CumulativeTriangle& tri);

}  // namespace cdr
