#include "cdr/triangle.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

namespace cdr {

namespace {

std::string cell_label(std::size_t i, std::size_t j) {
    return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

// Shape checks shared by both triangle kinds.
void validate_shape(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw TriangleError("triangle has no rows");
    const std::size_t n = rows.size();
    if (rows[0].size() != n) {
        throw TriangleError("triangle is not square: " + std::to_string(n) + " origin years but " +
                                std::to_string(rows[0].size()) + " development periods",
                            0);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t expected = n - i;
        if (rows[i].size() < expected) {
            throw TriangleError("missing staircase cell at " + cell_label(i, rows[i].size()), i,
                                rows[i].size());
        }
        if (rows[i].size() > expected) {
            throw TriangleError("cell " + cell_label(i, expected) + " lies outside the staircase", i,
                                expected);
        }
        for (std::size_t j = 0; j < expected; ++j) {
            if (!std::isfinite(rows[i][j])) {
                throw TriangleError("non-finite value at " + cell_label(i, j), i, j);
            }
        }
    }
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::optional<TriangleKind> parse_header(std::string_view line) {
    auto body = trim(line.substr(1));
    constexpr std::string_view key = "kind=";
    if (body.substr(0, key.size()) != key) return std::nullopt;
    const auto value = trim(body.substr(key.size()));
    if (value == "cumulative") return TriangleKind::cumulative;
    if (value == "incremental") return TriangleKind::incremental;
    throw TriangleError("unknown triangle kind '" + std::string(value) + "'");
}

struct ParsedText {
    std::optional<TriangleKind> kind;
    std::vector<std::vector<double>> rows;
};

ParsedText parse_rows(std::string_view text) {
    ParsedText out;
    bool seen_data = false;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        const auto line = trim(text.substr(pos, nl - pos));
        pos = nl + 1;

        if (line.empty()) continue;
        if (line.front() == '#') {
            if (!seen_data && !out.kind) {
                out.kind = parse_header(line);
            }
            continue;
        }
        seen_data = true;

        const std::size_t i = out.rows.size();
        std::vector<double> row;
        bool trailing_blank = false;
        std::size_t j = 0;
        std::size_t cpos = 0;
        while (true) {
            auto comma = line.find(',', cpos);
            const bool last = comma == std::string_view::npos;
            if (last) comma = line.size();
            const auto cell = trim(line.substr(cpos, comma - cpos));
            if (cell.empty()) {
                trailing_blank = true;
            } else {
                if (trailing_blank) {
                    throw TriangleError("missing staircase cell at " + cell_label(i, row.size()), i,
                                        row.size());
                }
                double v = 0.0;
                const auto* begin = cell.data();
                const auto* end = cell.data() + cell.size();
                if (*begin == '+') ++begin;
                const auto [ptr, ec] = std::from_chars(begin, end, v);
                if (ec != std::errc{} || ptr != end) {
                    throw TriangleError("non-numeric cell '" + std::string(cell) + "' at " +
                                            cell_label(i, j),
                                        i, j);
                }
                row.push_back(v);
            }
            ++j;
            if (last) break;
            cpos = comma + 1;
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

}  // namespace

TriangleError::TriangleError(const std::string& what, std::size_t row, std::size_t col)
    : std::runtime_error(what), row_(row), col_(col) {}

CumulativeTriangle CumulativeTriangle::from_rows(std::vector<std::vector<double>> rows) {
    validate_shape(rows);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            if (!(rows[i][j] > 0.0)) {
                throw TriangleError("cumulative value at " + cell_label(i, j) + " must be > 0", i, j);
            }
        }
    }
    return CumulativeTriangle(std::move(rows));
}

double CumulativeTriangle::at(std::size_t i, std::size_t j) const {
    if (i >= rows_.size() || j >= rows_[i].size()) {
        throw std::out_of_range("cell " + cell_label(i, j) + " outside the observed triangle");
    }
    return rows_[i][j];
}

CumulativeTriangle CumulativeTriangle::scaled(double factor) const {
    if (!(factor > 0.0)) throw std::invalid_argument("scale factor must be > 0");
    auto rows = rows_;
    for (auto& r : rows)
        for (auto& v : r) v *= factor;
    return CumulativeTriangle(std::move(rows));
}

IncrementalTriangle IncrementalTriangle::from_rows(std::vector<std::vector<double>> rows) {
    validate_shape(rows);
    return IncrementalTriangle(std::move(rows));
}

CumulativeTriangle IncrementalTriangle::cumulate() const {
    auto rows = rows_;
    for (auto& r : rows) {
        for (std::size_t j = 1; j < r.size(); ++j) r[j] += r[j - 1];
    }
    return CumulativeTriangle::from_rows(std::move(rows));
}

IncrementalTriangle to_incremental(const CumulativeTriangle& tri) {
    auto rows = tri.rows();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = rows[i].size(); j-- > 1;) rows[i][j] = tri(i, j) - tri(i, j - 1);
    }
    return IncrementalTriangle::from_rows(std::move(rows));
}

CumulativeTriangle parse_triangle(std::string_view text, TriangleKind kind) {
    auto parsed = parse_rows(text);
    if (parsed.kind && *parsed.kind != kind) {
        throw TriangleError("triangle header kind does not match the requested kind");
    }
    if (kind == TriangleKind::incremental) {
        return IncrementalTriangle::from_rows(std::move(parsed.rows)).cumulate();
    }
    return CumulativeTriangle::from_rows(std::move(parsed.rows));
}

CumulativeTriangle parse_triangle(std::string_view text) {
    auto parsed = parse_rows(text);
    if (!parsed.kind) {
        throw TriangleError("missing '# kind=cumulative|incremental' header line");
    }
    if (*parsed.kind == TriangleKind::incremental) {
        return IncrementalTriangle::from_rows(std::move(parsed.rows)).cumulate();
    }
    return CumulativeTriangle::from_rows(std::move(parsed.rows));
}

CumulativeTriangle read_triangle_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open triangle file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_triangle(buf.str());
}

std::string serialize_triangle(const CumulativeTriangle& tri) {
    std::string out = "# kind=cumulative\n";
    char buf[64];
    for (const auto& row : tri.rows()) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out += ',';
            const auto res = std::to_chars(buf, buf + sizeof buf, row[j]);
            out.append(buf, res.ptr);
        }
        out += '\n';
    }
    return out;
}

}  // namespace cdr
