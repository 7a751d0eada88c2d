#include <doctest.h>

#include <cmath>
#include <fstream>

#include "cdr/triangle.hpp"
#include "test_support.hpp"

using namespace cdr;

namespace {

std::size_t error_row(std::string_view text, TriangleKind kind = TriangleKind::cumulative) {
    try {
        parse_triangle(text, kind);
    } catch (const TriangleError& e) {
        return e.row();
    }
    FAIL("expected TriangleError");
    return TriangleError::npos;
}

}  // namespace

TEST_CASE("parse cumulative staircase") {
    const auto t = parse_triangle("# kind=cumulative\n1,2,4\n1,2\n1\n");
    CHECK(t.size() == 3);
    CHECK(t.last_index() == 2);
    CHECK(t(0, 2) == 4);
    CHECK(t(2, 0) == 1);
    CHECK(t.latest(1) == 2);
}

TEST_CASE("incremental input is cumulated") {
    const auto a = parse_triangle("# kind=cumulative\n1,2,4\n1,2\n1\n");
    const auto b = parse_triangle("# kind=incremental\n1,1,2\n1,1\n1\n");
    CHECK(a.rows() == b.rows());
    const auto c = parse_triangle("1,1,2\n1,1\n1\n", TriangleKind::incremental);
    CHECK(a.rows() == c.rows());
}

TEST_CASE("trailing empty cells and whitespace are accepted") {
    const auto t = parse_triangle("# kind=cumulative\n1, 2, 4\n1,2,\n1,,\n");
    CHECK(t(1, 1) == 2);
    CHECK(t.size() == 3);
}

TEST_CASE("parse errors carry the cell") {
    SUBCASE("zero cumulative value") {
        try {
            parse_triangle("# kind=cumulative\n1,2,4\n1,0\n1\n");
            FAIL("expected error");
        } catch (const TriangleError& e) {
            CHECK(e.row() == 1);
            CHECK(e.col() == 1);
        }
    }
    SUBCASE("negative value") { CHECK(error_row("1,2,4\n1,-2\n1\n") == 1); }
    SUBCASE("non-numeric") { CHECK(error_row("1,2,4\n1,x\n1\n") == 1); }
    SUBCASE("missing staircase cell") { CHECK(error_row("1,2,4\n1\n1\n") == 1); }
    SUBCASE("interior gap") { CHECK(error_row("1,,4\n1,2\n1\n") == 0); }
    SUBCASE("cell below the staircase") { CHECK(error_row("1,2,4\n1,2,3\n1\n") == 1); }
    SUBCASE("zero instead of empty") { CHECK(error_row("1,2,4\n1,2,0\n1\n") == 1); }
    SUBCASE("non-finite") { CHECK(error_row("1,2,inf\n1,2\n1\n") == 0); }
    SUBCASE("incremental going non-positive") { CHECK(error_row("1,-1,2\n1,1\n1\n", TriangleKind::incremental) == 0); }
    SUBCASE("non-square") {
        CHECK_THROWS_AS(parse_triangle("1,2,4,8\n1,2\n1\n", TriangleKind::cumulative), TriangleError);
        CHECK_THROWS_AS(parse_triangle("1,2\n1,2\n1\n", TriangleKind::cumulative), TriangleError);
    }
    SUBCASE("empty input") { CHECK_THROWS_AS(parse_triangle("", TriangleKind::cumulative), TriangleError); }
    SUBCASE("header required without explicit kind") { CHECK_THROWS_AS(parse_triangle("1,2\n1\n"), TriangleError); }
    SUBCASE("header disagreeing with kind") {
        CHECK_THROWS_AS(parse_triangle("# kind=incremental\n1,2\n1\n", TriangleKind::cumulative), TriangleError);
    }
    SUBCASE("unknown kind") { CHECK_THROWS_AS(parse_triangle("# kind=paid\n1,2\n1\n"), TriangleError); }
}

TEST_CASE("from_rows validates shape and sign") {
    CHECK_THROWS_AS(CumulativeTriangle::from_rows({}), TriangleError);
    CHECK_THROWS_AS(CumulativeTriangle::from_rows({{1, 2}, {1, 2}}), TriangleError);
    CHECK_THROWS_AS(CumulativeTriangle::from_rows({{1, 2}, {0}}), TriangleError);
    CHECK_NOTHROW(CumulativeTriangle::from_rows({{1, 2}, {1}}));
}

TEST_CASE("at() is bounds-checked") {
    const auto t = test::doubling_triangle();
    CHECK(t.at(0, 2) == 4);
    CHECK_THROWS(t.at(1, 2));
    CHECK_THROWS(t.at(3, 0));
}

TEST_CASE("to_incremental") {
    const auto inc = to_incremental(test::doubling_triangle());
    CHECK(inc.rows()[0] == std::vector<double>{1, 1, 2});
    const auto flat = to_incremental(CumulativeTriangle::from_rows({{5, 5, 5}, {5, 5}, {5}}));
    CHECK(flat.rows()[0] == std::vector<double>{5, 0, 0});
}

TEST_CASE("to_incremental and cumulate are inverse on random triangles") {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const auto t = test::random_triangle(2 + seed % 9, seed);
        const auto back = to_incremental(t).cumulate();
        for (std::size_t i = 0; i < t.size(); ++i)
            for (std::size_t j = 0; j + i < t.size(); ++j) CHECK(test::rel_err(back(i, j), t(i, j)) <= 1e-12);
    }
}

TEST_CASE("serialize then parse is bit-exact") {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const auto t = test::random_triangle(2 + seed % 9, seed);
        const auto back = parse_triangle(serialize_triangle(t));
        CHECK(back.rows() == t.rows());
    }
    const auto ref = test::reference_triangle();
    CHECK(parse_triangle(serialize_triangle(ref)).rows() == ref.rows());
}

TEST_CASE("scaled multiplies every cell") {
    const auto t = test::doubling_triangle().scaled(2.5);
    CHECK(t(0, 2) == 10);
    CHECK(t(2, 0) == 2.5);
}

TEST_CASE("read_triangle_file") {
    const auto t = test::reference_triangle();
    CHECK(t.size() == 9);
    CHECK(t(0, 0) == 2202584);
    CHECK(t(8, 0) == 2144738);
    CHECK_THROWS(read_triangle_file(test::data_path("does_not_exist.csv")));
}
