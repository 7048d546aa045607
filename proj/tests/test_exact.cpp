#include "modlie/linalg.hpp"
#include "modlie/rational.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace modlie;

namespace {

QMatrix from_rows(const std::vector<std::vector<long long>>& rows) {
    int r = static_cast<int>(rows.size());
    int c = r ? static_cast<int>(rows[0].size()) : 0;
    QMatrix m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j)
            m.set(i, j, Rational(rows[i][j]));
    return m;
}

} // namespace

TEST_CASE("rational normalization and arithmetic") {
    Rational r(6, -4);
    CHECK(r.numerator() == -3);
    CHECK(r.denominator() == 2);
    CHECK(r.str() == "-3/2");

    Rational z(0, 7);
    CHECK(z.is_zero());
    CHECK(z.numerator() == 0);
    CHECK(z.denominator() == 1);
    CHECK(z.str() == "0");

    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK(Rational(2, 3) * Rational(3, 4) == Rational(1, 2));
    CHECK(Rational(1, 2) - Rational(1, 2) == Rational(0));
    CHECK(Rational(5).is_integer());
    CHECK(Rational(7, 2) / Rational(7) == Rational(1, 2));
    CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
    CHECK_THROWS_AS(Rational(Integer(1), Integer(0)), std::domain_error);

    CHECK(Rational::parse("-3/2") == Rational(-3, 2));
    CHECK(Rational::parse("42") == Rational(42));
    CHECK(Rational::parse("6/4") == Rational(3, 2));
    CHECK_THROWS_AS(Rational::parse("x/y"), std::invalid_argument);

    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1, 2).sign() == -1);
}

TEST_CASE("rref golden cases") {
    SECTION("rank one") {
        auto rr = rref(from_rows({{2, 4}, {1, 2}}));
        CHECK(rr.matrix == from_rows({{1, 2}, {0, 0}}));
        CHECK(rr.pivots == std::vector<int>{0});
    }
    SECTION("identity") {
        auto rr = rref(QMatrix::identity(3));
        CHECK(rr.matrix == QMatrix::identity(3));
        CHECK(rr.pivots == std::vector<int>{0, 1, 2});
    }
    SECTION("permutation") {
        auto rr = rref(from_rows({{0, 1}, {1, 0}}));
        CHECK(rr.matrix == QMatrix::identity(2));
        CHECK(rr.pivots == std::vector<int>{0, 1});
    }
    SECTION("empty matrix") {
        QMatrix empty;
        auto rr = rref(empty);
        CHECK(rr.matrix == empty);
        CHECK(rr.pivots.empty());
    }
}

TEST_CASE("kernel golden cases") {
    SECTION("rank 1 in 2 columns") {
        auto basis = kernel_basis(from_rows({{1, 1}, {2, 2}}));
        REQUIRE(basis.size() == 1);
        // canonical RREF basis: free variable (column 1) set to 1
        CHECK(basis[0].get(0) == Rational(-1));
        CHECK(basis[0].get(1) == Rational(1));
    }
    SECTION("full rank") {
        CHECK(kernel_basis(QMatrix::identity(2)).empty());
    }
    SECTION("zero map") {
        auto basis = kernel_basis(QMatrix(2, 3));
        REQUIRE(basis.size() == 3);
        for (int i = 0; i < 3; ++i) {
            CHECK(basis[i].get(i) == Rational(1));
            CHECK(basis[i].entries().size() == 1);
        }
    }
}

TEST_CASE("rank golden cases") {
    CHECK(rank(QMatrix::identity(4)) == 4);
    CHECK(rank(QMatrix(3, 3)) == 0);
    CHECK(rank(from_rows({{1, 2}, {2, 4}, {0, 1}})) == 2);
}

TEST_CASE("rank-nullity and kernel verification on random matrices") {
    std::mt19937 rng(20240901);
    std::uniform_int_distribution<int> dim(1, 6), entry(-4, 4);
    for (int trial = 0; trial < 60; ++trial) {
        int r = dim(rng), c = dim(rng);
        QMatrix m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j)
                if (entry(rng) > 0) // keep it sparse
                    m.set(i, j, Rational(entry(rng)));

        auto basis = kernel_basis(m);
        CHECK(rank(m) + static_cast<int>(basis.size()) == c);
        for (const auto& v : basis)
            CHECK(m.apply(v).is_zero());

        auto rr = rref(m);
        auto rr2 = rref(rr.matrix);
        CHECK(rr.matrix == rr2.matrix);
        CHECK(rr.pivots == rr2.pivots);

        // kernel vectors are linearly independent by construction: each
        // has a free coordinate no other vector touches
        for (size_t i = 0; i < basis.size(); ++i)
            for (size_t j = i + 1; j < basis.size(); ++j)
                CHECK(!(basis[i] == basis[j]));
    }
}

TEST_CASE("rref preserves row space") {
    // every original row must reduce to zero against the RREF rows
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> entry(-3, 3);
    QMatrix m(4, 5);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 5; ++j)
            m.set(i, j, Rational(entry(rng)));
    auto rr = rref(m);
    for (int i = 0; i < 4; ++i) {
        QVector row(5);
        for (int j = 0; j < 5; ++j)
            row.set(j, m.get(i, j));
        // eliminate with pivot rows
        for (size_t p = 0; p < rr.pivots.size(); ++p) {
            Rational f = row.get(rr.pivots[p]);
            if (f.is_zero())
                continue;
            for (int j = 0; j < 5; ++j)
                row.set(j, row.get(j) - f * rr.matrix.get(static_cast<int>(p), j));
        }
        CHECK(row.is_zero());
    }
}
