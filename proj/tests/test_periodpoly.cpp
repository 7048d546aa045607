#include "modlie/periodpoly.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace modlie;

namespace {

bool contains(const PeriodSpace& space, const PolyAB& p) {
    // p is in the span iff adding it to the basis does not raise the rank
    int dim = space.two_n + 1;
    int k = space.dimension();
    QMatrix m(k + 1, dim);
    for (int i = 0; i < k; ++i)
        for (const auto& [j, c] : space.basis[i].coeffs())
            m.set(i, j, c);
    for (const auto& [j, c] : p.coeffs())
        m.set(k, j, c);
    return rank(m) == k;
}

std::vector<double> to_doubles(const PolyAB& p, int dim) {
    std::vector<double> v(dim, 0.0);
    for (const auto& [j, c] : p.coeffs())
        v[j] = c.to_double();
    return v;
}

} // namespace

TEST_CASE("cocycle space dimensions and membership") {
    SECTION("degree 2: just the coboundary line") {
        PeriodSpace space = cocycle_space(2);
        CHECK(space.dimension() == 1);
        CHECK(contains(space, coboundary(2)));
    }
    SECTION("degree 10: dimension 3 = 2 dim S_12 + 1") {
        // 2 dim S (cusp symbol + conjugate) + 1 (coboundary); verified
        // against an independent dense-matrix nullity computation
        CHECK(cocycle_space(10).dimension() == 3);
    }
    SECTION("coboundary is a cocycle for 2n <= 20") {
        for (int two_n = 2; two_n <= 20; two_n += 2) {
            CHECK(satisfies_cocycle_conditions(coboundary(two_n)));
            CHECK(contains(cocycle_space(two_n), coboundary(two_n)));
        }
    }
    SECTION("every basis element satisfies both conditions exactly") {
        for (int two_n : {2, 4, 10, 14}) {
            PeriodSpace space = cocycle_space(two_n);
            for (const PolyAB& p : space.basis)
                CHECK(satisfies_cocycle_conditions(p));
        }
    }
    SECTION("invalid degrees rejected") {
        CHECK_THROWS_AS(cocycle_space(0), std::invalid_argument);
        CHECK_THROWS_AS(cocycle_space(3), std::invalid_argument);
    }
}

TEST_CASE("Eichler-Shimura dimension identity") {
    // dim cocycle_space(2n) = 2 dim S_{2n+2} + 1 for 2 <= 2n <= 24: one
    // class per cusp form and its conjugate, plus the coboundary line
    for (int two_n = 2; two_n <= 24; two_n += 2) {
        int s = dim_cusp_forms(two_n + 2);
        CHECK(cocycle_space(two_n).dimension() == 2 * s + 1);
    }
}

TEST_CASE("parity split") {
    SECTION("degree 2: plus is the coboundary, minus empty") {
        auto [plus, minus] = split_parity(cocycle_space(2));
        REQUIRE(plus.dimension() == 1);
        CHECK(minus.dimension() == 0);
        CHECK(contains(plus, coboundary(2)));
        CHECK(plus.parity == Parity::Plus);
        CHECK(plus.flavor() == "plus");
    }
    SECTION("dimension bookkeeping up to degree 20") {
        for (int two_n = 2; two_n <= 20; two_n += 2) {
            PeriodSpace space = cocycle_space(two_n);
            auto [plus, minus] = split_parity(space);
            CHECK(plus.dimension() + minus.dimension() == space.dimension());
            // plus holds only even exponents, minus only odd
            for (const PolyAB& p : plus.basis)
                for (const auto& [j, c] : p.coeffs())
                    CHECK(j % 2 == 0);
            for (const PolyAB& p : minus.basis)
                for (const auto& [j, c] : p.coeffs())
                    CHECK(j % 2 == 1);
        }
    }
    SECTION("double split rejected") {
        auto [plus, minus] = split_parity(cocycle_space(10));
        CHECK_THROWS_AS(split_parity(plus), std::invalid_argument);
    }
}

TEST_CASE("cuspidal quotient") {
    SECTION("plus part dimensions match dim S_{2n+2}") {
        for (int two_n = 2; two_n <= 24; two_n += 2) {
            auto [plus, minus] = split_parity(cocycle_space(two_n));
            PeriodSpace cplus = cuspidal_quotient(plus);
            CHECK(cplus.dimension() == dim_cusp_forms(two_n + 2));
            CHECK(cplus.cuspidal);
            CHECK(cplus.flavor() == "cuspidal-plus");
            PeriodSpace cminus = cuspidal_quotient(minus);
            CHECK(cminus.dimension() == minus.dimension());
        }
    }
    SECTION("golden cases") {
        auto [p10, m10] = split_parity(cocycle_space(10));
        CHECK(cuspidal_quotient(p10).dimension() == 1);
        CHECK(cuspidal_quotient(m10).dimension() == 1);
        auto [p8, m8] = split_parity(cocycle_space(8));
        CHECK(cuspidal_quotient(p8).dimension() == 0);
    }
    SECTION("representatives have zero end coefficients and stay cocycles") {
        auto [plus, minus] = split_parity(cocycle_space(14));
        for (const PeriodSpace& space : {cuspidal_quotient(plus), cuspidal_quotient(minus)})
            for (const PolyAB& p : space.basis) {
                CHECK(p.get(0).is_zero());
                CHECK(p.get(14).is_zero());
                CHECK(satisfies_cocycle_conditions(p));
            }
    }
    SECTION("full space drops by one") {
        PeriodSpace space = cocycle_space(10);
        PeriodSpace cusp = cuspidal_quotient(space);
        CHECK(cusp.dimension() == space.dimension() - 1);
        CHECK(cusp.flavor() == "cuspidal");
    }
}

TEST_CASE("numeric period polynomial of the discriminant") {
    QSeries delta = cusp_basis(12, 64)[0];
    NumericPoly r = numeric_period_polynomial(delta);
    REQUIRE(r.two_n == 10);
    REQUIRE(r.coeffs.size() == 11);

    SECTION("cocycle residual below 1e-8") {
        CHECK(numeric_cocycle_residual(r) < 1e-8);
    }
    SECTION("even part spans the exact cuspidal plus line") {
        PeriodSpace cplus = cuspidal_quotient(split_parity(cocycle_space(10)).first);
        REQUIRE(cplus.dimension() == 1);
        NumericPoly plus = numeric_reduce_coboundary(numeric_plus_part(r));
        std::vector<std::vector<double>> span{to_doubles(cplus.basis[0], 11)};
        CHECK(numeric_span_deviation(plus.coeffs, span) < 1e-8);
    }
    SECTION("doubling the precision moves coefficients by < 1e-12 relative") {
        NumericPoly r32 = numeric_period_polynomial(delta.truncated(32));
        double max_rel = 0.0;
        for (int m = 0; m <= 10; ++m) {
            double denom = std::abs(r.coeffs[m]);
            if (denom > 0)
                max_rel = std::max(max_rel, std::abs(r.coeffs[m] - r32.coeffs[m]) / denom);
        }
        CHECK(max_rel < 1e-12);
    }
    SECTION("error estimate is tiny at 64 terms") {
        CHECK(r.error_estimate < 1e-100);
        CHECK(r.error_estimate > 0.0);
    }
}

TEST_CASE("numeric period polynomials are cocycles, weights 12..22") {
    for (int k = 12; k <= 22; k += 2) {
        for (const QSeries& f : cusp_basis(k, 64)) {
            NumericPoly r = numeric_period_polynomial(f);
            CHECK(numeric_cocycle_residual(r) < 1e-8);
        }
    }
}

TEST_CASE("numeric period polynomial rejects bad input") {
    QSeries e4 = eisenstein_E(4, 32);
    CHECK_THROWS_AS(numeric_period_polynomial(e4), std::invalid_argument); // constant term
    CHECK_THROWS_AS(numeric_period_polynomial(eisenstein_G2(32)), std::invalid_argument);
    QSeries delta = cusp_basis(12, 64)[0];
    CHECK_THROWS_AS(numeric_period_polynomial(delta.truncated(8)), std::invalid_argument);
}

TEST_CASE("odd part of the discriminant symbol matches the exact minus space") {
    QSeries delta = cusp_basis(12, 64)[0];
    NumericPoly r = numeric_period_polynomial(delta);
    // r = r+ + i r-: the odd-exponent coefficients are purely imaginary
    NumericPoly minus;
    minus.two_n = 10;
    minus.coeffs.assign(11, {});
    for (int m = 1; m <= 10; m += 2)
        minus.coeffs[m] = r.coeffs[m].imag();
    PeriodSpace cminus = cuspidal_quotient(split_parity(cocycle_space(10)).second);
    REQUIRE(cminus.dimension() == 1);
    std::vector<std::vector<double>> span{to_doubles(cminus.basis[0], 11)};
    CHECK(numeric_span_deviation(minus.coeffs, span) < 1e-8);
    // and the even slots are real up to roundoff
    for (int m = 0; m <= 10; m += 2)
        CHECK(std::abs(r.coeffs[m].imag()) <= 1e-8 * std::abs(r.coeffs[m].real()) + 1e-12);
}
