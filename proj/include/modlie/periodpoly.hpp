#pragma once

#include "modlie/linalg.hpp"
#include "modlie/modforms.hpp"
#include "modlie/sl2.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace modlie {

enum class Parity { None, Plus, Minus };

/// Space of period polynomials of degree 2n: exact solutions of
/// (1+S) r = 0 and (1+U+U^2) r = 0, optionally split by the parity of
/// the exponent of a and/or reduced modulo the coboundary a^2n - b^2n.
struct PeriodSpace {
    int two_n = 0;
    Parity parity = Parity::None;
    bool cuspidal = false;
    std::vector<PolyAB> basis;

    int dimension() const { return static_cast<int>(basis.size()); }

    std::string flavor() const {
        std::string base = parity == Parity::Plus    ? "plus"
                           : parity == Parity::Minus ? "minus"
                                                     : "full-cocycle";
        if (!cuspidal)
            return base;
        return parity == Parity::None ? "cuspidal" : "cuspidal-" + base;
    }
};

/// b^2n - a^2n, the value on S of the coboundary of a^2n.
inline PolyAB coboundary(int two_n) {
    PolyAB p(two_n);
    p.set(0, Rational(1));
    p.set(two_n, Rational(-1));
    return p;
}

/// Stacked condition matrix of (1+S) and (1+U+U^2) on degree-2n
/// coefficient vectors.
inline QMatrix cocycle_condition_matrix(int two_n) {
    int dim = two_n + 1;
    QMatrix ms = poly_action_matrix(GL2Z::S(), two_n);
    GL2Z u = GL2Z::U();
    QMatrix mu = poly_action_matrix(u, two_n);
    QMatrix mu2 = poly_action_matrix(u * u, two_n);
    QMatrix stacked(2 * dim, dim);
    for (int j = 0; j < dim; ++j) {
        for (int i = 0; i < dim; ++i) {
            Rational top = ms.get(i, j) + (i == j ? Rational(1) : Rational(0));
            Rational bot = mu.get(i, j) + mu2.get(i, j) + (i == j ? Rational(1) : Rational(0));
            if (!top.is_zero())
                stacked.set(i, j, top);
            if (!bot.is_zero())
                stacked.set(dim + i, j, bot);
        }
    }
    return stacked;
}

inline bool satisfies_cocycle_conditions(const PolyAB& p) {
    PolyAB s = p + act_on_poly(GL2Z::S(), p);
    if (!s.is_zero())
        return false;
    GL2Z u = GL2Z::U();
    PolyAB t = p + act_on_poly(u, p) + act_on_poly(u * u, p);
    return t.is_zero();
}

/// Exact kernel of the stacked cocycle conditions (canonical RREF
/// free-variable basis).
inline PeriodSpace cocycle_space(int two_n) {
    if (two_n < 2 || two_n % 2)
        throw std::invalid_argument("cocycle_space: degree must be even and >= 2");
    PeriodSpace space;
    space.two_n = two_n;
    for (const QVector& v : kernel_basis(cocycle_condition_matrix(two_n)))
        space.basis.push_back(PolyAB::from_vector(v));
    return space;
}

namespace detail {

/// Echelonize a list of coefficient vectors, dropping zero rows.
inline std::vector<PolyAB> echelonize(const std::vector<PolyAB>& polys, int two_n) {
    QMatrix m(static_cast<int>(polys.size()), two_n + 1);
    for (size_t i = 0; i < polys.size(); ++i)
        for (const auto& [j, c] : polys[i].coeffs())
            m.set(static_cast<int>(i), j, c);
    RrefResult rr = rref(m);
    std::vector<PolyAB> out;
    for (size_t i = 0; i < rr.pivots.size(); ++i) {
        PolyAB p(two_n);
        for (int j = 0; j <= two_n; ++j)
            p.set(j, rr.matrix.get(static_cast<int>(i), j));
        out.push_back(std::move(p));
    }
    return out;
}

} // namespace detail

/// Split a cocycle space by parity of the exponent of a. Both parity
/// projections of a cocycle are again cocycles; dim+ + dim- equals the
/// input dimension.
inline std::pair<PeriodSpace, PeriodSpace> split_parity(const PeriodSpace& space) {
    if (space.parity != Parity::None)
        throw std::invalid_argument("split_parity: space is already parity-split");
    std::vector<PolyAB> even_parts, odd_parts;
    for (const PolyAB& p : space.basis) {
        PolyAB even(space.two_n), odd(space.two_n);
        for (const auto& [j, c] : p.coeffs())
            (j % 2 ? odd : even).set(j, c);
        if (!satisfies_cocycle_conditions(even) || !satisfies_cocycle_conditions(odd))
            throw std::logic_error("split_parity: parity projection left the cocycle space");
        even_parts.push_back(std::move(even));
        odd_parts.push_back(std::move(odd));
    }
    PeriodSpace plus{space.two_n, Parity::Plus, space.cuspidal,
                     detail::echelonize(even_parts, space.two_n)};
    PeriodSpace minus{space.two_n, Parity::Minus, space.cuspidal,
                      detail::echelonize(odd_parts, space.two_n)};
    if (plus.dimension() + minus.dimension() != space.dimension())
        throw std::logic_error("split_parity: dimensions do not add up");
    return {std::move(plus), std::move(minus)};
}

/// Quotient by the coboundary b^2n - a^2n, realized by canonical
/// representatives with zero a^2n coefficient (the cocycle relations
/// then force the b^2n coefficient to vanish too). Drops the dimension
/// by 1 on spaces containing the coboundary (full and plus), by 0 on
/// the minus part.
inline PeriodSpace cuspidal_quotient(const PeriodSpace& space) {
    if (space.cuspidal)
        throw std::invalid_argument("cuspidal_quotient: space is already cuspidal");
    int two_n = space.two_n;
    PolyAB cob = coboundary(two_n);
    std::vector<PolyAB> reduced;
    for (PolyAB p : space.basis) {
        Rational top = p.get(two_n);
        if (!top.is_zero())
            p += top * cob; // cob has -1 at a^2n, so this zeroes the top coefficient
        if (!p.get(two_n).is_zero() || !p.get(0).is_zero())
            throw std::logic_error("cuspidal_quotient: end coefficients did not vanish");
        if (!p.is_zero())
            reduced.push_back(std::move(p));
    }
    PeriodSpace out{two_n, space.parity, true, detail::echelonize(reduced, two_n)};
    int expected_drop = space.parity == Parity::Minus ? 0 : 1;
    if (out.dimension() != space.dimension() - expected_drop)
        throw std::logic_error("cuspidal_quotient: unexpected dimension drop");
    return out;
}

/// Numerically computed period polynomial: complex coefficients indexed
/// by the exponent of a, plus a truncation-error scale.
struct NumericPoly {
    int two_n = 0;
    std::vector<std::complex<double>> coeffs;
    double error_estimate = 0.0;
};

namespace detail {

/// Closed form of int_1^inf e^{-c y} y^m dy =
/// m! e^{-c} sum_{i=0}^m c^{i-m-1} / i!.
inline double exp_moment_tail(int m, double c) {
    double sum = 0.0;
    double c_pow = std::pow(c, -(m + 1)); // c^{i-m-1} at i = 0
    double inv_fact = 1.0;                // 1/i!
    for (int i = 0; i <= m; ++i) {
        sum += c_pow * inv_fact;
        c_pow *= c;
        inv_fact /= i + 1;
    }
    double m_fact = 1.0;
    for (int i = 2; i <= m; ++i)
        m_fact *= i;
    return m_fact * std::exp(-c) * sum;
}

} // namespace detail

/// Modular symbol of a cusp form f of weight 2n+2, computed from the
/// moments I_m = int_0^inf f(iy) y^m dy. The integral is split at y = 1;
/// the lower piece is folded back with f(i/y) = (iy)^{2n+2} f(iy), and
/// each termwise integral over [1, inf) has the closed form above. The
/// stored coefficients are those of
///   r_f = -(2 pi i)^{2n+1} int_0^inf f(iy) (b - iy a)^{2n} d(iy).
inline NumericPoly numeric_period_polynomial(const QSeries& f) {
    if (f.weight() < 4 || f.weight() % 2)
        throw std::invalid_argument("numeric_period_polynomial: weight must be even and >= 4");
    if (f.quasimodular())
        throw std::invalid_argument("numeric_period_polynomial: G2 is not a modular form");
    if (f.precision() < 16)
        throw std::invalid_argument("numeric_period_polynomial: need precision >= 16");
    if (!f.coeff(0).is_zero())
        throw std::invalid_argument("numeric_period_polynomial: nonzero constant term");

    int two_n = f.weight() - 2;
    int n = two_n / 2;
    int terms = f.precision();
    const double two_pi = 2.0 * std::numbers::pi;

    std::vector<double> a(terms);
    for (int k = 1; k < terms; ++k)
        a[k] = f.coeff(k).to_double();

    // J_m = int_1^inf f(iy) y^m dy, termwise
    std::vector<double> J(two_n + 1, 0.0);
    for (int m = 0; m <= two_n; ++m)
        for (int k = 1; k < terms; ++k)
            J[m] += a[k] * detail::exp_moment_tail(m, two_pi * k);

    // I_m = J_m + i^{2n+2} J_{2n-m}; i^{2n+2} = (-1)^{n+1}
    double fold = (n % 2 == 0) ? -1.0 : 1.0;

    NumericPoly out;
    out.two_n = two_n;
    out.coeffs.assign(two_n + 1, {});
    // -(2 pi i)^{2n+1} * i * (-i)^m = (2 pi)^{2n+1} (-1)^n (-i)^m
    double prefactor = std::pow(two_pi, two_n + 1) * ((n % 2 == 0) ? 1.0 : -1.0);
    const std::complex<double> minus_i(0.0, -1.0);
    std::complex<double> phase(1.0, 0.0);
    for (int m = 0; m <= two_n; ++m) {
        double moment = J[m] + fold * J[two_n - m];
        double binom = binomial(two_n, m).convert_to<double>();
        out.coeffs[m] = prefactor * binom * phase * moment;
        phase *= minus_i;
    }

    // truncation scale: first dropped coefficient times the tail integral
    double binom_mid = binomial(two_n, n).convert_to<double>();
    out.error_estimate = std::abs(a[terms - 1]) * std::pow(two_pi, two_n + 1) * binom_mid * 2.0 *
                         detail::exp_moment_tail(two_n, two_pi * terms);
    return out;
}

/// Even part r+: even a-exponent coefficients are real for forms with
/// real Fourier coefficients; odd slots are zeroed.
inline NumericPoly numeric_plus_part(const NumericPoly& r) {
    NumericPoly out;
    out.two_n = r.two_n;
    out.error_estimate = r.error_estimate;
    out.coeffs.assign(r.two_n + 1, {});
    for (int m = 0; m <= r.two_n; m += 2)
        out.coeffs[m] = r.coeffs[m].real();
    return out;
}

/// Reduce modulo the coboundary so that both end coefficients vanish
/// (possible for any numeric cocycle; exact cuspidal representatives
/// use the same normalization).
inline NumericPoly numeric_reduce_coboundary(const NumericPoly& r) {
    NumericPoly out = r;
    // add top * (b^2n - a^2n): zeroes the a^2n slot
    std::complex<double> top = out.coeffs[r.two_n];
    out.coeffs[0] += top;
    out.coeffs[r.two_n] -= top;
    return out;
}

inline double max_abs(const std::vector<std::complex<double>>& v) {
    double m = 0.0;
    for (const auto& z : v)
        m = std::max(m, std::abs(z));
    return m;
}

/// Max-norm relative residual of the two cocycle conditions applied
/// numerically.
inline double numeric_cocycle_residual(const NumericPoly& r) {
    int dim = r.two_n + 1;
    auto as_double = [&](const QMatrix& m) {
        std::vector<std::vector<double>> d(dim, std::vector<double>(dim, 0.0));
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                d[i][j] = m.get(i, j).to_double();
        return d;
    };
    GL2Z u = GL2Z::U();
    auto ms = as_double(poly_action_matrix(GL2Z::S(), r.two_n));
    auto mu = as_double(poly_action_matrix(u, r.two_n));
    auto mu2 = as_double(poly_action_matrix(u * u, r.two_n));

    std::vector<std::complex<double>> rs(dim), ru(dim);
    for (int i = 0; i < dim; ++i) {
        rs[i] = r.coeffs[i];
        ru[i] = r.coeffs[i];
        for (int j = 0; j < dim; ++j) {
            rs[i] += ms[i][j] * r.coeffs[j];
            ru[i] += (mu[i][j] + mu2[i][j]) * r.coeffs[j];
        }
    }
    double scale = max_abs(r.coeffs);
    if (scale == 0.0)
        return 0.0;
    return std::max(max_abs(rs), max_abs(ru)) / scale;
}

/// Relative L2 deviation of v from the span of the given real vectors
/// (least squares with complex coefficients). Returns 0 when v itself
/// vanishes.
inline double numeric_span_deviation(const std::vector<std::complex<double>>& v,
                                     const std::vector<std::vector<double>>& span) {
    size_t n = v.size();
    double vnorm2 = 0.0;
    for (const auto& z : v)
        vnorm2 += std::norm(z);
    if (vnorm2 == 0.0)
        return 0.0;
    size_t k = span.size();
    if (k == 0)
        return 1.0;

    // normal equations G x = rhs (G real symmetric, rhs complex)
    std::vector<std::vector<double>> g(k, std::vector<double>(k, 0.0));
    std::vector<std::complex<double>> rhs(k);
    for (size_t i = 0; i < k; ++i) {
        for (size_t j = 0; j < k; ++j)
            for (size_t t = 0; t < n; ++t)
                g[i][j] += span[i][t] * span[j][t];
        for (size_t t = 0; t < n; ++t)
            rhs[i] += span[i][t] * v[t];
    }
    // Gaussian elimination on the small system
    for (size_t col = 0; col < k; ++col) {
        size_t piv = col;
        for (size_t r = col + 1; r < k; ++r)
            if (std::abs(g[r][col]) > std::abs(g[piv][col]))
                piv = r;
        std::swap(g[piv], g[col]);
        std::swap(rhs[piv], rhs[col]);
        if (std::abs(g[col][col]) < 1e-300)
            throw std::runtime_error("numeric_span_deviation: singular span");
        for (size_t r = 0; r < k; ++r) {
            if (r == col)
                continue;
            double f = g[r][col] / g[col][col];
            for (size_t c = col; c < k; ++c)
                g[r][c] -= f * g[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<std::complex<double>> x(k);
    for (size_t i = 0; i < k; ++i)
        x[i] = rhs[i] / g[i][i];

    double dev2 = 0.0;
    for (size_t t = 0; t < n; ++t) {
        std::complex<double> fit;
        for (size_t i = 0; i < k; ++i)
            fit += x[i] * span[i][t];
        dev2 += std::norm(v[t] - fit);
    }
    return std::sqrt(dev2 / vnorm2);
}

} // namespace modlie
