#pragma once

#include "modlie/linalg.hpp"
#include "modlie/rational.hpp"

#include <algorithm>
#include <mutex>
#include <vector>

namespace modlie {

/// n-th Bernoulli number, convention B_1 = -1/2. Memoized recurrence
/// sum_{k=0}^{n} C(n+1,k) B_k = 0.
inline Rational bernoulli(int n) {
    if (n < 0)
        throw std::invalid_argument("bernoulli: n must be >= 0");
    static std::vector<Rational> table{Rational(1)};
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    while (static_cast<int>(table.size()) <= n) {
        int m = static_cast<int>(table.size());
        Rational acc;
        for (int k = 0; k < m; ++k)
            acc += Rational(binomial(m + 1, k)) * table[k];
        table.push_back(-acc / Rational(m + 1));
    }
    return table[n];
}

/// Sum of the e-th powers of the divisors of k.
inline Integer sigma(int e, int k) {
    if (k < 1)
        throw std::invalid_argument("sigma: k must be >= 1");
    Integer total = 0;
    for (int d = 1; d <= k; ++d) {
        if (k % d)
            continue;
        Integer p = 1;
        for (int i = 0; i < e; ++i)
            p *= d;
        total += p;
    }
    return total;
}

/// Truncated q-expansion with exact rational coefficients of q^0..q^{N-1}.
/// Arithmetic aligns to the smaller precision; addition refuses mixed
/// weights. The quasi-modular flag marks G_2, which the period-polynomial
/// and relation operations reject.
class QSeries {
public:
    QSeries() = default;
    QSeries(int weight, std::vector<Rational> coeffs, bool quasimodular = false)
        : weight_(weight), coeffs_(std::move(coeffs)), quasimodular_(quasimodular) {
        if (weight < 0 || weight % 2)
            throw std::invalid_argument("QSeries: weight must be even and >= 0");
    }

    int weight() const { return weight_; }
    int precision() const { return static_cast<int>(coeffs_.size()); }
    bool quasimodular() const { return quasimodular_; }
    const std::vector<Rational>& coeffs() const { return coeffs_; }

    Rational coeff(int k) const {
        if (k < 0 || k >= precision())
            throw std::out_of_range("QSeries: coefficient index beyond precision");
        return coeffs_[k];
    }

    bool is_zero() const {
        return std::all_of(coeffs_.begin(), coeffs_.end(),
                           [](const Rational& c) { return c.is_zero(); });
    }

    QSeries truncated(int n) const {
        std::vector<Rational> c(coeffs_.begin(), coeffs_.begin() + std::min(n, precision()));
        return QSeries(weight_, std::move(c), quasimodular_);
    }

    friend QSeries operator+(const QSeries& x, const QSeries& y) {
        if (x.weight_ != y.weight_)
            throw std::invalid_argument("QSeries: cannot add series of different weights");
        int n = std::min(x.precision(), y.precision());
        std::vector<Rational> c(n);
        for (int i = 0; i < n; ++i)
            c[i] = x.coeffs_[i] + y.coeffs_[i];
        return QSeries(x.weight_, std::move(c), x.quasimodular_ || y.quasimodular_);
    }
    friend QSeries operator-(const QSeries& x, const QSeries& y) {
        return x + (Rational(-1) * y);
    }
    friend QSeries operator*(const Rational& c, QSeries x) {
        for (auto& v : x.coeffs_)
            v *= c;
        return x;
    }
    friend QSeries operator*(const QSeries& x, const QSeries& y) {
        int n = std::min(x.precision(), y.precision());
        std::vector<Rational> c(n);
        for (int i = 0; i < n; ++i) {
            if (x.coeffs_[i].is_zero())
                continue;
            for (int j = 0; i + j < n; ++j)
                if (!y.coeffs_[j].is_zero())
                    c[i + j] += x.coeffs_[i] * y.coeffs_[j];
        }
        return QSeries(x.weight_ + y.weight_, std::move(c),
                       x.quasimodular_ || y.quasimodular_);
    }

    QSeries pow(int e) const {
        QSeries r(0, std::vector<Rational>(precision()));
        r.coeffs_[0] = 1;
        QSeries base = *this;
        for (int i = 0; i < e; ++i)
            r = r * base;
        return r;
    }

    friend bool operator==(const QSeries& x, const QSeries& y) {
        return x.weight_ == y.weight_ && x.coeffs_ == y.coeffs_;
    }

private:
    int weight_ = 0;
    std::vector<Rational> coeffs_;
    bool quasimodular_ = false;
};

/// Normalized Eisenstein series of even weight 2n >= 4:
/// G_{2n} = -B_{2n}/4n + sum_{k>=1} sigma_{2n-1}(k) q^k.
inline QSeries eisenstein_G(int two_n, int terms) {
    if (two_n < 4 || two_n % 2)
        throw std::invalid_argument("eisenstein_G: weight must be even and >= 4");
    if (terms < 1)
        throw std::invalid_argument("eisenstein_G: need at least one term");
    std::vector<Rational> c(terms);
    c[0] = -bernoulli(two_n) / Rational(2 * two_n);
    for (int k = 1; k < terms; ++k)
        c[k] = Rational(sigma(two_n - 1, k));
    return QSeries(two_n, std::move(c));
}

/// Quasi-modular G_2: constant term -1/24, then sigma_1(k). Only the
/// transport module consumes it.
inline QSeries eisenstein_G2(int terms) {
    if (terms < 1)
        throw std::invalid_argument("eisenstein_G2: need at least one term");
    std::vector<Rational> c(terms);
    c[0] = Rational(-1, 24);
    for (int k = 1; k < terms; ++k)
        c[k] = Rational(sigma(1, k));
    return QSeries(2, std::move(c), /*quasimodular=*/true);
}

/// Eisenstein series normalized to constant term 1.
inline QSeries eisenstein_E(int two_n, int terms) {
    QSeries g = eisenstein_G(two_n, terms);
    return (Rational(1) / g.coeff(0)) * g;
}

/// dim M_k for level one: the number of monomials E4^alpha E6^beta with
/// 4 alpha + 6 beta = k.
inline int dim_modular_forms(int k) {
    if (k < 0 || k % 2)
        return 0;
    int count = 0;
    for (int alpha = 0; 4 * alpha <= k; ++alpha)
        if ((k - 4 * alpha) % 6 == 0)
            ++count;
    return count;
}

inline int dim_cusp_forms(int k) { return std::max(0, dim_modular_forms(k) - 1); }

/// Monomial spanning set {E4^alpha E6^beta : 4 alpha + 6 beta = k},
/// alpha descending.
inline std::vector<QSeries> mform_basis(int k, int terms) {
    if (k < 0 || k % 2)
        throw std::invalid_argument("mform_basis: weight must be even and >= 0");
    std::vector<QSeries> out;
    if (k == 0) {
        std::vector<Rational> one(terms);
        one[0] = 1;
        out.emplace_back(0, std::move(one));
        return out;
    }
    QSeries e4 = eisenstein_E(4, terms);
    QSeries e6 = eisenstein_E(6, terms);
    for (int alpha = k / 4; alpha >= 0; --alpha) {
        int rem = k - 4 * alpha;
        if (rem % 6)
            continue;
        out.push_back(e4.pow(alpha) * e6.pow(rem / 6));
    }
    return out;
}

/// Echelonized basis of cusp forms of weight k (leading terms q, q^2, ...).
inline std::vector<QSeries> cusp_basis(int k, int terms) {
    std::vector<QSeries> monomials = mform_basis(k, terms);
    int dim = static_cast<int>(monomials.size());
    if (dim == 0 || terms < dim + 1)
        return {};
    QMatrix m(dim, terms);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < terms; ++j)
            m.set(i, j, monomials[i].coeff(j));
    RrefResult rr = rref(m);
    std::vector<QSeries> out;
    for (size_t i = 0; i < rr.pivots.size(); ++i) {
        if (rr.pivots[i] == 0)
            continue; // the Eisenstein direction: nonzero constant term
        std::vector<Rational> c(terms);
        for (int j = 0; j < terms; ++j)
            c[j] = rr.matrix.get(static_cast<int>(i), j);
        out.emplace_back(k, std::move(c));
    }
    return out;
}

} // namespace modlie
