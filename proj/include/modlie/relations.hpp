#pragma once

#include "modlie/deriv.hpp"
#include "modlie/periodpoly.hpp"

#include <utility>
#include <vector>

namespace modlie {

inline constexpr int kDefaultMaxRelationWeight = 18;
inline constexpr int kHardMaxRelationWeight = 22;

/// A candidate quadratic relation sum c_{jk} [eps_{2j+2}, eps_{2k+2}] = 0
/// at cusp weight 2n+2, indexed by unordered pairs {j,k}, j+k = n,
/// 0 < j < k.
struct RelationCandidate {
    int n = 0;
    std::map<std::pair<int, int>, Rational> coefficients;
};

/// Unordered index pairs {j, k}, j + k = n, 0 < j < k, j ascending.
/// The diagonal {j,j} is dropped since [d,d] = 0.
inline std::vector<std::pair<int, int>> relation_pairs(int n) {
    std::vector<std::pair<int, int>> pairs;
    for (int j = 1; 2 * j < n; ++j)
        pairs.push_back({j, n - j});
    return pairs;
}

namespace detail {

inline void check_relation_weight(int n, int max_weight) {
    if (n < 2)
        throw std::invalid_argument("relations: n must be >= 2 (cusp weight 2n+2 >= 6)");
    int weight = 2 * n + 2;
    if (weight > max_weight || weight > kHardMaxRelationWeight)
        throw DegreeCapExceeded(2 * n + 5, std::min(max_weight, kHardMaxRelationWeight) + 3);
}

/// The bracket derivations [eps_{2j+2}, eps_{2k+2}] for each pair.
inline std::vector<Derivation> bracket_columns(int n) {
    int cap = 2 * n + 5;
    std::vector<Derivation> cols;
    for (auto [j, k] : relation_pairs(n))
        cols.push_back(
            bracket_der(epsilon(j + 1).derivation, epsilon(k + 1).derivation, cap));
    return cols;
}

} // namespace detail

/// Sparse matrix whose column for the pair {j,k} holds the Lyndon
/// coordinates (Lie degree 2n+5) of [eps_{2j+2}, eps_{2k+2}].
inline QMatrix bracket_matrix(int n, int max_weight = kDefaultMaxRelationWeight) {
    detail::check_relation_weight(n, max_weight);
    std::vector<Derivation> cols = detail::bracket_columns(n);
    long long dim = 2 * witt_dimension(2 * n + 5);
    QMatrix m(static_cast<int>(dim), static_cast<int>(cols.size()));
    for (size_t c = 0; c < cols.size(); ++c) {
        QVector v = coordinates(cols[c]);
        for (const auto& [i, val] : v.entries())
            m.set(i, static_cast<int>(c), val);
    }
    return m;
}

/// Exact kernel of the bracket map. Every returned candidate is
/// re-verified to give the exact zero derivation when expanded through
/// bracket_der.
inline std::vector<RelationCandidate> quadratic_relations(
    int n, int max_weight = kDefaultMaxRelationWeight) {
    detail::check_relation_weight(n, max_weight);
    auto pairs = relation_pairs(n);
    std::vector<Derivation> cols = detail::bracket_columns(n);

    long long dim = 2 * witt_dimension(2 * n + 5);
    QMatrix m(static_cast<int>(dim), static_cast<int>(cols.size()));
    for (size_t c = 0; c < cols.size(); ++c) {
        QVector v = coordinates(cols[c]);
        for (const auto& [i, val] : v.entries())
            m.set(i, static_cast<int>(c), val);
    }

    std::vector<RelationCandidate> out;
    for (const QVector& kvec : kernel_basis(m)) {
        RelationCandidate cand;
        cand.n = n;
        LieElement on_a, on_b;
        for (int c = 0; c < static_cast<int>(pairs.size()); ++c) {
            Rational coeff = kvec.get(c);
            if (coeff.is_zero())
                continue;
            cand.coefficients[pairs[c]] = coeff;
            on_a += coeff * cols[c].value_on_a();
            on_b += coeff * cols[c].value_on_b();
        }
        if (cand.coefficients.empty() || !on_a.is_zero() || !on_b.is_zero())
            throw std::logic_error("quadratic_relations: kernel vector failed exact re-verification");
        out.push_back(std::move(cand));
    }
    return out;
}

/// One kernel vector matched against the period-polynomial picture.
struct KernelMatch {
    RelationCandidate relation;
    /// secondary coordinates: c_{jk} (2j)! (2k)!, the e-generator scaling
    std::map<std::pair<int, int>, Rational> e_scaled;
    /// interior-coefficient polynomial sum_j c_j a^{2j} b^{2n-2j}
    PolyAB interior{0};
    bool exact_member = false;
    double numeric_relative_deviation = 0.0;
};

struct RelationReport {
    int n = 0;
    int weight = 0;
    std::vector<std::pair<int, int>> pairs;
    int dim_cusp = 0;
    bool consistent_empty = false; // no kernel vectors and no cusp forms
    std::vector<KernelMatch> matches;
};

/// Extend a kernel vector antisymmetrically (c_{kj} = -c_{jk}) and read
/// it as the interior of an even period polynomial of degree 2n.
inline PolyAB relation_interior_polynomial(const RelationCandidate& cand) {
    int n = cand.n;
    PolyAB p(2 * n);
    for (const auto& [pair, c] : cand.coefficients) {
        auto [j, k] = pair;
        p.add(2 * j, c);
        p.add(2 * k, -c);
    }
    return p;
}

/// Cross-validation of the relation kernel against period polynomials:
/// each kernel vector's interior polynomial must lie in the exact
/// cuspidal plus space, and must match the numeric modular symbols of
/// the echelon cusp basis projectively.
inline RelationReport match_to_period_polynomials(int n, int series_terms = 64,
                                                  int max_weight = kDefaultMaxRelationWeight) {
    detail::check_relation_weight(n, max_weight);
    RelationReport report;
    report.n = n;
    report.weight = 2 * n + 2;
    report.pairs = relation_pairs(n);
    report.dim_cusp = dim_cusp_forms(report.weight);

    std::vector<RelationCandidate> kernel = quadratic_relations(n, max_weight);
    report.consistent_empty = kernel.empty() && report.dim_cusp == 0;
    if (kernel.empty())
        return report;

    PeriodSpace cuspidal_plus =
        cuspidal_quotient(split_parity(cocycle_space(2 * n)).first);

    // numeric modular symbols of the echelon cusp basis, even parts,
    // reduced modulo the coboundary so the ends vanish like the exact
    // representatives
    std::vector<std::vector<double>> numeric_span;
    for (const QSeries& f : cusp_basis(report.weight, series_terms)) {
        NumericPoly plus = numeric_reduce_coboundary(
            numeric_plus_part(numeric_period_polynomial(f)));
        std::vector<double> row(2 * n + 1, 0.0);
        for (int m = 0; m <= 2 * n; ++m)
            row[m] = plus.coeffs[m].real();
        numeric_span.push_back(std::move(row));
    }

    for (RelationCandidate& cand : kernel) {
        KernelMatch match;
        match.interior = relation_interior_polynomial(cand);
        for (const auto& [pair, c] : cand.coefficients)
            match.e_scaled[pair] =
                c * Rational(factorial(2 * pair.first) * factorial(2 * pair.second));

        // exact membership: adding the polynomial must not raise the rank
        {
            int dim = 2 * n + 1;
            int k = cuspidal_plus.dimension();
            QMatrix m(k + 1, dim);
            for (int i = 0; i < k; ++i)
                for (const auto& [j, c] : cuspidal_plus.basis[i].coeffs())
                    m.set(i, j, c);
            for (const auto& [j, c] : match.interior.coeffs())
                m.set(k, j, c);
            match.exact_member = rank(m) == k;
        }

        std::vector<std::complex<double>> v(2 * n + 1);
        for (const auto& [j, c] : match.interior.coeffs())
            v[j] = c.to_double();
        match.numeric_relative_deviation = numeric_span_deviation(v, numeric_span);

        match.relation = std::move(cand);
        report.matches.push_back(std::move(match));
    }
    return report;
}

} // namespace modlie
