#pragma once

#include "modlie/freelie.hpp"
#include "modlie/linalg.hpp"
#include "modlie/sl2.hpp"

#include <memory>
#include <mutex>

namespace modlie {

/// Degree-homogeneous derivation of L(H), determined by its values on
/// the generators (value on a generator has Lie degree 1 + degree).
/// Carries a shared per-derivation memo for Leibniz evaluation.
class Derivation {
public:
    Derivation() : Derivation(0, LieElement::zero(), LieElement::zero()) {}

    Derivation(int degree, LieElement value_on_a, LieElement value_on_b)
        : degree_(degree),
          on_a_(std::move(value_on_a)),
          on_b_(std::move(value_on_b)),
          memo_(std::make_shared<Memo>()) {
        auto check = [&](const LieElement& v, const char* which) {
            if (v.is_zero())
                return;
            if (!v.is_homogeneous() || v.homogeneous_degree() != degree_ + 1)
                throw std::invalid_argument(std::string("Derivation: value on ") + which +
                                            " must be homogeneous of degree " +
                                            std::to_string(degree_ + 1));
        };
        check(on_a_, "a");
        check(on_b_, "b");
    }

    static Derivation zero(int degree) { return Derivation(degree, {}, {}); }

    static Derivation from_linear(const LinDeriv& L) {
        return Derivation(0, L.image_of_a, L.image_of_b);
    }

    int degree() const { return degree_; }
    const LieElement& value_on_a() const { return on_a_; }
    const LieElement& value_on_b() const { return on_b_; }
    bool is_zero() const { return on_a_.is_zero() && on_b_.is_zero(); }

    /// Leibniz extension to the whole free Lie algebra.
    LieElement apply(const LieElement& x, int cap = kDefaultDegreeCap) const {
        if (!x.is_zero())
            check_degree_cap(x.max_degree() + degree_, cap);
        std::lock_guard<std::mutex> lock(memo_->mu);
        return apply_generator_derivation(on_a_, on_b_, x, cap, &memo_->table);
    }

    friend bool operator==(const Derivation& x, const Derivation& y) {
        return x.degree_ == y.degree_ && x.on_a_ == y.on_a_ && x.on_b_ == y.on_b_;
    }

private:
    struct Memo {
        std::mutex mu;
        std::map<Word, LieElement> table;
    };

    int degree_;
    LieElement on_a_;
    LieElement on_b_;
    std::shared_ptr<Memo> memo_;
};

/// Inner derivation ad_u for homogeneous u. The degree (Lie-degree
/// shift) equals the degree of u, consistent with epsilon_2 = ad_{[b,a]}
/// having degree 2.
inline Derivation inner(const LieElement& u, int cap = kDefaultDegreeCap) {
    if (u.is_zero())
        return Derivation::zero(0);
    if (!u.is_homogeneous())
        throw std::invalid_argument("inner: argument must be homogeneous");
    int deg = u.homogeneous_degree();
    return Derivation(deg,
                      bracket(u, LieElement::generator('a'), cap),
                      bracket(u, LieElement::generator('b'), cap));
}

/// True iff d([a,b]) = 0 exactly.
inline bool is_der0(const Derivation& d, int cap = kDefaultDegreeCap) {
    LieElement ab = bracket(LieElement::generator('a'), LieElement::generator('b'), 2);
    return d.apply(ab, std::max(cap, d.degree() + 2)).is_zero();
}

/// Commutator of derivations: values given by
/// [d1,d2](x) = d1(d2 x) - d2(d1 x) on the generators.
inline Derivation bracket_der(const Derivation& d1, const Derivation& d2,
                              int cap = kDefaultDegreeCap) {
    int degree = d1.degree() + d2.degree();
    check_degree_cap(degree + 1, cap);
    LieElement on_a = d1.apply(d2.value_on_a(), cap) - d2.apply(d1.value_on_a(), cap);
    LieElement on_b = d1.apply(d2.value_on_b(), cap) - d2.apply(d1.value_on_b(), cap);
    return Derivation(degree, std::move(on_a), std::move(on_b));
}

/// The Eisenstein derivation of weight 2n, built on the basis
/// (v1, v2) = (b, a):
///   n = 0:  a -> 0, b -> -a (this is e_0);
///   n > 0:  with w = ad_b^{2n-1}(a) and
///           s = sum_{j+k=2n-1, j>k>0} (-1)^j [ad_b^j(a), ad_b^k(a)],
///           a -> [w, a] - s, b -> [w, b].
/// Lies in Der^0 (annihilates [a,b]) and is killed by the raising
/// operator for n >= 1.
struct Epsilon {
    int n = 0;
    Derivation derivation;
};

inline Epsilon epsilon(int n) {
    if (n < 0)
        throw std::invalid_argument("epsilon: n must be >= 0");
    if (n == 0)
        return {0, Derivation::from_linear(e0())};

    int cap = 2 * n + 1;
    LieElement a = LieElement::generator('a');
    LieElement b = LieElement::generator('b');

    // ad_b^j(a) for j <= 2n-1
    std::vector<LieElement> adb(2 * n);
    adb[0] = a;
    for (int j = 1; j <= 2 * n - 1; ++j)
        adb[j] = bracket(b, adb[j - 1], cap);
    const LieElement& w = adb[2 * n - 1];

    LieElement s;
    for (int j = n; j <= 2 * n - 2; ++j) {
        int k = 2 * n - 1 - j;
        if (!(j > k && k > 0))
            continue;
        LieElement term = bracket(adb[j], adb[k], cap);
        if (j % 2)
            term *= Rational(-1);
        s += term;
    }

    LieElement on_a = bracket(w, a, cap) - s;
    LieElement on_b = bracket(w, b, cap);
    return {n, Derivation(2 * n, std::move(on_a), std::move(on_b))};
}

/// Concatenated Lyndon coordinates of the generator values, in the
/// fixed lex basis order of degree deg+1: block 0 = value on a,
/// block 1 = value on b. Length 2 * |lyndon_basis(deg + 1)|.
inline QVector coordinates(const Derivation& d) {
    int vdeg = d.degree() + 1;
    if (vdeg < 1 || vdeg > Word::kMaxLen)
        throw DegreeCapExceeded(vdeg, Word::kMaxLen);
    auto& catalog = LyndonCatalog::instance();
    long long dim = witt_dimension(vdeg);
    QVector v(static_cast<int>(2 * dim));
    for (const auto& [w, c] : d.value_on_a().terms())
        v.set(catalog.index_of(w), c);
    for (const auto& [w, c] : d.value_on_b().terms())
        v.set(static_cast<int>(dim) + catalog.index_of(w), c);
    return v;
}

} // namespace modlie
