#pragma once

#include "modlie/lyndon.hpp"
#include "modlie/rational.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace modlie {

inline constexpr int kDefaultDegreeCap = 16;

/// Thrown when an operation would produce Lie elements above the degree
/// cap. Results are never silently truncated.
class DegreeCapExceeded : public std::runtime_error {
public:
    DegreeCapExceeded(int degree, int cap)
        : std::runtime_error("degree cap exceeded: need degree " + std::to_string(degree) +
                             " > cap " + std::to_string(cap)) {}
};

inline void check_degree_cap(int degree, int cap) {
    if (degree > cap)
        throw DegreeCapExceeded(degree, cap);
}

/// Noncommutative polynomial in the tensor algebra on {a, b}: word -> coefficient.
using TensorPoly = std::map<Word, Rational>;

inline void tensor_axpy(TensorPoly& dst, const Rational& c, const TensorPoly& src) {
    if (c.is_zero())
        return;
    for (const auto& [w, v] : src) {
        auto it = dst.find(w);
        if (it == dst.end()) {
            dst.emplace(w, c * v);
        } else {
            it->second += c * v;
            if (it->second.is_zero())
                dst.erase(it);
        }
    }
}

inline TensorPoly tensor_mul(const TensorPoly& x, const TensorPoly& y) {
    TensorPoly out;
    for (const auto& [wx, cx] : x)
        for (const auto& [wy, cy] : y) {
            Word w = wx.concat(wy);
            auto it = out.find(w);
            if (it == out.end()) {
                out.emplace(w, cx * cy);
            } else {
                it->second += cx * cy;
                if (it->second.is_zero())
                    out.erase(it);
            }
        }
    return out;
}

/// Element of the free Lie algebra on a, b, written in the Lyndon-word
/// basis (each word stands for its right standard bracketing). Only
/// nonzero coefficients are stored.
class LieElement {
public:
    LieElement() = default;

    static LieElement zero() { return {}; }

    static LieElement generator(char c) {
        if (c != 'a' && c != 'b')
            throw std::invalid_argument("LieElement::generator: expected 'a' or 'b'");
        LieElement e;
        e.terms_.emplace(Word::from_string(std::string(1, c)), Rational(1));
        return e;
    }

    static LieElement basis_term(const Word& w, const Rational& c = Rational(1)) {
        if (!is_lyndon(w))
            throw std::invalid_argument("LieElement::basis_term: not a Lyndon word: " + w.str());
        LieElement e;
        if (!c.is_zero())
            e.terms_.emplace(w, c);
        return e;
    }

    const std::map<Word, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Rational coeff(const Word& w) const {
        auto it = terms_.find(w);
        return it == terms_.end() ? Rational() : it->second;
    }

    void add_term(const Word& w, const Rational& c) {
        if (c.is_zero())
            return;
        auto it = terms_.find(w);
        if (it == terms_.end()) {
            terms_.emplace(w, c);
        } else {
            it->second += c;
            if (it->second.is_zero())
                terms_.erase(it);
        }
    }

    bool is_homogeneous() const {
        if (terms_.empty())
            return true;
        int d = terms_.begin()->first.len;
        for (const auto& [w, c] : terms_)
            if (w.len != d)
                return false;
        return true;
    }

    /// Degree of a homogeneous element; -1 for zero.
    int homogeneous_degree() const {
        if (terms_.empty())
            return -1;
        if (!is_homogeneous())
            throw std::logic_error("LieElement: not homogeneous");
        return terms_.begin()->first.len;
    }

    int max_degree() const {
        int d = 0;
        for (const auto& [w, c] : terms_)
            d = std::max<int>(d, w.len);
        return d;
    }

    LieElement& operator+=(const LieElement& o) {
        for (const auto& [w, c] : o.terms_)
            add_term(w, c);
        return *this;
    }
    LieElement& operator-=(const LieElement& o) {
        for (const auto& [w, c] : o.terms_)
            add_term(w, -c);
        return *this;
    }
    LieElement& operator*=(const Rational& c) {
        if (c.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [w, v] : terms_)
            v *= c;
        return *this;
    }

    friend LieElement operator+(LieElement a, const LieElement& b) { return a += b; }
    friend LieElement operator-(LieElement a, const LieElement& b) { return a -= b; }
    friend LieElement operator*(const Rational& c, LieElement a) { return a *= c; }
    LieElement operator-() const {
        LieElement r = *this;
        for (auto& [w, v] : r.terms_)
            v = -v;
        return r;
    }

    friend bool operator==(const LieElement& a, const LieElement& b) {
        return a.terms_ == b.terms_;
    }

private:
    std::map<Word, Rational> terms_;
};

namespace detail {

/// Shared caches for tensor expansions of Lyndon bracketings and for
/// pairwise basis brackets. Guarded by a recursive mutex so parallel
/// callers are safe.
class FreeLieCache {
public:
    static FreeLieCache& instance() {
        static FreeLieCache c;
        return c;
    }

    const TensorPoly& expansion(const Word& w) {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        auto it = expansions_.find(w.key());
        if (it != expansions_.end())
            return it->second;
        TensorPoly p;
        if (w.len == 1) {
            p.emplace(w, Rational(1));
        } else {
            auto [u, v] = std_factorization(w);
            const TensorPoly eu = expansion(u); // copy: recursion may rehash
            const TensorPoly ev = expansion(v);
            p = tensor_mul(eu, ev);
            tensor_axpy(p, Rational(-1), tensor_mul(ev, eu));
        }
        return expansions_.emplace(w.key(), std::move(p)).first->second;
    }

    const LieElement& pair_bracket(const Word& u, const Word& v);

private:
    std::recursive_mutex mu_;
    std::unordered_map<std::uint32_t, TensorPoly> expansions_;
    std::unordered_map<std::uint64_t, LieElement> pair_brackets_;
};

} // namespace detail

/// Rewrite a tensor-algebra element known to lie in the free Lie algebra
/// into Lyndon-basis coordinates. Uses the triangularity of Lyndon
/// bracketings: the expansion of the bracketing of w is w plus
/// lexicographically larger words of the same length.
inline LieElement lie_from_tensor(TensorPoly rest) {
    LieElement out;
    auto& cache = detail::FreeLieCache::instance();
    while (!rest.empty()) {
        Word w = rest.begin()->first;       // copy: the axpy below erases this entry
        Rational c = rest.begin()->second;
        if (!is_lyndon(w))
            throw std::invalid_argument(
                "lie_from_tensor: input is not a Lie element (leading word " + w.str() + ")");
        out.add_term(w, c);
        tensor_axpy(rest, -c, cache.expansion(w));
    }
    return out;
}

inline TensorPoly tensor_from_lie(const LieElement& x) {
    TensorPoly out;
    auto& cache = detail::FreeLieCache::instance();
    for (const auto& [w, c] : x.terms())
        tensor_axpy(out, c, cache.expansion(w));
    return out;
}

namespace detail {

inline const LieElement& FreeLieCache::pair_bracket(const Word& u, const Word& v) {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    std::uint64_t k = (std::uint64_t(u.key()) << 32) | v.key();
    auto it = pair_brackets_.find(k);
    if (it != pair_brackets_.end())
        return it->second;
    const TensorPoly eu = expansion(u);
    const TensorPoly ev = expansion(v);
    TensorPoly t = tensor_mul(eu, ev);
    tensor_axpy(t, Rational(-1), tensor_mul(ev, eu));
    return pair_brackets_.emplace(k, lie_from_tensor(std::move(t))).first->second;
}

} // namespace detail

/// Lie bracket [x, y], computed in the tensor algebra and rewritten to
/// the Lyndon basis. Bilinear over the cached basis-pair brackets.
inline LieElement bracket(const LieElement& x, const LieElement& y,
                          int cap = kDefaultDegreeCap) {
    if (x.is_zero() || y.is_zero())
        return LieElement::zero();
    check_degree_cap(x.max_degree() + y.max_degree(), cap);
    auto& cache = detail::FreeLieCache::instance();
    LieElement out;
    for (const auto& [wx, cx] : x.terms())
        for (const auto& [wy, cy] : y.terms()) {
            if (wx == wy)
                continue;
            // normalize by antisymmetry so the cache only holds wx < wy
            if (wx < wy) {
                LieElement t = cache.pair_bracket(wx, wy);
                t *= cx * cy;
                out += t;
            } else {
                LieElement t = cache.pair_bracket(wy, wx);
                t *= -(cx * cy);
                out += t;
            }
        }
    return out;
}

/// ad_x^n(y): iterated left bracketing.
inline LieElement ad_power(const LieElement& x, int n, const LieElement& y,
                           int cap = kDefaultDegreeCap) {
    if (n < 0)
        throw std::invalid_argument("ad_power: negative exponent");
    LieElement r = y;
    for (int i = 0; i < n; ++i)
        r = bracket(x, r, cap);
    return r;
}

/// Extend a map on generators to a Lie algebra homomorphism
/// (used for linear substitutions such as the SL2 action).
inline LieElement apply_generator_substitution(const LieElement& image_a,
                                               const LieElement& image_b,
                                               const LieElement& x,
                                               int cap = kDefaultDegreeCap) {
    std::map<Word, LieElement> memo;
    auto rec = [&](auto&& self, const Word& w) -> const LieElement& {
        auto it = memo.find(w);
        if (it != memo.end())
            return it->second;
        LieElement val;
        if (w.len == 1) {
            val = w.letter(0) ? image_b : image_a;
        } else {
            auto [u, v] = std_factorization(w);
            val = bracket(self(self, u), self(self, v), cap);
        }
        return memo.emplace(w, std::move(val)).first->second;
    };
    LieElement out;
    for (const auto& [w, c] : x.terms()) {
        LieElement t = rec(rec, w);
        t *= c;
        out += t;
    }
    return out;
}

/// Extend generator values to a derivation by the Leibniz rule and
/// apply it to x. The optional memo persists across calls for a fixed
/// derivation (keyed by word).
inline LieElement apply_generator_derivation(const LieElement& value_a,
                                             const LieElement& value_b,
                                             const LieElement& x,
                                             int cap = kDefaultDegreeCap,
                                             std::map<Word, LieElement>* memo = nullptr) {
    std::map<Word, LieElement> local;
    std::map<Word, LieElement>& table = memo ? *memo : local;
    auto rec = [&](auto&& self, const Word& w) -> const LieElement& {
        auto it = table.find(w);
        if (it != table.end())
            return it->second;
        LieElement val;
        if (w.len == 1) {
            val = w.letter(0) ? value_b : value_a;
        } else {
            auto [u, v] = std_factorization(w);
            LieElement du = self(self, u);
            LieElement dv = self(self, v);
            val = bracket(du, LieElement::basis_term(v), cap) +
                  bracket(LieElement::basis_term(u), dv, cap);
        }
        return table.emplace(w, std::move(val)).first->second;
    };
    LieElement out;
    for (const auto& [w, c] : x.terms()) {
        LieElement t = rec(rec, w);
        t *= c;
        out += t;
    }
    return out;
}

} // namespace modlie
