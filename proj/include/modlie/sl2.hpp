#pragma once

#include "modlie/freelie.hpp"
#include "modlie/linalg.hpp"

#include <array>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace modlie {

/// Integer 2x2 matrix [[a,b],[c,d]] with determinant 1.
struct GL2Z {
    long long a = 1, b = 0, c = 0, d = 1;

    GL2Z() = default;
    GL2Z(long long a_, long long b_, long long c_, long long d_) : a(a_), b(b_), c(c_), d(d_) {
        if (det() != 1)
            throw std::invalid_argument("GL2Z: determinant must be 1");
    }

    long long det() const { return a * d - b * c; }

    static GL2Z identity() { return {}; }
    static GL2Z minus_identity() { return {-1, 0, 0, -1}; }
    static GL2Z S() { return {0, -1, 1, 0}; }
    static GL2Z T() { return {1, 1, 0, 1}; }
    static GL2Z U() { return S() * T(); } // [[0,-1],[1,1]]

    GL2Z inverse() const { return {d, -b, -c, a}; }

    friend GL2Z operator*(const GL2Z& x, const GL2Z& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
    friend bool operator==(const GL2Z& x, const GL2Z& y) {
        return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
    }
};

/// Parse a word over {S, T, U} with optional integer exponents,
/// factors joined by '*', e.g. "S*T^-2" or "U^3".
inline GL2Z parse_group_word(std::string_view s) {
    GL2Z result = GL2Z::identity();
    size_t i = 0;
    auto skip_ws = [&] {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i])))
            ++i;
    };
    bool expect_factor = true;
    while (true) {
        skip_ws();
        if (i >= s.size())
            break;
        if (!expect_factor) {
            if (s[i] != '*')
                throw std::invalid_argument("parse_group_word: expected '*' in '" + std::string(s) + "'");
            ++i;
            skip_ws();
        }
        if (i >= s.size())
            throw std::invalid_argument("parse_group_word: trailing '*'");
        GL2Z base;
        switch (std::toupper(static_cast<unsigned char>(s[i]))) {
        case 'S': base = GL2Z::S(); break;
        case 'T': base = GL2Z::T(); break;
        case 'U': base = GL2Z::U(); break;
        case 'I': base = GL2Z::identity(); break;
        default:
            throw std::invalid_argument("parse_group_word: unknown generator '" +
                                        std::string(1, s[i]) + "'");
        }
        ++i;
        long long exp = 1;
        if (i < s.size() && s[i] == '^') {
            ++i;
            bool neg = false;
            if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
                neg = s[i] == '-';
                ++i;
            }
            if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
                throw std::invalid_argument("parse_group_word: bad exponent");
            exp = 0;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
                exp = exp * 10 + (s[i++] - '0');
            if (neg)
                exp = -exp;
        }
        GL2Z g = exp < 0 ? base.inverse() : base;
        for (long long k = 0; k < (exp < 0 ? -exp : exp); ++k)
            result = result * g;
        expect_factor = false;
    }
    return result;
}

/// Images of the generators under the action on H: the row vector
/// (a, -b) maps to (a, -b) * g. For g = [[p,q],[r,s]] this reads
/// a -> p a - r b and b -> -q a + s b.
struct HImages {
    LieElement of_a;
    LieElement of_b;
};

inline HImages act_on_H(const GL2Z& g) {
    LieElement gen_a = LieElement::generator('a');
    LieElement gen_b = LieElement::generator('b');
    HImages im;
    im.of_a = Rational(g.a) * gen_a - Rational(g.c) * gen_b;
    im.of_b = Rational(-g.b) * gen_a + Rational(g.d) * gen_b;
    return im;
}

/// Homogeneous polynomial of even degree 2n in a, b, the realization of
/// S^{2n}H. Keys are the exponent of a; the coefficient of a^j b^{2n-j}.
class PolyAB {
public:
    explicit PolyAB(int degree = 0) : degree_(degree) {
        if (degree < 0)
            throw std::invalid_argument("PolyAB: negative degree");
    }

    static PolyAB monomial(int a_exponent, int degree, const Rational& c = Rational(1)) {
        PolyAB p(degree);
        p.set(a_exponent, c);
        return p;
    }

    int degree() const { return degree_; }

    Rational get(int j) const {
        auto it = coeff_.find(j);
        return it == coeff_.end() ? Rational() : it->second;
    }
    void set(int j, const Rational& c) {
        if (j < 0 || j > degree_)
            throw std::out_of_range("PolyAB: exponent out of range");
        if (c.is_zero())
            coeff_.erase(j);
        else
            coeff_[j] = c;
    }
    void add(int j, const Rational& c) { set(j, get(j) + c); }

    bool is_zero() const { return coeff_.empty(); }
    const std::map<int, Rational>& coeffs() const { return coeff_; }

    PolyAB& operator+=(const PolyAB& o) {
        if (o.degree_ != degree_)
            throw std::invalid_argument("PolyAB: degree mismatch");
        for (const auto& [j, c] : o.coeff_)
            add(j, c);
        return *this;
    }
    PolyAB& operator-=(const PolyAB& o) {
        if (o.degree_ != degree_)
            throw std::invalid_argument("PolyAB: degree mismatch");
        for (const auto& [j, c] : o.coeff_)
            add(j, -c);
        return *this;
    }
    PolyAB& operator*=(const Rational& c) {
        if (c.is_zero()) {
            coeff_.clear();
            return *this;
        }
        for (auto& [j, v] : coeff_)
            v *= c;
        return *this;
    }
    friend PolyAB operator+(PolyAB x, const PolyAB& y) { return x += y; }
    friend PolyAB operator-(PolyAB x, const PolyAB& y) { return x -= y; }
    friend PolyAB operator*(const Rational& c, PolyAB x) { return x *= c; }
    friend bool operator==(const PolyAB& x, const PolyAB& y) {
        return x.degree_ == y.degree_ && x.coeff_ == y.coeff_;
    }

    QVector to_vector() const {
        QVector v(degree_ + 1);
        for (const auto& [j, c] : coeff_)
            v.set(j, c);
        return v;
    }
    static PolyAB from_vector(const QVector& v) {
        PolyAB p(v.length() - 1);
        for (const auto& [j, c] : v.entries())
            p.set(j, c);
        return p;
    }

private:
    int degree_;
    std::map<int, Rational> coeff_; // exponent of a -> coefficient
};

/// Substitute the act_on_H images into a polynomial. This is a left
/// action: act(g1 g2, p) = act(g1, act(g2, p)).
inline PolyAB act_on_poly(const GL2Z& g, const PolyAB& p) {
    int n = p.degree();
    // images: a -> pa*A + pb*B, b -> qa*A + qb*B  (A, B the generators)
    Rational pa(g.a), pb(-g.c), qa(-g.b), qb(g.d);

    // dense powers of the two linear forms, indexed by exponent of a
    std::vector<std::vector<Rational>> pow_a(n + 1), pow_b(n + 1);
    pow_a[0] = {Rational(1)};
    pow_b[0] = {Rational(1)};
    for (int k = 1; k <= n; ++k) {
        pow_a[k].assign(k + 1, Rational());
        pow_b[k].assign(k + 1, Rational());
        for (int i = 0; i < k; ++i) {
            pow_a[k][i + 1] += pow_a[k - 1][i] * pa;
            pow_a[k][i] += pow_a[k - 1][i] * pb;
            pow_b[k][i + 1] += pow_b[k - 1][i] * qa;
            pow_b[k][i] += pow_b[k - 1][i] * qb;
        }
    }

    PolyAB out(n);
    for (const auto& [j, c] : p.coeffs()) {
        const auto& u = pow_a[j];
        const auto& v = pow_b[n - j];
        for (size_t s = 0; s < u.size(); ++s) {
            if (u[s].is_zero())
                continue;
            for (size_t t = 0; t < v.size(); ++t) {
                if (v[t].is_zero())
                    continue;
                out.add(static_cast<int>(s + t), c * u[s] * v[t]);
            }
        }
    }
    return out;
}

/// Matrix of act_on_poly(g, .) on degree-2n coefficient vectors
/// (column j = coordinates of the image of a^j b^{2n-j}).
inline QMatrix poly_action_matrix(const GL2Z& g, int two_n) {
    QMatrix m(two_n + 1, two_n + 1);
    for (int j = 0; j <= two_n; ++j) {
        PolyAB img = act_on_poly(g, PolyAB::monomial(j, two_n));
        for (const auto& [i, c] : img.coeffs())
            m.set(i, j, c);
    }
    return m;
}

/// Extend the H action to a Lie algebra automorphism of L(H).
inline LieElement act_on_lie(const GL2Z& g, const LieElement& x, int cap = kDefaultDegreeCap) {
    HImages im = act_on_H(g);
    return apply_generator_substitution(im.of_a, im.of_b, x, cap);
}

/// Degree-0 derivation of L(H), stored by its degree-1 generator values.
struct LinDeriv {
    LieElement image_of_a;
    LieElement image_of_b;
};

/// e_0 = -a d/db: sends b to -a and a to 0. The sl2 lowering operator.
inline LinDeriv e0() {
    LinDeriv d;
    d.image_of_b = -LieElement::generator('a');
    return d;
}

/// The raising operator: a -> b, b -> 0 (sl2 weight +2).
inline LinDeriv raising() {
    LinDeriv d;
    d.image_of_a = LieElement::generator('b');
    return d;
}

inline LieElement linear_derivation_action(const LinDeriv& L, const LieElement& x,
                                           int cap = kDefaultDegreeCap) {
    return apply_generator_derivation(L.image_of_a, L.image_of_b, x, cap);
}

/// sl2 weight of a word: (#b) - (#a), per the convention that b has
/// weight +1 and a has weight -1.
inline int sl2_weight(const Word& w) {
    int weight = 0;
    for (int i = 0; i < w.len; ++i)
        weight += w.letter(i) ? 1 : -1;
    return weight;
}

} // namespace modlie
