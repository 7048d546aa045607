#pragma once

#include "modlie/modforms.hpp"
#include "modlie/sl2.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <future>
#include <numbers>
#include <string>
#include <vector>

namespace modlie {

using Complex = std::complex<double>;

/// Generator symbol e_0^j . e_{2n} of Manin's algebra B: weight 2n >= 4
/// and 0 <= j <= 2n-2. The quasi-modular weight-2 symbol (n = 1, j = 0)
/// is admitted only behind the G2 flag of the transport options.
struct EisSymbol {
    int n = 2;
    int j = 0;

    friend bool operator==(const EisSymbol& x, const EisSymbol& y) {
        return x.n == y.n && x.j == y.j;
    }
    friend bool operator<(const EisSymbol& x, const EisSymbol& y) {
        return std::pair(x.n, x.j) < std::pair(y.n, y.j);
    }

    std::string str() const {
        if (j == 0)
            return "e" + std::to_string(2 * n);
        return "e0^" + std::to_string(j) + "*e" + std::to_string(2 * n);
    }
};

/// Ordered symbol alphabet for a set of Eisenstein weights.
class SymbolAlphabet {
public:
    explicit SymbolAlphabet(std::vector<int> weights, bool include_g2 = false) {
        std::sort(weights.begin(), weights.end());
        weights.erase(std::unique(weights.begin(), weights.end()), weights.end());
        if (weights.empty())
            throw std::invalid_argument("SymbolAlphabet: need at least one weight");
        for (int w : weights) {
            if (w == 2 && !include_g2)
                throw std::invalid_argument(
                    "SymbolAlphabet: weight 2 requires the quasi-modular G2 flag");
            if (w < 2 || w % 2)
                throw std::invalid_argument("SymbolAlphabet: weights must be even and >= 4"
                                            " (2 only with the G2 flag)");
            int n = w / 2;
            for (int j = 0; j <= 2 * n - 2; ++j)
                symbols_.push_back({n, j});
        }
        weights_ = std::move(weights);
    }

    size_t size() const { return symbols_.size(); }
    const EisSymbol& at(size_t i) const { return symbols_.at(i); }
    const std::vector<EisSymbol>& symbols() const { return symbols_; }
    const std::vector<int>& weights() const { return weights_; }

    friend bool operator==(const SymbolAlphabet& x, const SymbolAlphabet& y) {
        return x.symbols_ == y.symbols_;
    }

private:
    std::vector<EisSymbol> symbols_;
    std::vector<int> weights_;
};

/// Element of the depth-truncated tensor algebra on a symbol alphabet,
/// stored densely over all words of length <= depth. Transport values
/// are group-like: empty-word coefficient 1.
class GroupLike {
public:
    GroupLike(int depth, size_t alphabet_size)
        : depth_(depth), alphabet_(alphabet_size) {
        if (depth < 0)
            throw std::invalid_argument("GroupLike: negative depth");
        offsets_.assign(depth + 2, 0);
        size_t count = 1, total = 0;
        for (int len = 0; len <= depth; ++len) {
            offsets_[len] = total;
            total += count;
            if (total > (1u << 22))
                throw std::invalid_argument("GroupLike: depth/alphabet too large");
            count *= alphabet_;
        }
        offsets_[depth + 1] = total;
        coeffs_.assign(total, Complex(0.0));
    }

    static GroupLike identity(int depth, size_t alphabet_size) {
        GroupLike g(depth, alphabet_size);
        g.coeffs_[0] = 1.0;
        return g;
    }

    int depth() const { return depth_; }
    size_t alphabet_size() const { return alphabet_; }
    size_t word_count() const { return coeffs_.size(); }

    size_t index_of(const std::vector<int>& word) const {
        if (static_cast<int>(word.size()) > depth_)
            throw std::out_of_range("GroupLike: word longer than depth");
        size_t idx = 0;
        for (int letter : word) {
            if (letter < 0 || static_cast<size_t>(letter) >= alphabet_)
                throw std::out_of_range("GroupLike: letter out of alphabet");
            idx = idx * alphabet_ + static_cast<size_t>(letter);
        }
        return offsets_[word.size()] + idx;
    }

    std::vector<int> word_at(size_t flat) const {
        int len = 0;
        while (flat >= offsets_[len + 1])
            ++len;
        size_t rem = flat - offsets_[len];
        std::vector<int> word(len);
        for (int i = len - 1; i >= 0; --i) {
            word[i] = static_cast<int>(rem % alphabet_);
            rem /= alphabet_;
        }
        return word;
    }

    Complex coeff(const std::vector<int>& word) const { return coeffs_[index_of(word)]; }
    void set_coeff(const std::vector<int>& word, Complex v) { coeffs_[index_of(word)] = v; }
    const std::vector<Complex>& flat() const { return coeffs_; }
    std::vector<Complex>& flat() { return coeffs_; }

    bool compatible(const GroupLike& o) const {
        return depth_ == o.depth_ && alphabet_ == o.alphabet_;
    }

    GroupLike& operator+=(const GroupLike& o) {
        require_compatible(o);
        for (size_t i = 0; i < coeffs_.size(); ++i)
            coeffs_[i] += o.coeffs_[i];
        return *this;
    }
    GroupLike& operator-=(const GroupLike& o) {
        require_compatible(o);
        for (size_t i = 0; i < coeffs_.size(); ++i)
            coeffs_[i] -= o.coeffs_[i];
        return *this;
    }
    GroupLike& operator*=(Complex c) {
        for (auto& v : coeffs_)
            v *= c;
        return *this;
    }

    /// Concatenation product, truncated at the depth.
    friend GroupLike operator*(const GroupLike& x, const GroupLike& y) {
        x.require_compatible(y);
        GroupLike out(x.depth_, x.alphabet_);
        size_t a = x.alphabet_;
        for (int lx = 0; lx <= x.depth_; ++lx) {
            size_t nx = x.offsets_[lx + 1] - x.offsets_[lx];
            for (size_t ix = 0; ix < nx; ++ix) {
                Complex cx = x.coeffs_[x.offsets_[lx] + ix];
                if (cx == Complex(0.0))
                    continue;
                for (int ly = 0; lx + ly <= x.depth_; ++ly) {
                    size_t ny = y.offsets_[ly + 1] - y.offsets_[ly];
                    size_t shift = 1;
                    for (int t = 0; t < ly; ++t)
                        shift *= a;
                    size_t base = out.offsets_[lx + ly] + ix * shift;
                    for (size_t iy = 0; iy < ny; ++iy) {
                        Complex cy = y.coeffs_[y.offsets_[ly] + iy];
                        if (cy != Complex(0.0))
                            out.coeffs_[base + iy] += cx * cy;
                    }
                }
            }
        }
        return out;
    }

    friend GroupLike operator+(GroupLike x, const GroupLike& y) { return x += y; }
    friend GroupLike operator-(GroupLike x, const GroupLike& y) { return x -= y; }

    /// exp of an element with zero empty-word coefficient.
    static GroupLike exponential(const GroupLike& x) {
        if (x.coeffs_[0] != Complex(0.0))
            throw std::invalid_argument("GroupLike::exponential: nonzero constant term");
        GroupLike out = identity(x.depth_, x.alphabet_);
        GroupLike power = identity(x.depth_, x.alphabet_);
        double fact = 1.0;
        for (int k = 1; k <= x.depth_; ++k) {
            power = power * x;
            fact *= k;
            GroupLike term = power;
            term *= Complex(1.0 / fact);
            out += term;
        }
        return out;
    }

    /// Group inverse of 1 + x: Neumann series, exact in the truncation.
    GroupLike inverse() const {
        if (coeffs_[0] == Complex(0.0))
            throw std::invalid_argument("GroupLike::inverse: zero constant term");
        Complex c0 = coeffs_[0];
        GroupLike x = *this;
        x *= 1.0 / c0;
        x.coeffs_[0] = 0.0; // x = g/c0 - 1
        GroupLike out = identity(depth_, alphabet_);
        GroupLike power = identity(depth_, alphabet_);
        for (int k = 1; k <= depth_; ++k) {
            power = power * x;
            GroupLike term = power;
            term *= Complex((k % 2) ? -1.0 : 1.0);
            out += term;
        }
        out *= 1.0 / c0;
        return out;
    }

    double max_norm() const {
        double m = 0.0;
        for (const auto& v : coeffs_)
            m = std::max(m, std::abs(v));
        return m;
    }

    friend double max_norm_diff(const GroupLike& x, const GroupLike& y) {
        x.require_compatible(y);
        double m = 0.0;
        for (size_t i = 0; i < x.coeffs_.size(); ++i)
            m = std::max(m, std::abs(x.coeffs_[i] - y.coeffs_[i]));
        return m;
    }

private:
    void require_compatible(const GroupLike& o) const {
        if (!compatible(o))
            throw std::invalid_argument("GroupLike: depth/alphabet mismatch");
    }

    int depth_;
    size_t alphabet_;
    std::vector<size_t> offsets_; // offsets_[len] = flat index of first word of that length
    std::vector<Complex> coeffs_;
};

/// Piecewise-linear path in the upper half plane.
struct UPath {
    std::vector<std::pair<Complex, Complex>> segments;

    static UPath straight(Complex from, Complex to) {
        UPath p;
        p.append(from, to);
        return p;
    }

    void append(Complex from, Complex to) {
        if (from.imag() <= 0.0 || to.imag() <= 0.0)
            throw std::invalid_argument("UPath: points must have positive imaginary part");
        if (!segments.empty() && std::abs(segments.back().second - from) > 1e-12)
            throw std::invalid_argument("UPath: segments must chain");
        segments.push_back({from, to});
    }

    Complex start() const { return segments.front().first; }
    Complex end() const { return segments.back().second; }
};

struct TransportOptions {
    int series_terms = 64;
    bool include_g2 = false;
    int threads = 1;
};

namespace detail {

/// q-expansion coefficients of G_{2n} as doubles (weight 2 = G2).
inline std::vector<double> eis_coeffs_double(int weight, int terms) {
    QSeries g = weight == 2 ? eisenstein_G2(terms) : eisenstein_G(weight, terms);
    std::vector<double> c(terms);
    for (int k = 0; k < terms; ++k)
        c[k] = g.coeff(k).to_double();
    return c;
}

struct OmegaEvaluator {
    SymbolAlphabet alphabet;
    std::vector<std::vector<double>> series; // per weight, q-coefficients
    std::vector<double> inv_factorial;       // 1/j! up to max needed

    OmegaEvaluator(const SymbolAlphabet& alpha, int terms) : alphabet(alpha) {
        int max_j = 0;
        for (const EisSymbol& s : alphabet.symbols())
            max_j = std::max(max_j, s.j);
        inv_factorial.assign(max_j + 1, 1.0);
        for (int j = 1; j <= max_j; ++j)
            inv_factorial[j] = inv_factorial[j - 1] / j;
        for (int w : alphabet.weights())
            series.push_back(eis_coeffs_double(w, terms));
    }

    /// Coefficient of each symbol slot against d tau at tau:
    /// 2 pi i G_{2n}(tau) tau^j / j!.
    std::vector<Complex> coefficients(Complex tau) const {
        const Complex two_pi_i(0.0, 2.0 * std::numbers::pi);
        Complex q = std::exp(two_pi_i * tau);
        std::vector<Complex> g_at(series.size());
        for (size_t wi = 0; wi < series.size(); ++wi) {
            const auto& c = series[wi];
            Complex acc(0.0);
            for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k)
                acc = acc * q + c[k];
            g_at[wi] = acc;
        }
        std::vector<Complex> out(alphabet.size());
        size_t wi = 0;
        Complex tau_pow(1.0);
        int last_j = -1;
        for (size_t i = 0; i < alphabet.size(); ++i) {
            const EisSymbol& s = alphabet.at(i);
            if (s.j == 0) {
                if (i > 0)
                    ++wi;
                tau_pow = 1.0;
                last_j = 0;
            } else {
                for (; last_j < s.j; ++last_j)
                    tau_pow *= tau;
            }
            out[i] = two_pi_i * g_at[wi] * tau_pow * inv_factorial[s.j];
        }
        return out;
    }
};

/// Depth-1 element with the given slot coefficients.
inline GroupLike one_form_value(const std::vector<Complex>& slots, int depth,
                                size_t alphabet_size) {
    GroupLike b(depth, alphabet_size);
    for (size_t i = 0; i < slots.size(); ++i)
        b.set_coeff({static_cast<int>(i)}, slots[i]);
    return b;
}

/// Order-4 Magnus value of one linear piece [from, to] for the
/// right-multiplication transport ODE:
///   Omega = (B1 + B2)/2 + (sqrt 3 / 12) [B1, B2],
/// with B_i the pulled-back connection at the two Gauss nodes.
inline GroupLike piece_value(const OmegaEvaluator& omega, Complex from, Complex to,
                             int depth) {
    size_t a = omega.alphabet.size();
    Complex d = to - from;
    if (d == Complex(0.0))
        return GroupLike::identity(depth, a);
    const double node_shift = std::sqrt(3.0) / 6.0;
    Complex t1 = from + (0.5 - node_shift) * d;
    Complex t2 = from + (0.5 + node_shift) * d;
    GroupLike b1 = one_form_value(omega.coefficients(t1), depth, a);
    GroupLike b2 = one_form_value(omega.coefficients(t2), depth, a);
    b1 *= d;
    b2 *= d;
    GroupLike avg = b1 + b2;
    avg *= Complex(0.5);
    if (depth >= 2) {
        GroupLike comm = b1 * b2 - b2 * b1;
        comm *= Complex(std::sqrt(3.0) / 12.0);
        avg += comm;
    }
    return GroupLike::exponential(avg);
}

} // namespace detail

/// Slot coefficients of Manin's Eisenstein connection Omega_B at tau:
/// coefficient of e0^j . e_{2n} is 2 pi i G_{2n}(tau) tau^j / j!.
inline std::vector<std::pair<EisSymbol, Complex>> omega_B(Complex tau,
                                                          const std::vector<int>& weights,
                                                          int series_terms = 64,
                                                          bool include_g2 = false) {
    if (tau.imag() <= 0.0)
        throw std::invalid_argument("omega_B: tau must lie in the upper half plane");
    SymbolAlphabet alphabet(weights, include_g2);
    detail::OmegaEvaluator omega(alphabet, series_terms);
    std::vector<Complex> slots = omega.coefficients(tau);
    std::vector<std::pair<EisSymbol, Complex>> out;
    for (size_t i = 0; i < slots.size(); ++i)
        out.push_back({alphabet.at(i), slots[i]});
    return out;
}

/// Depth-truncated inverse transport T(path)^{-1} = 1 + int w + int ww
/// + ..., by per-piece order-4 Magnus values multiplied in path order.
inline GroupLike transport_inverse(const UPath& path, int depth,
                                   const std::vector<int>& weights, int steps,
                                   const TransportOptions& opts = {}) {
    if (depth < 1)
        throw std::invalid_argument("transport_inverse: depth must be >= 1");
    if (steps < 8)
        throw std::invalid_argument("transport_inverse: need steps >= 8");
    if (path.segments.empty())
        throw std::invalid_argument("transport_inverse: empty path");

    SymbolAlphabet alphabet(weights, opts.include_g2);
    detail::OmegaEvaluator omega(alphabet, opts.series_terms);

    std::vector<std::pair<Complex, Complex>> pieces;
    for (const auto& [from, to] : path.segments) {
        Complex d = (to - from) / static_cast<double>(steps);
        for (int s = 0; s < steps; ++s)
            pieces.push_back({from + static_cast<double>(s) * d,
                              s + 1 == steps ? to : from + static_cast<double>(s + 1) * d});
    }

    int threads = std::max(1, opts.threads);
    if (threads == 1 || pieces.size() < 2 * static_cast<size_t>(threads)) {
        GroupLike total = GroupLike::identity(depth, alphabet.size());
        for (const auto& [from, to] : pieces)
            total = total * detail::piece_value(omega, from, to, depth);
        return total;
    }

    // chunked parallel evaluation, ordered reduction
    size_t chunk = (pieces.size() + threads - 1) / threads;
    std::vector<std::future<GroupLike>> futures;
    for (size_t lo = 0; lo < pieces.size(); lo += chunk) {
        size_t hi = std::min(lo + chunk, pieces.size());
        futures.push_back(std::async(std::launch::async, [&, lo, hi] {
            GroupLike part = GroupLike::identity(depth, alphabet.size());
            for (size_t i = lo; i < hi; ++i)
                part = part * detail::piece_value(omega, pieces[i].first, pieces[i].second, depth);
            return part;
        }));
    }
    GroupLike total = GroupLike::identity(depth, alphabet.size());
    for (auto& f : futures)
        total = total * f.get();
    return total;
}

/// Action of gamma on a transport value: each symbol slot e0^j . e_{2n}
/// transforms in the S^{2n-2} representation realized on polynomials
/// via e0^j . e_{2n} <-> (-1)^j (2n-2)!/(2n-2-j)! a^j b^{2n-2-j}.
inline GroupLike sl2_twist(const GL2Z& g, const GroupLike& value,
                           const SymbolAlphabet& alphabet) {
    size_t a = alphabet.size();
    if (value.alphabet_size() != a)
        throw std::invalid_argument("sl2_twist: alphabet mismatch");

    // letter transformation matrix (block diagonal over weights)
    std::vector<std::vector<double>> letter(a, std::vector<double>(a, 0.0));
    for (size_t col = 0; col < a; ++col) {
        const EisSymbol& s = alphabet.at(col);
        int m = 2 * s.n - 2;
        // polynomial of the symbol, its image, then back to symbol coords
        Rational scale = Rational(factorial(m)) / Rational(factorial(m - s.j));
        if (s.j % 2)
            scale = -scale;
        PolyAB p = PolyAB::monomial(s.j, m, scale);
        PolyAB img = act_on_poly(g, p);
        for (const auto& [jp, c] : img.coeffs()) {
            Rational unscale = Rational(factorial(m - jp)) / Rational(factorial(m));
            if (jp % 2)
                unscale = -unscale;
            // locate the row symbol {s.n, jp}
            EisSymbol target{s.n, jp};
            size_t row = 0;
            while (row < a && !(alphabet.at(row) == target))
                ++row;
            letter[row][col] = (c * unscale).to_double();
        }
    }

    // apply the letter matrix position by position, per word length
    GroupLike out = value;
    for (int len = 1; len <= value.depth(); ++len) {
        for (int pos = 0; pos < len; ++pos) {
            GroupLike next = out;
            size_t stride = 1;
            for (int t = pos + 1; t < len; ++t)
                stride *= a;
            size_t block = stride * a;
            size_t words = 1;
            for (int t = 0; t < len; ++t)
                words *= a;
            std::vector<int> probe(len, 0);
            size_t base_offset = out.index_of(std::vector<int>(len, 0));
            for (size_t w = 0; w < words; w += block) {
                for (size_t inner = 0; inner < stride; ++inner) {
                    // column vector across the letter at `pos`
                    for (size_t i = 0; i < a; ++i) {
                        Complex acc(0.0);
                        for (size_t jcol = 0; jcol < a; ++jcol) {
                            if (letter[i][jcol] == 0.0)
                                continue;
                            acc += letter[i][jcol] *
                                   out.flat()[base_offset + w + jcol * stride + inner];
                        }
                        next.flat()[base_offset + w + i * stride + inner] = acc;
                    }
                }
            }
            out = next;
        }
    }
    return out;
}

inline Complex moebius(const GL2Z& g, Complex tau) {
    return (static_cast<double>(g.a) * tau + static_cast<double>(g.b)) /
           (static_cast<double>(g.c) * tau + static_cast<double>(g.d));
}

/// Monodromy cocycle value Theta(gamma) = T(c_gamma)^{-1} along the
/// straight segment from the base point to gamma . base.
inline GroupLike theta(const GL2Z& g, Complex base, int depth,
                       const std::vector<int>& weights, int steps,
                       const TransportOptions& opts = {}) {
    if (base.imag() <= 0.0)
        throw std::invalid_argument("theta: base point must lie in the upper half plane");
    Complex target = moebius(g, base);
    if (std::abs(target - base) < 1e-15) {
        SymbolAlphabet alphabet(weights, opts.include_g2);
        return GroupLike::identity(depth, alphabet.size());
    }
    return transport_inverse(UPath::straight(base, target), depth, weights, steps, opts);
}

/// Max-norm defect of the 1-cocycle law
/// Theta(gamma mu) = Theta(gamma) (gamma . Theta(mu)).
inline double cocycle_residual(const GL2Z& g, const GL2Z& mu, Complex base, int depth,
                               const std::vector<int>& weights, int steps,
                               const TransportOptions& opts = {}) {
    SymbolAlphabet alphabet(weights, opts.include_g2);
    GroupLike lhs = theta(g * mu, base, depth, weights, steps, opts);
    GroupLike tg = theta(g, base, depth, weights, steps, opts);
    GroupLike tmu = theta(mu, base, depth, weights, steps, opts);
    GroupLike rhs = tg * sl2_twist(g, tmu, alphabet);
    return max_norm_diff(lhs, rhs);
}

} // namespace modlie
