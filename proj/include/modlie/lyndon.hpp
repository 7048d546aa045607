#pragma once

#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace modlie {

/// A word over the two-letter alphabet {a, b}, packed into a bit mask
/// (bit i = letter at position i, a = 0 < b = 1). Degree caps keep the
/// length within the 30-bit packing.
struct Word {
    std::uint8_t len = 0;
    std::uint32_t bits = 0;

    static constexpr int kMaxLen = 30;

    Word() = default;
    Word(std::uint8_t length, std::uint32_t b) : len(length), bits(b) {}

    static Word from_string(std::string_view s) {
        if (s.size() > kMaxLen)
            throw std::length_error("Word: too long");
        Word w;
        w.len = static_cast<std::uint8_t>(s.size());
        for (size_t i = 0; i < s.size(); ++i) {
            if (s[i] == 'b')
                w.bits |= 1u << i;
            else if (s[i] != 'a')
                throw std::invalid_argument("Word: letters must be 'a' or 'b'");
        }
        return w;
    }

    int letter(int i) const { return (bits >> i) & 1u; } // 0 = a, 1 = b
    bool empty() const { return len == 0; }

    std::string str() const {
        std::string s(len, 'a');
        for (int i = 0; i < len; ++i)
            if (letter(i))
                s[i] = 'b';
        return s;
    }

    Word concat(const Word& o) const {
        if (len + o.len > kMaxLen)
            throw std::length_error("Word: concatenation too long");
        return Word(static_cast<std::uint8_t>(len + o.len),
                    bits | (o.bits << len));
    }

    Word prefix(int k) const { return Word(static_cast<std::uint8_t>(k), bits & ((1u << k) - 1u)); }
    Word suffix_from(int k) const { return Word(static_cast<std::uint8_t>(len - k), bits >> k); }

    /// Unique 32-bit key (len in the top bits).
    std::uint32_t key() const { return (std::uint32_t(len) << kMaxLen) ^ bits; }

    friend bool operator==(const Word& x, const Word& y) {
        return x.len == y.len && x.bits == y.bits;
    }
    friend bool operator!=(const Word& x, const Word& y) { return !(x == y); }
};

/// Standard lexicographic order (a < b, a proper prefix precedes).
inline bool lex_less(const Word& x, const Word& y) {
    int n = x.len < y.len ? x.len : y.len;
    for (int i = 0; i < n; ++i) {
        int lx = x.letter(i), ly = y.letter(i);
        if (lx != ly)
            return lx < ly;
    }
    return x.len < y.len;
}

/// Total order used for map keys and serialization: degree first, then
/// lexicographic. Agrees with lex order on homogeneous data.
inline bool operator<(const Word& x, const Word& y) {
    if (x.len != y.len)
        return x.len < y.len;
    return lex_less(x, y);
}

/// Lyndon test: strictly smaller than each proper suffix (equivalent to
/// being strictly smaller than every proper cyclic rotation).
inline bool is_lyndon(const Word& w) {
    if (w.len == 0)
        return false;
    for (int k = 1; k < w.len; ++k)
        if (!lex_less(w, w.suffix_from(k)))
            return false;
    return true;
}

/// Right standard factorization of a Lyndon word of length >= 2:
/// w = u v with v the lexicographically least proper suffix. Both
/// factors are Lyndon.
inline std::pair<Word, Word> std_factorization(const Word& w) {
    if (w.len < 2)
        throw std::invalid_argument("std_factorization: need length >= 2");
    int best = 1;
    for (int k = 2; k < w.len; ++k)
        if (lex_less(w.suffix_from(k), w.suffix_from(best)))
            best = k;
    return {w.prefix(best), w.suffix_from(best)};
}

/// Number of Lyndon words of length d over two letters:
/// (1/d) sum_{e|d} mu(d/e) 2^e.
inline long long witt_dimension(int d) {
    if (d < 1)
        throw std::invalid_argument("witt_dimension: degree must be >= 1");
    auto mobius = [](int n) {
        int m = 1;
        for (int p = 2; p * p <= n; ++p) {
            if (n % p == 0) {
                n /= p;
                if (n % p == 0)
                    return 0;
                m = -m;
            }
        }
        if (n > 1)
            m = -m;
        return m;
    };
    long long total = 0;
    for (int e = 1; e <= d; ++e) {
        if (d % e)
            continue;
        int mu = mobius(d / e);
        if (mu)
            total += mu * (1LL << e);
    }
    return total / d;
}

/// All Lyndon words of length exactly d, in lexicographic order
/// (Duval's generation).
inline std::vector<Word> generate_lyndon_words(int d) {
    if (d < 1 || d > Word::kMaxLen)
        throw std::invalid_argument("generate_lyndon_words: bad degree");
    std::vector<Word> out;
    std::vector<int> w{0};
    while (!w.empty()) {
        if (static_cast<int>(w.size()) == d) {
            Word packed;
            packed.len = static_cast<std::uint8_t>(w.size());
            for (size_t i = 0; i < w.size(); ++i)
                if (w[i])
                    packed.bits |= 1u << i;
            out.push_back(packed);
        }
        int m = static_cast<int>(w.size());
        while (static_cast<int>(w.size()) < d)
            w.push_back(w[w.size() - m]);
        while (!w.empty() && w.back() == 1)
            w.pop_back();
        if (!w.empty())
            w.back() = 1;
    }
    return out;
}

/// Cached per-degree Lyndon bases with index lookup. Construction is
/// mutex-guarded; lookups after that only read.
class LyndonCatalog {
public:
    static LyndonCatalog& instance() {
        static LyndonCatalog cat;
        return cat;
    }

    const std::vector<Word>& basis(int degree) {
        std::lock_guard<std::mutex> lock(mu_);
        return ensure(degree).words;
    }

    /// Index of a Lyndon word within its degree's lex-sorted basis.
    int index_of(const Word& w) {
        std::lock_guard<std::mutex> lock(mu_);
        const auto& entry = ensure(w.len);
        auto it = entry.index.find(w.key());
        if (it == entry.index.end())
            throw std::invalid_argument("LyndonCatalog: not a Lyndon word: " + w.str());
        return it->second;
    }

private:
    struct Entry {
        std::vector<Word> words;
        std::unordered_map<std::uint32_t, int> index;
        bool ready = false;
    };

    Entry& ensure(int degree) {
        if (degree < 1 || degree > Word::kMaxLen)
            throw std::invalid_argument("LyndonCatalog: bad degree");
        if (degrees_.size() <= static_cast<size_t>(degree))
            degrees_.resize(degree + 1);
        Entry& e = degrees_[degree];
        if (!e.ready) {
            e.words = generate_lyndon_words(degree);
            for (size_t i = 0; i < e.words.size(); ++i)
                e.index.emplace(e.words[i].key(), static_cast<int>(i));
            e.ready = true;
        }
        return e;
    }

    std::mutex mu_;
    std::vector<Entry> degrees_;
};

inline const std::vector<Word>& lyndon_basis(int degree) {
    return LyndonCatalog::instance().basis(degree);
}

} // namespace modlie
