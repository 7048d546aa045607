#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace modlie {

using Integer = boost::multiprecision::cpp_int;

/// Exact rational number. Always stored reduced with positive denominator;
/// zero is canonically 0/1. Serializes as "num/den", with "/den" omitted
/// when the denominator is 1.
class Rational {
public:
    Rational() = default;
    Rational(long long n) : v_(n) {}
    Rational(const Integer& n) : v_(n) {}
    Rational(const Integer& num, const Integer& den) {
        if (den == 0)
            throw std::domain_error("Rational: zero denominator");
        // cpp_rational's two-argument constructor rejects negative
        // denominators, so normalize through a division instead.
        v_ = boost::multiprecision::cpp_rational(num);
        v_ /= boost::multiprecision::cpp_rational(den);
    }
    Rational(long long num, long long den) : Rational(Integer(num), Integer(den)) {}

    static Rational parse(std::string_view s) {
        auto slash = s.find('/');
        try {
            if (slash == std::string_view::npos)
                return Rational(Integer(std::string(s)));
            Integer num{std::string(s.substr(0, slash))};
            Integer den{std::string(s.substr(slash + 1))};
            return Rational(num, den);
        } catch (const std::runtime_error&) {
            throw std::invalid_argument("Rational::parse: bad literal '" + std::string(s) + "'");
        }
    }

    Integer numerator() const { return boost::multiprecision::numerator(v_); }
    Integer denominator() const { return boost::multiprecision::denominator(v_); }

    bool is_zero() const { return v_.is_zero(); }
    bool is_integer() const { return denominator() == 1; }
    int sign() const { return v_.sign(); }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero())
            throw std::domain_error("Rational: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    Rational operator-() const { Rational r; r.v_ = -v_; return r; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    double to_double() const { return v_.convert_to<double>(); }

    std::string str() const {
        std::string s = numerator().str();
        if (!is_integer())
            s += "/" + denominator().str();
        return s;
    }

private:
    boost::multiprecision::cpp_rational v_;
};

inline Integer factorial(unsigned n) {
    Integer r = 1;
    for (unsigned i = 2; i <= n; ++i)
        r *= i;
    return r;
}

inline Integer binomial(unsigned n, unsigned k) {
    if (k > n)
        return 0;
    if (k > n - k)
        k = n - k;
    Integer r = 1;
    for (unsigned i = 0; i < k; ++i) {
        r *= n - i;
        r /= i + 1;
    }
    return r;
}

} // namespace modlie
