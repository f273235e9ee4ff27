#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <ostream>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "plambda/error.hpp"

namespace plambda {

using BigInt = boost::multiprecision::cpp_int;

/// Exact nonnegative rational num / 2^exp, kept with an odd numerator (or zero).
///
/// Every probability produced by the two reduction relations is of this form:
/// each step has one or two successors, so weights are always 1 or 1/2.
class Dyadic {
public:
    Dyadic() = default;
    Dyadic(std::uint64_t n) : num_(n) {}  // NOLINT: integers convert implicitly
    Dyadic(BigInt num, std::uint64_t exp) : num_(std::move(num)), exp_(exp) {
        if (num_ < 0) throw InvariantViolation("negative dyadic numerator");
        normalize();
    }

    static Dyadic zero() { return Dyadic(); }
    static Dyadic one() { return Dyadic(1); }
    /// 2^-k
    static Dyadic pow2(std::uint64_t k) { return Dyadic(BigInt(1), k); }

    const BigInt& numerator() const noexcept { return num_; }
    std::uint64_t exponent() const noexcept { return exp_; }

    bool is_zero() const noexcept { return num_.is_zero(); }

    Dyadic half() const {
        if (is_zero()) return *this;
        Dyadic r = *this;
        if (r.exp_ == 0 && !boost::multiprecision::bit_test(r.num_, 0)) {
            r.num_ >>= 1;
        } else {
            ++r.exp_;
        }
        return r;
    }

    friend Dyadic operator+(const Dyadic& a, const Dyadic& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        std::uint64_t e = std::max(a.exp_, b.exp_);
        BigInt n = (a.num_ << static_cast<unsigned>(e - a.exp_)) + (b.num_ << static_cast<unsigned>(e - b.exp_));
        return Dyadic(std::move(n), e);
    }

    /// Exact difference; throws when the result would be negative.
    friend Dyadic operator-(const Dyadic& a, const Dyadic& b) {
        if (b.is_zero()) return a;
        std::uint64_t e = std::max(a.exp_, b.exp_);
        BigInt n = (a.num_ << static_cast<unsigned>(e - a.exp_)) - (b.num_ << static_cast<unsigned>(e - b.exp_));
        if (n < 0) throw InvariantViolation("dyadic subtraction below zero: " + a.str() + " - " + b.str());
        return Dyadic(std::move(n), e);
    }

    friend Dyadic operator*(const Dyadic& a, const Dyadic& b) {
        if (a.is_zero() || b.is_zero()) return Dyadic();
        return Dyadic(a.num_ * b.num_, a.exp_ + b.exp_);
    }

    Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
    Dyadic& operator-=(const Dyadic& o) { return *this = *this - o; }
    Dyadic& operator*=(const Dyadic& o) { return *this = *this * o; }

    friend bool operator==(const Dyadic& a, const Dyadic& b) noexcept {
        return a.exp_ == b.exp_ && a.num_ == b.num_;
    }

    friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
        std::uint64_t e = std::max(a.exp_, b.exp_);
        BigInt x = a.num_ << static_cast<unsigned>(e - a.exp_);
        BigInt y = b.num_ << static_cast<unsigned>(e - b.exp_);
        if (x < y) return std::strong_ordering::less;
        if (x > y) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    /// floor(value * 2^bits)
    BigInt scaled_floor(std::uint64_t bits) const {
        if (bits >= exp_) return num_ << static_cast<unsigned>(bits - exp_);
        return num_ >> static_cast<unsigned>(exp_ - bits);
    }

    double to_double() const {
        if (is_zero()) return 0.0;
        // keep the 64 leading bits; the rest cannot affect a double
        unsigned top = boost::multiprecision::msb(num_);
        unsigned drop = top > 63 ? top - 63 : 0;
        double lead = BigInt(num_ >> drop).convert_to<double>();
        return std::ldexp(lead, static_cast<int>(drop) - static_cast<int>(std::min<std::uint64_t>(exp_, 1u << 30)));
    }

    /// "num/2^exp" style text, e.g. "3/4", "1", "0".
    std::string str() const {
        if (exp_ == 0) return num_.str();
        if (exp_ <= 62) return num_.str() + "/" + std::to_string(std::uint64_t{1} << exp_);
        return num_.str() + "/2^" + std::to_string(exp_);
    }

    friend std::ostream& operator<<(std::ostream& os, const Dyadic& d) { return os << d.str(); }

private:
    void normalize() {
        if (num_.is_zero()) {
            exp_ = 0;
            return;
        }
        unsigned tz = boost::multiprecision::lsb(num_);
        std::uint64_t k = std::min<std::uint64_t>(tz, exp_);
        if (k) {
            num_ >>= static_cast<unsigned>(k);
            exp_ -= k;
        }
    }

    BigInt num_ = 0;
    std::uint64_t exp_ = 0;
};

/// First n binary digits after the point of p in [0,1]. A probability of
/// exactly 1 is written as all ones (0.111...).
inline std::string binary_digits(const Dyadic& p, std::uint64_t n) {
    if (p > Dyadic::one()) throw InvariantViolation("probability above one: " + p.str());
    BigInt v = p.scaled_floor(n);
    BigInt cap = (BigInt(1) << static_cast<unsigned>(n)) - 1;
    if (v > cap) v = cap;
    std::string out(n, '0');
    for (std::uint64_t i = 0; i < n; ++i) {
        if (boost::multiprecision::bit_test(v, static_cast<unsigned>(n - 1 - i))) out[i] = '1';
    }
    return out;
}

/// Inverse of binary_digits for a bit string: sum of b_i 2^-(i+1).
inline Dyadic from_binary_digits(const std::string& bits) {
    BigInt v = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') throw InvariantViolation("not a bit string: " + bits);
        v = (v << 1) + (c == '1' ? 1 : 0);
    }
    return Dyadic(std::move(v), bits.size());
}

}  // namespace plambda
