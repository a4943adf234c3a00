#pragma once

#include "seqlaw/big_int.hpp"
#include "seqlaw/error.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace seqlaw {

// Floating value with a binary64 mantissa and a 64-bit binary exponent:
// value = mantissa * 2^exponent, |mantissa| in [1,2), zero held canonically
// as (0, 0). Statistics over 1000-digit terms overflow binary64 (max ~1e308)
// but stay comfortably inside this type, and ln() stays finite for every
// positive value.
class WideReal {
public:
    constexpr WideReal() = default;

    static WideReal from_double(double v) { return normalized(v, 0); }

    static WideReal from_integer(const BigInt& v) {
        if (v.is_zero()) return {};
        const bool neg = v < 0;
        BigInt a = neg ? BigInt(-v) : v;
        const std::int64_t bits = static_cast<std::int64_t>(boost::multiprecision::msb(a)) + 1;
        std::int64_t shift = 0;
        if (bits > 62) {
            shift = bits - 62;
            a >>= shift;
        }
        double m = static_cast<double>(a.convert_to<std::uint64_t>());
        if (neg) m = -m;
        return normalized(m, shift);
    }

    double mantissa() const { return mantissa_; }
    std::int64_t exponent2() const { return exponent_; }

    bool is_zero() const { return mantissa_ == 0.0; }
    bool is_positive() const { return mantissa_ > 0.0; }

    WideReal operator-() const {
        WideReal w = *this;
        w.mantissa_ = -w.mantissa_;
        return w;
    }

    friend WideReal operator+(const WideReal& a, const WideReal& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        const WideReal* hi = &a;
        const WideReal* lo = &b;
        if (b.exponent_ > a.exponent_) std::swap(hi, lo);
        const std::int64_t d = hi->exponent_ - lo->exponent_;
        if (d > 64) return *hi;
        const double m = hi->mantissa_ + std::ldexp(lo->mantissa_, -static_cast<int>(d));
        return normalized(m, hi->exponent_);
    }

    friend WideReal operator-(const WideReal& a, const WideReal& b) { return a + (-b); }

    friend WideReal operator*(const WideReal& a, const WideReal& b) {
        if (a.is_zero() || b.is_zero()) return {};
        return normalized(a.mantissa_ * b.mantissa_, a.exponent_ + b.exponent_);
    }

    friend WideReal operator/(const WideReal& a, const WideReal& b) {
        if (b.is_zero()) throw DataError("WideReal: division by zero");
        if (a.is_zero()) return {};
        return normalized(a.mantissa_ / b.mantissa_, a.exponent_ - b.exponent_);
    }

    friend WideReal operator*(const WideReal& a, double s) { return a * from_double(s); }
    friend WideReal operator/(const WideReal& a, double s) { return a / from_double(s); }

    friend bool operator==(const WideReal& a, const WideReal& b) {
        return a.mantissa_ == b.mantissa_ && a.exponent_ == b.exponent_;
    }

    friend bool operator<(const WideReal& a, const WideReal& b) {
        const int sa = sign_of(a.mantissa_);
        const int sb = sign_of(b.mantissa_);
        if (sa != sb) return sa < sb;
        if (sa == 0) return false;
        if (a.exponent_ != b.exponent_) {
            return (sa > 0) == (a.exponent_ < b.exponent_);
        }
        return a.mantissa_ < b.mantissa_;
    }

    friend bool operator>(const WideReal& a, const WideReal& b) { return b < a; }
    friend bool operator!=(const WideReal& a, const WideReal& b) { return !(a == b); }

    // Natural log. Finite for every positive value regardless of magnitude.
    double ln() const {
        if (mantissa_ <= 0.0) throw DataError("WideReal: ln of non-positive value");
        return std::log(mantissa_) + static_cast<double>(exponent_) * std::numbers::ln2;
    }

    // Nearest binary64; saturates to +-inf outside its range.
    double to_double() const {
        if (is_zero()) return 0.0;
        if (exponent_ > 1100) return mantissa_ > 0 ? HUGE_VAL : -HUGE_VAL;
        if (exponent_ < -1100) return 0.0;
        return std::ldexp(mantissa_, static_cast<int>(exponent_));
    }

private:
    static int sign_of(double m) { return (m > 0.0) - (m < 0.0); }

    static WideReal normalized(double m, std::int64_t e) {
        WideReal w;
        if (m == 0.0) return w;
        int k = 0;
        const double f = std::frexp(m, &k); // |f| in [0.5, 1)
        w.mantissa_ = f * 2.0;
        w.exponent_ = e + k - 1;
        return w;
    }

    double mantissa_ = 0.0;
    std::int64_t exponent_ = 0;
};

} // namespace seqlaw
