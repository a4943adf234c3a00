#pragma once

// Independent oracles for test assertions. Each one deliberately takes a
// different computational route from the implementation it checks.

#include "seqlaw/big_int.hpp"
#include "seqlaw/dataset.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace oracles {

using Rational = boost::multiprecision::cpp_rational;

// Exact running mean and sample variance over big rationals.
struct RationalMoments {
    std::vector<Rational> mu;
    std::vector<Rational> var;
};

inline RationalMoments rational_moments(std::span<const seqlaw::BigInt> terms) {
    // Exact route via the algebraic identity
    //   v(n) = (sum of squares - (sum)^2 / n) / (n - 1).
    RationalMoments out;
    Rational sum = 0;
    Rational sum_sq = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const Rational x(terms[i]);
        sum += x;
        sum_sq += x * x;
        const Rational n(i + 1);
        out.mu.push_back(sum / n);
        if (i == 0) {
            out.var.emplace_back(0);
        } else {
            out.var.push_back((sum_sq - sum * sum / n) / Rational(i));
        }
    }
    return out;
}

inline double to_double(const Rational& r) {
    return r.convert_to<double>();
}

// Natural log of a positive rational with wide range: ln(num) - ln(den) via
// digit counts, good to ~1e-12 relative for the magnitudes used in tests.
inline double rational_ln(const Rational& r) {
    auto ln_big = [](const seqlaw::BigInt& v) {
        const std::string s = v.str();
        const std::size_t take = std::min<std::size_t>(s.size(), 17);
        const double lead = std::stod(s.substr(0, take));
        return std::log(lead) + static_cast<double>(s.size() - take) * std::log(10.0);
    };
    return ln_big(boost::multiprecision::numerator(r)) -
           ln_big(boost::multiprecision::denominator(r));
}

// Straight normal-equations least squares on raw moments (the implementation
// uses the centered two-pass form).
struct NormalEqFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r = 0.0;
};

inline NormalEqFit normal_equations_fit(std::span<const double> xs,
                                        std::span<const double> ys) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        syy += ys[i] * ys[i];
        sxy += xs[i] * ys[i];
    }
    NormalEqFit fit;
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / n;
    fit.r = (n * sxy - sx * sy) /
            std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
    return fit;
}

// Leading-digit histogram straight from decimal strings.
struct DigitCounts {
    std::array<std::uint64_t, 10> count{};
    std::uint64_t positive = 0;
    std::uint64_t total = 0;
};

inline DigitCounts digit_count_oracle(std::span<const seqlaw::BigInt> terms) {
    DigitCounts out;
    for (const auto& t : terms) {
        std::string s = t.str();
        bool negative = false;
        if (!s.empty() && s[0] == '-') {
            negative = true;
            s.erase(0, 1);
        }
        if (s == "0") {
            out.count[0]++;
        } else {
            out.count[static_cast<std::size_t>(s[0] - '0')]++;
            if (!negative) out.positive++;
        }
        out.total++;
    }
    return out;
}

// Confusion counts by direct scanning, one label at a time.
struct Confusion {
    std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
};

inline Confusion brute_confusion(const seqlaw::Matrix& y_true,
                                 const seqlaw::Matrix& y_pred, std::size_t label) {
    Confusion c;
    for (std::size_t r = 0; r < y_true.rows; ++r) {
        const bool t = y_true.at(r, label) != 0.0;
        const bool p = y_pred.at(r, label) != 0.0;
        if (t) {
            (p ? c.tp : c.fn)++;
        } else {
            (p ? c.fp : c.tn)++;
        }
    }
    return c;
}

// Decimal text to integer by Horner's rule, independent of the parser.
inline seqlaw::BigInt string_to_integer_oracle(std::string_view text) {
    bool negative = false;
    std::size_t i = 0;
    if (!text.empty() && (text[0] == '+' || text[0] == '-')) {
        negative = text[0] == '-';
        i = 1;
    }
    seqlaw::BigInt v = 0;
    for (; i < text.size(); ++i) {
        v *= 10;
        v += text[i] - '0';
    }
    return negative ? seqlaw::BigInt(-v) : v;
}

} // namespace oracles
