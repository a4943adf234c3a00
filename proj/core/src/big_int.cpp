#include "seqlaw/big_int.hpp"

#include "seqlaw/error.hpp"

#include <cstdint>

namespace seqlaw {

bool is_integer_token(std::string_view text) {
    std::size_t i = 0;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) ++i;
    if (i == text.size()) return false;
    for (; i < text.size(); ++i) {
        if (text[i] < '0' || text[i] > '9') return false;
    }
    return true;
}

BigInt parse_big_integer(std::string_view text) {
    if (!is_integer_token(text)) {
        throw ParseError("not an integer token: '" + std::string(text) + "'");
    }
    // cpp_int rejects a leading '+', strip it.
    if (!text.empty() && text[0] == '+') text.remove_prefix(1);
    return BigInt(std::string(text));
}

std::string to_decimal(const BigInt& value) { return value.str(); }

int leading_digit(const BigInt& value) {
    if (value.is_zero()) return 0;
    BigInt a = abs(value);
    if (a <= std::uint64_t(999'999'999'999'999'999ull)) {
        auto v = a.convert_to<std::uint64_t>();
        while (v >= 10) v /= 10;
        return static_cast<int>(v);
    }
    const std::string s = a.str();
    return s[0] - '0';
}

} // namespace seqlaw
