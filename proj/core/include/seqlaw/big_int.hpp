#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace seqlaw {

// OEIS terms routinely reach 1000 decimal digits, so every term is held
// exactly as an arbitrary-precision integer from ingest onwards.
using BigInt = boost::multiprecision::cpp_int;

// True iff text is an optionally-signed run of decimal digits.
bool is_integer_token(std::string_view text);

// Exact parse. Throws ParseError on anything is_integer_token rejects.
BigInt parse_big_integer(std::string_view text);

std::string to_decimal(const BigInt& value);

// First decimal digit of |value|; 0 for the zero value.
int leading_digit(const BigInt& value);

} // namespace seqlaw
