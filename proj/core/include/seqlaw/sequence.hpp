#pragma once

#include "seqlaw/big_int.hpp"

#include <array>
#include <compare>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace seqlaw {

// Canonical OEIS-style identifier: 'A' followed by exactly six decimal digits.
class SequenceId {
public:
    static SequenceId parse(std::string_view text);              // throws ParseError
    static std::optional<SequenceId> try_parse(std::string_view text);
    static SequenceId from_number(unsigned number);               // throws ConfigError if > 999999

    const std::string& value() const { return value_; }
    unsigned number() const;

    auto operator<=>(const SequenceId&) const = default;

private:
    std::string value_;
};

enum class SequenceSource { stripped, bfile, synthetic };

std::string_view to_string(SequenceSource source);
SequenceSource source_from_string(std::string_view text); // throws ParseError

struct Sequence {
    SequenceId id;
    std::vector<BigInt> terms;
    SequenceSource source = SequenceSource::stripped;
};

struct OeisEntry {
    SequenceId id;
    std::string name;
    std::set<std::string> keywords; // lowercase tokens, no whitespace
    std::vector<std::string> comments;
    std::vector<BigInt> terms;
};

inline constexpr std::size_t kLabelCount = 8;

// Frozen label order shared across dataset, learn and evaluate.
inline constexpr std::array<std::string_view, kLabelCount> kLabelNames = {
    "nice", "core", "easy", "mult", "prime", "binomial", "palindrome", "other",
};

struct LabelSet {
    std::array<bool, kLabelCount> flags{};

    bool operator==(const LabelSet&) const = default;

    bool& operator[](std::size_t i) { return flags[i]; }
    bool operator[](std::size_t i) const { return flags[i]; }
};

// nice/core/easy/mult come from the keyword token set; prime/binomial/
// palindrome from a case-insensitive substring search over the name and all
// comment lines; 'other' is set exactly when the seven above are absent.
LabelSet extract_labels(const OeisEntry& entry);

} // namespace seqlaw
