#include "seqlaw/sequence.hpp"

#include "seqlaw/error.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

namespace seqlaw {

namespace {

bool valid_id_text(std::string_view text) {
    if (text.size() != 7 || text[0] != 'A') return false;
    return std::all_of(text.begin() + 1, text.end(),
                       [](char c) { return c >= '0' && c <= '9'; });
}

std::string lower_copy(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

} // namespace

SequenceId SequenceId::parse(std::string_view text) {
    auto id = try_parse(text);
    if (!id) throw ParseError("malformed sequence id: '" + std::string(text) + "'");
    return *id;
}

std::optional<SequenceId> SequenceId::try_parse(std::string_view text) {
    if (!valid_id_text(text)) return std::nullopt;
    SequenceId id;
    id.value_ = std::string(text);
    return id;
}

SequenceId SequenceId::from_number(unsigned number) {
    if (number > 999999) throw ConfigError("sequence number out of range: " + std::to_string(number));
    char buf[8];
    std::snprintf(buf, sizeof buf, "A%06u", number);
    SequenceId id;
    id.value_ = buf;
    return id;
}

unsigned SequenceId::number() const {
    return static_cast<unsigned>(std::stoul(value_.substr(1)));
}

std::string_view to_string(SequenceSource source) {
    switch (source) {
        case SequenceSource::stripped: return "stripped";
        case SequenceSource::bfile: return "bfile";
        case SequenceSource::synthetic: return "synthetic";
    }
    return "unknown";
}

SequenceSource source_from_string(std::string_view text) {
    if (text == "stripped") return SequenceSource::stripped;
    if (text == "bfile") return SequenceSource::bfile;
    if (text == "synthetic") return SequenceSource::synthetic;
    throw ParseError("unknown sequence source: '" + std::string(text) + "'");
}

LabelSet extract_labels(const OeisEntry& entry) {
    LabelSet labels;
    labels[0] = entry.keywords.count("nice") > 0;
    labels[1] = entry.keywords.count("core") > 0;
    labels[2] = entry.keywords.count("easy") > 0;
    labels[3] = entry.keywords.count("mult") > 0;

    // Substring match is intentional: "primes" must hit 'prime'. Over-matches
    // like "primer" are accepted.
    std::string haystack = lower_copy(entry.name);
    for (const auto& comment : entry.comments) {
        haystack += '\n';
        haystack += lower_copy(comment);
    }
    labels[4] = haystack.find("prime") != std::string::npos;
    labels[5] = haystack.find("binomial") != std::string::npos;
    labels[6] = haystack.find("palindrome") != std::string::npos;

    labels[7] = std::none_of(labels.flags.begin(), labels.flags.end() - 1,
                             [](bool b) { return b; });
    return labels;
}

} // namespace seqlaw
