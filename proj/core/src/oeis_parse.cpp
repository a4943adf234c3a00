#include "seqlaw/oeis_parse.hpp"

#include "seqlaw/error.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace seqlaw {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool is_comment_or_blank(std::string_view line) {
    const std::string_view t = trim(line);
    return t.empty() || t.front() == '#';
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            if (start < text.size()) lines.push_back(text.substr(start));
            break;
        }
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = end + 1;
    }
    return lines;
}

// Comma-separated term list; empty tokens from leading/trailing commas are
// skipped. position is 1-based for error messages.
std::vector<BigInt> parse_term_list(std::string_view text, std::string_view context) {
    std::vector<BigInt> terms;
    std::size_t pos = 0;
    std::size_t index = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string_view::npos) comma = text.size();
        const std::string_view token = trim(text.substr(pos, comma - pos));
        if (!token.empty()) {
            ++index;
            if (!is_integer_token(token)) {
                throw ParseError("non-integer token at position " + std::to_string(index) +
                                 ": '" + std::string(token) + "' in " + std::string(context));
            }
            terms.push_back(parse_big_integer(token));
        }
        if (comma == text.size()) break;
        pos = comma + 1;
    }
    return terms;
}

} // namespace

std::optional<std::pair<SequenceId, std::vector<BigInt>>>
parse_stripped_line(std::string_view line) {
    if (is_comment_or_blank(line)) return std::nullopt;

    const std::size_t space = line.find_first_of(" \t");
    const std::string_view id_text = trim(line.substr(0, space));
    auto id = SequenceId::try_parse(id_text);
    if (!id) {
        throw ParseError("malformed identifier '" + std::string(id_text) +
                         "' in stripped line: '" + std::string(line.substr(0, 60)) + "'");
    }
    const std::string_view rest =
        space == std::string_view::npos ? std::string_view{} : line.substr(space + 1);
    auto terms = parse_term_list(rest, "stripped line " + id->value());
    if (terms.empty()) {
        throw ParseError("no terms in stripped line for " + id->value());
    }
    return std::make_pair(std::move(*id), std::move(terms));
}

std::vector<BigInt> parse_bfile(std::string_view text) {
    std::vector<BigInt> terms;
    bool have_prev = false;
    BigInt prev_index;

    std::size_t line_no = 0;
    for (std::string_view line : split_lines(text)) {
        ++line_no;
        if (is_comment_or_blank(line)) continue;

        const std::string_view t = trim(line);
        const std::size_t space = t.find_first_of(" \t");
        if (space == std::string_view::npos) {
            throw ParseError("b-file line " + std::to_string(line_no) +
                             ": expected 'index term', got '" + std::string(t.substr(0, 60)) + "'");
        }
        const std::string_view index_text = trim(t.substr(0, space));
        const std::string_view term_text = trim(t.substr(space + 1));
        if (!is_integer_token(index_text)) {
            throw ParseError("b-file line " + std::to_string(line_no) +
                             ": non-integer index '" + std::string(index_text) + "'");
        }
        if (!is_integer_token(term_text)) {
            throw ParseError("b-file line " + std::to_string(line_no) +
                             ": non-integer term '" + std::string(term_text.substr(0, 60)) + "'");
        }
        BigInt index = parse_big_integer(index_text);
        if (have_prev) {
            if (index == prev_index) {
                throw ParseError("b-file line " + std::to_string(line_no) +
                                 ": duplicate index " + index.str());
            }
            if (index != prev_index + 1) {
                throw ParseError("b-file line " + std::to_string(line_no) + ": index gap (" +
                                 prev_index.str() + " -> " + index.str() + ")");
            }
        }
        prev_index = std::move(index);
        have_prev = true;
        terms.push_back(parse_big_integer(term_text));
    }
    return terms;
}

std::optional<std::pair<SequenceId, std::string>>
parse_names_line(std::string_view line) {
    if (is_comment_or_blank(line)) return std::nullopt;
    const std::size_t space = line.find_first_of(" \t");
    const std::string_view id_text = trim(line.substr(0, space));
    auto id = SequenceId::try_parse(id_text);
    if (!id) {
        throw ParseError("malformed identifier in names line: '" +
                         std::string(line.substr(0, 60)) + "'");
    }
    std::string name;
    if (space != std::string_view::npos) name = std::string(trim(line.substr(space + 1)));
    return std::make_pair(std::move(*id), std::move(name));
}

std::vector<OeisEntry> parse_internal_entries(std::string_view text) {
    // Field -> content lines, grouped per id in order of first appearance.
    std::vector<OeisEntry> entries;
    std::map<std::string, std::size_t> slot;

    for (std::string_view line : split_lines(text)) {
        const std::string_view t = trim(line);
        if (t.size() < 2 || t[0] != '%') continue;
        const char field = t[1];
        std::string_view rest = trim(t.substr(2));
        const std::size_t space = rest.find_first_of(" \t");
        const std::string_view id_text = rest.substr(0, space);
        auto id = SequenceId::try_parse(id_text);
        if (!id) {
            throw ParseError("malformed identifier in entry record: '" +
                             std::string(t.substr(0, 60)) + "'");
        }
        std::string_view content =
            space == std::string_view::npos ? std::string_view{} : trim(rest.substr(space + 1));

        auto [it, inserted] = slot.try_emplace(id->value(), entries.size());
        if (inserted) {
            entries.emplace_back();
            entries.back().id = *id;
        }
        OeisEntry& entry = entries[it->second];

        switch (field) {
            case 'S':
            case 'T':
            case 'U': {
                auto terms = parse_term_list(content, "entry " + id->value());
                entry.terms.insert(entry.terms.end(), terms.begin(), terms.end());
                break;
            }
            case 'N':
                entry.name = std::string(content);
                break;
            case 'C':
                entry.comments.emplace_back(content);
                break;
            case 'K': {
                std::size_t pos = 0;
                while (pos <= content.size()) {
                    std::size_t comma = content.find(',', pos);
                    if (comma == std::string_view::npos) comma = content.size();
                    std::string token(trim(content.substr(pos, comma - pos)));
                    std::transform(token.begin(), token.end(), token.begin(),
                                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
                    if (!token.empty()) entry.keywords.insert(std::move(token));
                    if (comma == content.size()) break;
                    pos = comma + 1;
                }
                break;
            }
            default:
                break; // %I, %O, %A, ... are not needed here
        }
    }

    if (entries.empty()) throw ParseError("no entry records found");
    for (const OeisEntry& entry : entries) {
        if (entry.name.empty()) {
            throw ParseError("entry " + entry.id.value() + " has no %N name record");
        }
    }
    return entries;
}

OeisEntry parse_internal_entry(std::string_view text) {
    auto entries = parse_internal_entries(text);
    if (entries.size() != 1) {
        throw ParseError("expected one entry, found " + std::to_string(entries.size()));
    }
    return std::move(entries.front());
}

} // namespace seqlaw
