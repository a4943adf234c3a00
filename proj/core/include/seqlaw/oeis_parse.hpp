#pragma once

#include "seqlaw/sequence.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace seqlaw {

// One line of an OEIS "stripped" file: "A000045 ,0,1,1,2,3,5,8,".
// Comment lines beginning with '#' (and blank lines) yield nullopt.
// Malformed ids or non-integer tokens throw ParseError with line context.
std::optional<std::pair<SequenceId, std::vector<BigInt>>>
parse_stripped_line(std::string_view line);

// Full b-file body: "index term" per line, indices consecutive, '#' comments
// ignored. Returns terms in ascending index order. Throws ParseError on
// index gaps or duplicates and on non-integer terms.
std::vector<BigInt> parse_bfile(std::string_view text);

// One line of an OEIS "names" file: "A000045 Fibonacci numbers: ...".
std::optional<std::pair<SequenceId, std::string>>
parse_names_line(std::string_view line);

// OEIS machine-readable entry records ("%S A000045 0,1,1,...", "%N ...",
// "%C ...", "%K ..."). Non-% lines are ignored; a response may carry several
// entries. Throws ParseError when no records are present.
std::vector<OeisEntry> parse_internal_entries(std::string_view text);

// Single-entry convenience over parse_internal_entries.
OeisEntry parse_internal_entry(std::string_view text);

} // namespace seqlaw
