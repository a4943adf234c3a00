#pragma once

#include "seqlaw/sequence.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace seqlaw {

// Offline test corpus: a few hundred deterministic integer sequences spanning
// polynomial, exponential, recurrence, prime, multiplicative, digit and
// pseudo-random families, with OEIS-style metadata. Ids live in the A8xxxxx
// block so they can never shadow real entries.
struct FixtureSequence {
    Sequence seq;     // full term list
    OeisEntry entry;  // name, keywords, comments, leading terms
    int offset = 1;   // index of the first term in the b-file
};

struct FixtureOptions {
    std::size_t terms = 995;          // terms per sequence
    std::uint64_t seed = 20180909;    // drives the pseudo-random families
    unsigned id_base = 800001;
};

std::vector<FixtureSequence> fixture_sequences(const FixtureOptions& options = {});

// Writes the corpus in the file formats the ingest stage reads:
//   <dir>/stripped         truncated term lists, one line per sequence
//   <dir>/names            id + name
//   <dir>/bfiles/bNNNNNN.txt
//   <dir>/entries/ANNNNNN.txt   machine-readable records
void write_fixture_corpus(const std::filesystem::path& dir,
                          const FixtureOptions& options = {});

} // namespace seqlaw
