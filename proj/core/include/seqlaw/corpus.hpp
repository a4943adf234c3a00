#pragma once

#include "seqlaw/sequence.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace seqlaw {

// Sequences with at least min_terms terms, input order preserved.
std::vector<Sequence> select_corpus(std::vector<Sequence> sequences, std::size_t min_terms);

// Deterministic sample of size n without replacement; the survivors keep
// their input order. n >= size returns the input unchanged.
std::vector<Sequence> sample_corpus(std::vector<Sequence> sequences, std::size_t n,
                                    std::uint64_t seed);

// Line-delimited corpus manifest: "<id>\t<source>\t<t1>,<t2>,...". UTF-8,
// one record per sequence, streamable.
std::string manifest_line(const Sequence& seq);
Sequence parse_manifest_line(std::string_view line); // throws ParseError

void write_manifest(const std::filesystem::path& path, std::span<const Sequence> corpus);
std::vector<Sequence> read_manifest(const std::filesystem::path& path);
void for_each_manifest_record(const std::filesystem::path& path,
                              const std::function<void(Sequence)>& fn);

struct IngestOptions {
    std::filesystem::path stripped_path; // optional, possibly .gz
    std::filesystem::path bfile_dir;     // optional, files named b<nnnnnn>.txt
    std::size_t min_terms = 990;
    std::optional<std::size_t> sample_size;
    std::uint64_t sample_seed = 0;
};

// Build a corpus from local OEIS files. Term lists from b-files win over the
// (truncated) stripped lines whenever both exist.
std::vector<Sequence> load_corpus(const IngestOptions& options);

// Entry records from a directory of per-id files (<id>.txt, internal format).
std::map<SequenceId, OeisEntry> load_entries_dir(const std::filesystem::path& dir);

} // namespace seqlaw
