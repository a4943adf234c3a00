#include "seqlaw/corpus.hpp"

#include "seqlaw/error.hpp"
#include "seqlaw/io.hpp"
#include "seqlaw/oeis_parse.hpp"
#include "seqlaw/rng.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace seqlaw {

std::vector<Sequence> select_corpus(std::vector<Sequence> sequences, std::size_t min_terms) {
    std::erase_if(sequences, [&](const Sequence& s) { return s.terms.size() < min_terms; });
    return sequences;
}

std::vector<Sequence> sample_corpus(std::vector<Sequence> sequences, std::size_t n,
                                    std::uint64_t seed) {
    if (n >= sequences.size()) return sequences;
    std::vector<std::size_t> idx(sequences.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) { // partial Fisher-Yates
        const std::size_t j = i + rng.index(idx.size() - i);
        std::swap(idx[i], idx[j]);
    }
    idx.resize(n);
    std::sort(idx.begin(), idx.end());
    std::vector<Sequence> out;
    out.reserve(n);
    for (std::size_t i : idx) out.push_back(std::move(sequences[i]));
    return out;
}

std::string manifest_line(const Sequence& seq) {
    std::string line = seq.id.value();
    line += '\t';
    line += to_string(seq.source);
    line += '\t';
    for (std::size_t i = 0; i < seq.terms.size(); ++i) {
        if (i) line += ',';
        line += seq.terms[i].str();
    }
    return line;
}

Sequence parse_manifest_line(std::string_view line) {
    const std::size_t tab1 = line.find('\t');
    const std::size_t tab2 = tab1 == std::string_view::npos ? std::string_view::npos
                                                            : line.find('\t', tab1 + 1);
    if (tab2 == std::string_view::npos) {
        throw ParseError("manifest line needs 3 tab-separated fields: '" +
                         std::string(line.substr(0, 60)) + "'");
    }
    Sequence seq;
    seq.id = SequenceId::parse(line.substr(0, tab1));
    seq.source = source_from_string(line.substr(tab1 + 1, tab2 - tab1 - 1));

    const std::string_view terms = line.substr(tab2 + 1);
    std::size_t pos = 0;
    while (pos <= terms.size()) {
        std::size_t comma = terms.find(',', pos);
        if (comma == std::string_view::npos) comma = terms.size();
        const std::string_view token = terms.substr(pos, comma - pos);
        if (!token.empty()) {
            if (!is_integer_token(token)) {
                throw ParseError("manifest " + seq.id.value() + ": bad term '" +
                                 std::string(token.substr(0, 40)) + "'");
            }
            seq.terms.push_back(parse_big_integer(token));
        }
        if (comma == terms.size()) break;
        pos = comma + 1;
    }
    if (seq.terms.empty()) throw ParseError("manifest " + seq.id.value() + ": no terms");
    return seq;
}

void write_manifest(const std::filesystem::path& path, std::span<const Sequence> corpus) {
    std::string body;
    for (const Sequence& seq : corpus) {
        body += manifest_line(seq);
        body += '\n';
    }
    write_text_file_atomic(path, body);
}

void for_each_manifest_record(const std::filesystem::path& path,
                              const std::function<void(Sequence)>& fn) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open manifest: " + path.string());
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        fn(parse_manifest_line(line));
    }
}

std::vector<Sequence> read_manifest(const std::filesystem::path& path) {
    std::vector<Sequence> out;
    for_each_manifest_record(path, [&](Sequence s) { out.push_back(std::move(s)); });
    return out;
}

namespace {

std::filesystem::path bfile_path(const std::filesystem::path& dir, const SequenceId& id) {
    return dir / ("b" + id.value().substr(1) + ".txt");
}

} // namespace

std::vector<Sequence> load_corpus(const IngestOptions& options) {
    std::vector<Sequence> corpus;

    if (!options.stripped_path.empty()) {
        const std::string text = read_text_file_maybe_gzip(options.stripped_path);
        std::istringstream in(text);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            std::optional<std::pair<SequenceId, std::vector<BigInt>>> parsed;
            try {
                parsed = parse_stripped_line(line);
            } catch (const ParseError& e) {
                throw ParseError(options.stripped_path.string() + ":" +
                                 std::to_string(line_no) + ": " + e.what());
            }
            if (!parsed) continue;
            Sequence seq;
            seq.id = std::move(parsed->first);
            seq.terms = std::move(parsed->second);
            seq.source = SequenceSource::stripped;
            corpus.push_back(std::move(seq));
        }
    }

    if (!options.bfile_dir.empty() && std::filesystem::is_directory(options.bfile_dir)) {
        // Longer term lists from b-files replace the truncated stripped ones.
        for (Sequence& seq : corpus) {
            const auto path = bfile_path(options.bfile_dir, seq.id);
            if (!std::filesystem::exists(path)) continue;
            try {
                auto terms = parse_bfile(read_text_file(path));
                if (!terms.empty()) {
                    seq.terms = std::move(terms);
                    seq.source = SequenceSource::bfile;
                }
            } catch (const ParseError& e) {
                throw ParseError(path.string() + ": " + e.what());
            }
        }
        if (options.stripped_path.empty()) {
            // No stripped index: take every b-file in the directory.
            std::vector<std::filesystem::path> files;
            for (const auto& ent : std::filesystem::directory_iterator(options.bfile_dir)) {
                if (ent.path().extension() == ".txt") files.push_back(ent.path());
            }
            std::sort(files.begin(), files.end());
            for (const auto& path : files) {
                const std::string stem = path.stem().string();
                if (stem.size() != 7 || stem[0] != 'b') continue;
                auto id = SequenceId::try_parse("A" + stem.substr(1));
                if (!id) continue;
                Sequence seq;
                seq.id = *id;
                seq.terms = parse_bfile(read_text_file(path));
                seq.source = SequenceSource::bfile;
                if (!seq.terms.empty()) corpus.push_back(std::move(seq));
            }
        }
    }

    corpus = select_corpus(std::move(corpus), options.min_terms);
    if (options.sample_size) {
        corpus = sample_corpus(std::move(corpus), *options.sample_size, options.sample_seed);
    }
    return corpus;
}

std::map<SequenceId, OeisEntry> load_entries_dir(const std::filesystem::path& dir) {
    std::map<SequenceId, OeisEntry> entries;
    if (!std::filesystem::is_directory(dir)) {
        throw DataError("entries directory not found: " + dir.string());
    }
    for (const auto& ent : std::filesystem::directory_iterator(dir)) {
        if (ent.path().extension() != ".txt") continue;
        for (OeisEntry& e : parse_internal_entries(read_text_file(ent.path()))) {
            SequenceId id = e.id;
            entries.insert_or_assign(std::move(id), std::move(e));
        }
    }
    return entries;
}

} // namespace seqlaw
