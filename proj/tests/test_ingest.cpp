#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "seqlaw/corpus.hpp"
#include "seqlaw/error.hpp"
#include "seqlaw/io.hpp"
#include "seqlaw/oeis_parse.hpp"
#include "seqlaw/rng.hpp"
#include "seqlaw/sequence.hpp"

#include "support/oracles.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

using namespace seqlaw;

namespace {

std::filesystem::path temp_dir(const char* tag) {
    auto dir = std::filesystem::temp_directory_path() /
               ("seqlaw_test_" + std::string(tag) + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("sequence ids") {
    CHECK(SequenceId::parse("A000045").value() == "A000045");
    CHECK(SequenceId::parse("A000045").number() == 45);
    CHECK(SequenceId::from_number(45).value() == "A000045");
    CHECK(!SequenceId::try_parse("A00045"));
    CHECK(!SequenceId::try_parse("B000045"));
    CHECK(!SequenceId::try_parse("A0000456"));
    CHECK(!SequenceId::try_parse("A00004x"));
    CHECK_THROWS_AS(SequenceId::parse("bogus"), ParseError);
    CHECK_THROWS_AS(SequenceId::from_number(1000000), ConfigError);
}

TEST_CASE("stripped line parsing") {
    const auto parsed = parse_stripped_line("A000045 ,0,1,1,2,3,5,8,13,");
    REQUIRE(parsed.has_value());
    CHECK(parsed->first.value() == "A000045");
    const std::vector<BigInt> expect = {0, 1, 1, 2, 3, 5, 8, 13};
    CHECK(parsed->second == expect);

    CHECK(!parse_stripped_line("# OEIS archive header"));
    CHECK(!parse_stripped_line(""));
    CHECK(!parse_stripped_line("   "));

    try {
        parse_stripped_line("A000068 ,2,X,5,");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("position 2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_stripped_line("A00004 ,1,2,"), ParseError);
    CHECK_THROWS_AS(parse_stripped_line("A000068"), ParseError);
}

TEST_CASE("bfile parsing") {
    CHECK(parse_bfile("0 1\n1 2\n2 4\n") == std::vector<BigInt>{1, 2, 4});
    CHECK(parse_bfile("# author note\n1 5\n2 7\n") == std::vector<BigInt>{5, 7});
    CHECK(parse_bfile("-1 9\n0 10\n1 11\n") == std::vector<BigInt>{9, 10, 11});
    CHECK(parse_bfile("").empty());

    CHECK_THROWS_AS(parse_bfile("1 1\n3 2\n"), ParseError);  // gap
    CHECK_THROWS_AS(parse_bfile("1 1\n1 2\n"), ParseError);  // duplicate
    CHECK_THROWS_AS(parse_bfile("1 x\n"), ParseError);       // non-integer term
    CHECK_THROWS_AS(parse_bfile("y 1\n"), ParseError);       // non-integer index
    CHECK_THROWS_AS(parse_bfile("12\n"), ParseError);        // missing term

    // A 1000-digit term must equal the independent string-to-integer oracle.
    Rng rng(2024);
    std::string big = "1";
    for (int i = 0; i < 999; ++i) big += char('0' + rng.below(10));
    const auto terms = parse_bfile("1 " + big + "\n");
    REQUIRE(terms.size() == 1);
    CHECK(terms[0] == oracles::string_to_integer_oracle(big));
}

TEST_CASE("names line parsing") {
    const auto parsed = parse_names_line("A000045 Fibonacci numbers: F(n) = F(n-1) + F(n-2).");
    REQUIRE(parsed.has_value());
    CHECK(parsed->first.value() == "A000045");
    CHECK(parsed->second == "Fibonacci numbers: F(n) = F(n-1) + F(n-2).");
    CHECK(!parse_names_line("# header"));
}

TEST_CASE("internal entry records") {
    const char* text =
        "# Greetings.\n"
        "\n"
        "%I A000045 M0692\n"
        "%S A000045 0,1,1,2,3\n"
        "%T A000045 5,8,13\n"
        "%N A000045 Fibonacci numbers.\n"
        "%C A000045 First comment.\n"
        "%C A000045 Second comment mentions squares.\n"
        "%K A000045 core,nice,easy,nonn\n"
        "%O A000045 0,4\n";
    const OeisEntry entry = parse_internal_entry(text);
    CHECK(entry.id.value() == "A000045");
    CHECK(entry.name == "Fibonacci numbers.");
    CHECK(entry.terms == std::vector<BigInt>{0, 1, 1, 2, 3, 5, 8, 13});
    CHECK(entry.comments.size() == 2);
    CHECK(entry.keywords.count("core") == 1);
    CHECK(entry.keywords.count("nonn") == 1);
    CHECK(entry.keywords.count("hard") == 0);

    const char* multi =
        "%S A000001 1,2\n%N A000001 First.\n%K A000001 nonn\n"
        "%S A000002 3,4\n%N A000002 Second.\n%K A000002 nonn\n";
    const auto entries = parse_internal_entries(multi);
    CHECK(entries.size() == 2);
    CHECK(entries[0].name == "First.");
    CHECK(entries[1].name == "Second.");

    CHECK_THROWS_AS(parse_internal_entry("no records here"), ParseError);
    CHECK_THROWS_AS(parse_internal_entries("%S Axyz 1,2\n"), ParseError);
}

TEST_CASE("label extraction") {
    OeisEntry entry;
    entry.id = SequenceId::parse("A000045");
    entry.name = "Fibonacci numbers";
    entry.keywords = {"core", "nice", "easy", "nonn"};
    LabelSet labels = extract_labels(entry);
    CHECK(labels[0]); // nice
    CHECK(labels[1]); // core
    CHECK(labels[2]); // easy
    CHECK(!labels[3]);
    CHECK(!labels[4]);
    CHECK(!labels[7]); // not other

    OeisEntry prime_entry;
    prime_entry.id = SequenceId::parse("A000001");
    prime_entry.name = "Smallest prime containing n digits";
    CHECK(extract_labels(prime_entry)[4]);
    CHECK(!extract_labels(prime_entry)[7]);

    OeisEntry other_entry;
    other_entry.id = SequenceId::parse("A000002");
    other_entry.name = "Number of trees";
    const LabelSet other = extract_labels(other_entry);
    for (std::size_t i = 0; i + 1 < kLabelCount; ++i) CHECK(!other[i]);
    CHECK(other[7]);

    // Substring, not whole word: "primes" and "Primer" both hit.
    OeisEntry primes_entry = other_entry;
    primes_entry.name = "Numbers that are products of two primes";
    CHECK(extract_labels(primes_entry)[4]);

    // Matching in comments counts too.
    OeisEntry comment_entry = other_entry;
    comment_entry.comments = {"Each term is a Binomial coefficient."};
    CHECK(extract_labels(comment_entry)[5]);

    // Case-insensitivity: uppercasing everything changes nothing.
    OeisEntry upper = prime_entry;
    std::transform(upper.name.begin(), upper.name.end(), upper.name.begin(), ::toupper);
    CHECK(extract_labels(upper).flags == extract_labels(prime_entry).flags);
}

TEST_CASE("corpus selection") {
    auto make = [](unsigned id, std::size_t len) {
        Sequence s;
        s.id = SequenceId::from_number(id);
        s.terms.assign(len, BigInt(1));
        return s;
    };
    std::vector<Sequence> seqs;
    seqs.push_back(make(1, 990));
    seqs.push_back(make(2, 989));
    seqs.push_back(make(3, 1000));

    const auto picked = select_corpus(seqs, 990);
    REQUIRE(picked.size() == 2);
    CHECK(picked[0].id.value() == "A000001");
    CHECK(picked[1].id.value() == "A000003");

    CHECK(select_corpus({}, 990).empty());
    CHECK(select_corpus(seqs, 1).size() == 3);

    // Output size is monotone non-increasing in min_terms.
    std::size_t prev = seqs.size();
    for (std::size_t mt : {1ul, 500ul, 990ul, 991ul, 2000ul}) {
        const std::size_t count = select_corpus(seqs, mt).size();
        CHECK(count <= prev);
        prev = count;
    }
}

TEST_CASE("corpus sampling is deterministic and order preserving") {
    std::vector<Sequence> seqs;
    for (unsigned i = 0; i < 50; ++i) {
        Sequence s;
        s.id = SequenceId::from_number(i);
        s.terms.assign(3, BigInt(i));
        seqs.push_back(s);
    }
    const auto a = sample_corpus(seqs, 10, 42);
    const auto b = sample_corpus(seqs, 10, 42);
    REQUIRE(a.size() == 10);
    for (std::size_t i = 0; i < 10; ++i) CHECK(a[i].id == b[i].id);
    CHECK(std::is_sorted(a.begin(), a.end(),
                         [](const Sequence& x, const Sequence& y) { return x.id < y.id; }));
    CHECK(sample_corpus(seqs, 100, 1).size() == 50);
}

TEST_CASE("manifest round trip preserves terms exactly") {
    Rng rng(7);
    std::vector<Sequence> corpus;
    for (unsigned i = 0; i < 20; ++i) {
        Sequence s;
        s.id = SequenceId::from_number(100 + i);
        s.source = i % 2 ? SequenceSource::bfile : SequenceSource::stripped;
        const std::size_t len = 1 + rng.below(30);
        for (std::size_t j = 0; j < len; ++j) {
            std::string digits = std::to_string(1 + rng.below(9));
            const std::size_t extra = rng.below(1000); // up to 1000-digit terms
            for (std::size_t d = 0; d < extra; ++d) digits += char('0' + rng.below(10));
            if (rng.unit() < 0.3) digits = "-" + digits;
            s.terms.push_back(parse_big_integer(digits));
        }
        corpus.push_back(std::move(s));
    }

    const auto dir = temp_dir("manifest");
    write_manifest(dir / "corpus.tsv", corpus);
    const auto loaded = read_manifest(dir / "corpus.tsv");
    REQUIRE(loaded.size() == corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        CHECK(loaded[i].id == corpus[i].id);
        CHECK(loaded[i].source == corpus[i].source);
        CHECK(loaded[i].terms == corpus[i].terms);
    }
    std::filesystem::remove_all(dir);

    CHECK_THROWS_AS(parse_manifest_line("A000001 no tabs"), ParseError);
}

TEST_CASE("load_corpus prefers b-files and honors gzip") {
    const auto dir = temp_dir("ingest");

    // Stripped carries short prefixes; the b-file has the full run for one id.
    const std::string stripped =
        "# header\n"
        "A000012 ,1,1,1,\n"
        "A000027 ,1,2,3,4,\n";
    write_text_file_atomic(dir / "stripped", stripped);
    write_text_file_atomic(dir / "stripped.gz", gzip_compress(stripped));

    std::filesystem::create_directories(dir / "bfiles");
    std::string bfile;
    for (int i = 1; i <= 12; ++i) bfile += std::to_string(i) + " " + std::to_string(i) + "\n";
    write_text_file_atomic(dir / "bfiles" / "b000027.txt", bfile);

    IngestOptions opts;
    opts.stripped_path = dir / "stripped";
    opts.bfile_dir = dir / "bfiles";
    opts.min_terms = 1;
    auto corpus = load_corpus(opts);
    REQUIRE(corpus.size() == 2);
    CHECK(corpus[0].source == SequenceSource::stripped);
    CHECK(corpus[0].terms.size() == 3);
    CHECK(corpus[1].source == SequenceSource::bfile);
    CHECK(corpus[1].terms.size() == 12);
    CHECK(corpus[1].terms[11] == 12);

    // Same result through the gzip path.
    opts.stripped_path = dir / "stripped.gz";
    const auto gz_corpus = load_corpus(opts);
    REQUIRE(gz_corpus.size() == 2);
    CHECK(gz_corpus[1].terms == corpus[1].terms);

    // min_terms filters.
    opts.min_terms = 10;
    CHECK(load_corpus(opts).size() == 1);

    std::filesystem::remove_all(dir);
}

TEST_CASE("entries directory loading") {
    const auto dir = temp_dir("entries");
    std::filesystem::create_directories(dir / "entries");
    write_text_file_atomic(dir / "entries" / "A000045.txt",
                           "%S A000045 0,1,1,2\n%N A000045 Fibonacci numbers.\n"
                           "%K A000045 core,nonn\n");
    write_text_file_atomic(dir / "entries" / "A000040.txt",
                           "%S A000040 2,3,5,7\n%N A000040 The prime numbers.\n"
                           "%K A000040 core,nonn\n");
    const auto entries = load_entries_dir(dir / "entries");
    REQUIRE(entries.size() == 2);
    CHECK(entries.at(SequenceId::parse("A000045")).name == "Fibonacci numbers.");
    CHECK(entries.at(SequenceId::parse("A000040")).keywords.count("core") == 1);

    CHECK_THROWS_AS(load_entries_dir(dir / "missing"), DataError);
    std::filesystem::remove_all(dir);
}
