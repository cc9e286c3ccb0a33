#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "codehand/corpus.hpp"
#include "codehand/errors.hpp"
#include "codehand/io.hpp"
#include "doctest.h"
#include "support/synthetic_corpus.hpp"

using namespace codehand::corpus;
using codehand::ConfigError;
using codehand::InsufficientCorpusError;

namespace fs = std::filesystem;

namespace {

FunctionSample sized_sample(const std::string& id, std::size_t lines,
                            std::size_t line_length = 10) {
    FunctionSample sample;
    sample.id = id;
    sample.origin_path = "mem.py";
    sample.origin_line = 1;
    sample.lines.push_back("def " + id + "():");
    for (std::size_t i = 1; i < lines; ++i) {
        sample.lines.push_back(std::string(line_length, 'x'));
    }
    return sample;
}

std::vector<std::string> ids_of(const std::vector<FunctionSample>& samples) {
    std::vector<std::string> ids;
    for (const auto& s : samples) ids.push_back(s.id);
    return ids;
}

}  // namespace

TEST_CASE("the id hash matches published fnv1a test vectors") {
    CHECK(fnv1a64("") == 14695981039346656037ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("comment stripping respects string literals") {
    std::vector<std::string> lines = {
        "# whole line",
        "x = 1  # trailing",
        "s = '#tag'",
        "   # indented comment",
        "y = \"a#b\"  # cut here",
        "z = 'esc\\'#still string' + 1",
        "plain = 2",
    };
    std::vector<std::string> stripped = strip_comments(lines);
    CHECK(stripped == std::vector<std::string>{
                          "x = 1",
                          "s = '#tag'",
                          "y = \"a#b\"",
                          "z = 'esc\\'#still string' + 1",
                          "plain = 2",
                      });
}

TEST_CASE("function extraction flattens bodies and sees nested defs") {
    std::vector<std::string> lines = {
        "import os",            // 1
        "",                     // 2
        "def outer(x):",        // 3
        "    a = 1",            // 4
        "",                     // 5
        "    def inner(y):",    // 6
        "        return y",     // 7
        "    return a",         // 8
        "x = outer(1)",         // 9
        "def last():",          // 10
        "    pass",             // 11
    };
    std::vector<FunctionSample> samples = extract_functions(lines, "demo.py");
    REQUIRE(samples.size() == 3);

    CHECK(samples[0].origin_line == 3);
    CHECK(samples[0].lines == std::vector<std::string>{"def outer(x):", "a = 1",
                                                       "def inner(y):", "return y",
                                                       "return a"});
    CHECK(samples[1].origin_line == 6);
    CHECK(samples[1].lines == std::vector<std::string>{"def inner(y):", "return y"});
    CHECK(samples[2].origin_line == 10);
    CHECK(samples[2].lines == std::vector<std::string>{"def last():", "pass"});

    for (const auto& sample : samples) {
        CHECK(sample.origin_path == "demo.py");
        CHECK(sample.id.rfind("fn_", 0) == 0);
    }
    std::vector<std::string> ids = ids_of(samples);
    std::set<std::string> unique(ids.begin(), ids.end());
    CHECK(unique.size() == 3);

    // Ids are a pure function of origin, so a re-run reproduces them.
    CHECK(ids_of(extract_functions(lines, "demo.py")) == ids_of(samples));
    CHECK(ids_of(extract_functions(lines, "other.py")) != ids_of(samples));
}

TEST_CASE("eligibility keeps line counts and lengths inside the window") {
    std::vector<FunctionSample> pool = {
        sized_sample("tiny", 8),
        sized_sample("low", 9),
        sized_sample("high", 18),
        sized_sample("fat", 19),
        sized_sample("wide", 12, 61),
        sized_sample("edge", 12, 60),
    };
    std::vector<FunctionSample> kept = filter_eligible(pool, {});
    CHECK(ids_of(kept) == std::vector<std::string>{"low", "high", "edge"});
}

TEST_CASE("the repetitive filter drops assignment tables when asked") {
    FunctionSample table;
    table.id = "table";
    table.lines.push_back("def table():");
    for (int i = 0; i < 9; ++i) table.lines.push_back("value = " + std::to_string(i));

    FunctionSample logic;
    logic.id = "logic";
    logic.lines.push_back("def logic():");
    for (int i = 0; i < 4; ++i) logic.lines.push_back("value = " + std::to_string(i));
    for (int i = 0; i < 5; ++i) logic.lines.push_back("return value");

    std::vector<FunctionSample> pool = {table, logic};

    FilterOptions keep_all;
    CHECK(filter_eligible(pool, keep_all).size() == 2);

    FilterOptions drop;
    drop.drop_repetitive = true;
    std::vector<FunctionSample> kept = filter_eligible(pool, drop);
    CHECK(ids_of(kept) == std::vector<std::string>{"logic"});
}

TEST_CASE("function sampling is seeded and rejects oversized requests") {
    std::vector<FunctionSample> pool;
    for (int i = 0; i < 10; ++i) {
        pool.push_back(sized_sample("fn" + std::to_string(i), 9));
    }

    std::vector<FunctionSample> first = sample_functions(pool, 5, 77);
    std::vector<FunctionSample> again = sample_functions(pool, 5, 77);
    CHECK(ids_of(first) == ids_of(again));
    CHECK(first.size() == 5);

    std::vector<std::string> first_ids = ids_of(first);
    std::set<std::string> unique(first_ids.begin(), first_ids.end());
    CHECK(unique.size() == 5);

    std::vector<FunctionSample> other = sample_functions(pool, 5, 78);
    CHECK(ids_of(other) != ids_of(first));

    std::vector<FunctionSample> all = sample_functions(pool, 10, 3);
    std::vector<std::string> all_ids = ids_of(all);
    std::set<std::string> everything(all_ids.begin(), all_ids.end());
    CHECK(everything.size() == 10);

    CHECK(sample_functions(pool, 0, 1).empty());
    CHECK_THROWS_AS(sample_functions(pool, 11, 1), InsufficientCorpusError);
}

TEST_CASE("directory harvest visits python files in sorted order") {
    fs::path root = fs::temp_directory_path() / "codehand_corpus_harvest";
    fs::remove_all(root);
    fs::create_directories(root / "sub");
    {
        std::ofstream(root / "b.py") << "def beta():\n    x = 1\n    return x\n";
        std::ofstream(root / "a.py") << "def alpha():\n    return 1\n";
        std::ofstream(root / "notes.txt") << "def ignored():\n    pass\n";
        std::ofstream(root / "sub" / "c.py") << "# comment\ndef gamma():\n    pass\n";
    }

    std::vector<FunctionSample> samples = harvest_directory(root);
    REQUIRE(samples.size() == 3);
    CHECK(samples[0].lines[0] == "def alpha():");
    CHECK(samples[1].lines[0] == "def beta():");
    CHECK(samples[2].lines[0] == "def gamma():");
    // Comment lines vanish before extraction, so numbering follows the
    // stripped file.
    CHECK(samples[2].origin_line == 1);

    CHECK_THROWS_AS(harvest_directory(root / "missing"), ConfigError);
    fs::remove_all(root);
}

TEST_CASE("samples are written one file each plus an index") {
    fs::path dir = fs::temp_directory_path() / "codehand_corpus_write";
    fs::remove_all(dir);

    std::vector<FunctionSample> samples = {sized_sample("fn_aaaa", 9),
                                           sized_sample("fn_bbbb", 10)};
    samples[0].origin_path = "src/x.py";
    samples[0].origin_line = 12;
    write_samples(samples, dir);

    CHECK(codehand::io::read_lines(dir / "fn_aaaa.txt") == samples[0].lines);
    CHECK(codehand::io::read_lines(dir / "fn_bbbb.txt") == samples[1].lines);
    std::vector<std::string> index = codehand::io::read_lines(dir / "index.txt");
    REQUIRE(index.size() == 2);
    CHECK(index[0] == "fn_aaaa\tsrc/x.py\t12");
    fs::remove_all(dir);
}

TEST_CASE("the synthetic pool survives a full extract and filter round trip") {
    std::vector<std::string> lines = codehand::io::split_lines(synthetic::as_python_file());
    std::vector<FunctionSample> extracted = extract_functions(lines, "synthetic.py");
    REQUIRE(extracted.size() == synthetic::corpus().size());
    for (std::size_t i = 0; i < extracted.size(); ++i) {
        CAPTURE(synthetic::corpus()[i].name);
        CHECK(extracted[i].lines == synthetic::corpus()[i].lines);
    }
    CHECK(filter_eligible(extracted, {}).size() == extracted.size());
}
