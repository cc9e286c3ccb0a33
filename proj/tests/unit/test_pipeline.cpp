#include <map>
#include <string>
#include <vector>

#include "codehand/errors.hpp"
#include "codehand/grammar.hpp"
#include "codehand/pipeline.hpp"
#include "doctest.h"
#include "support/synthetic_corpus.hpp"

using namespace codehand::pipeline;
using codehand::ConfigError;
using codehand::EmptyInputError;
using codehand::grammar::ClassRegistry;
using codehand::grammar::KeywordSet;
using codehand::grammar::StatementClass;
using codehand::grammar::TokenKind;

TEST_CASE("lexicon keeps insertion order and deduplicates exactly") {
    AdaptiveLexicon lexicon;
    CHECK(lexicon.add("cookie"));
    CHECK(lexicon.add("name"));
    CHECK_FALSE(lexicon.add("cookie"));
    CHECK_FALSE(lexicon.add(""));
    CHECK(lexicon.add("Cookie"));  // different case is a different entry
    CHECK(lexicon.size() == 3);
    CHECK(lexicon.entries() == std::vector<std::string>{"cookie", "name", "Cookie"});
    CHECK(lexicon.contains("name"));
    CHECK_FALSE(lexicon.contains("naue"));
}

TEST_CASE("lexicon refuses reserved words") {
    KeywordSet keywords = KeywordSet::python();
    AdaptiveLexicon lexicon(&keywords);
    CHECK_FALSE(lexicon.add("while"));
    CHECK_FALSE(lexicon.add("lambda"));
    CHECK(lexicon.add("While"));  // reserved words are case sensitive
    CHECK(lexicon.size() == 1);
}

TEST_CASE("best match picks the closest entry, earliest on ties") {
    AdaptiveLexicon lexicon;
    lexicon.add("cookie");
    lexicon.add("rookie");

    auto match = lexicon.best_match("wookie", 0.7, true);
    REQUIRE(match.has_value());
    CHECK(match->entry == "cookie");
    CHECK(match->score == doctest::Approx(5.0 / 6.0));

    CHECK_FALSE(lexicon.best_match("wookie", 0.9, true).has_value());
    CHECK_FALSE(lexicon.best_match("unrelated", 0.7, true).has_value());
    CHECK_FALSE(AdaptiveLexicon().best_match("cookie", 0.1, true).has_value());
}

TEST_CASE("best match honors the case flag") {
    AdaptiveLexicon lexicon;
    lexicon.add("cookie");
    CHECK(lexicon.best_match("COOKIE", 0.7, true).has_value());
    CHECK_FALSE(lexicon.best_match("COOKIE", 0.7, false).has_value());
}

TEST_CASE("correction config validates its threshold") {
    CorrectionConfig config;
    CHECK_NOTHROW(config.validate());
    config.similarity_threshold = 1.0;
    CHECK_NOTHROW(config.validate());
    config.similarity_threshold = 0.0;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config.similarity_threshold = 1.2;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config.similarity_threshold = -0.4;
    CHECK_THROWS_AS(config.validate(), ConfigError);
}

TEST_CASE("correction config key-value parsing") {
    auto config = CorrectionConfig::from_kv({{"similarity_threshold", "0.85"},
                                             {"fuzzy_keyword_repair", "false"},
                                             {"case_insensitive_match", "0"}});
    CHECK(config.similarity_threshold == doctest::Approx(0.85));
    CHECK_FALSE(config.fuzzy_keyword_repair);
    CHECK_FALSE(config.case_insensitive_match);

    CHECK_THROWS_AS(CorrectionConfig::from_kv({{"mystery", "1"}}), ConfigError);
    CHECK_THROWS_AS(CorrectionConfig::from_kv({{"similarity_threshold", "abc"}}), ConfigError);
    CHECK_THROWS_AS(CorrectionConfig::from_kv({{"similarity_threshold", "0"}}), ConfigError);
    CHECK_THROWS_AS(CorrectionConfig::from_kv({{"fuzzy_keyword_repair", "maybe"}}), ConfigError);

    std::string dumped = CorrectionConfig{}.to_kv();
    CHECK(dumped.find("similarity_threshold=0.7") != std::string::npos);
    CHECK(dumped.find("fuzzy_keyword_repair=true") != std::string::npos);
    CHECK(dumped.find("case_insensitive_match=true") != std::string::npos);
}

TEST_CASE("normalization strips every whitespace character from the token") {
    CHECK(normalize_token({"Cookie. name", TokenKind::identifier, true}).text == "Cookie.name");
    CHECK(normalize_token({"Conflict Error", TokenKind::identifier, true}).text ==
          "ConflictError");
    CHECK(normalize_token({"'a b\tc'", TokenKind::string_literal, true}).text == "'abc'");
    CHECK(normalize_token({"==", TokenKind::symbol, true}).text == "==");
    Token kept = normalize_token({"a b", TokenKind::identifier, false});
    CHECK(kept.kind == TokenKind::identifier);
    CHECK_FALSE(kept.gap_before);
}

TEST_CASE("token resolution repairs identifiers from the lexicon") {
    CorrectionConfig config;
    AdaptiveLexicon lexicon;
    lexicon.add("name");

    Token repaired = resolve_token({"naue", TokenKind::identifier, true}, lexicon, config);
    CHECK(repaired.text == "name");

    // Lexicon casing wins over the observed casing.
    lexicon.add("cookie");
    CHECK(resolve_token({"Cookie", TokenKind::identifier, true}, lexicon, config).text ==
          "cookie");
}

TEST_CASE("token resolution works per dotted segment") {
    CorrectionConfig config;
    AdaptiveLexicon lexicon;
    lexicon.add("cookie");
    lexicon.add("name");
    CHECK(resolve_token({"Cookie.naue", TokenKind::identifier, true}, lexicon, config).text ==
          "cookie.name");
    CHECK(resolve_token({"cookie.fresh", TokenKind::identifier, true}, lexicon, config).text ==
          "cookie.fresh");
    CHECK(lexicon.contains("fresh"));
}

TEST_CASE("an exact lexicon member is never rewritten to an earlier lookalike") {
    CorrectionConfig config;
    AdaptiveLexicon lexicon;
    lexicon.add("Name");
    lexicon.add("name");
    CHECK(resolve_token({"name", TokenKind::identifier, true}, lexicon, config).text == "name");
    CHECK(resolve_token({"Name", TokenKind::identifier, true}, lexicon, config).text == "Name");
}

TEST_CASE("token resolution leaves reserved words, numbers and other kinds alone") {
    CorrectionConfig config;
    KeywordSet keywords = KeywordSet::python();
    AdaptiveLexicon lexicon(&keywords);
    lexicon.add("whale");

    CHECK(resolve_token({"while", TokenKind::identifier, true}, lexicon, config).text ==
          "while");
    CHECK_FALSE(lexicon.contains("while"));
    CHECK(resolve_token({"3.14", TokenKind::identifier, true}, lexicon, config).text == "3.14");
    CHECK(resolve_token({"'whle'", TokenKind::string_literal, true}, lexicon, config).text ==
          "'whle'");
    CHECK(resolve_token({"==", TokenKind::symbol, true}, lexicon, config).text == "==");
}

TEST_CASE("unmatched identifiers enter the lexicon, matched ones do not") {
    CorrectionConfig config;
    AdaptiveLexicon lexicon;
    lexicon.add("name");

    resolve_token({"naue", TokenKind::identifier, true}, lexicon, config);
    CHECK(lexicon.size() == 1);

    config.similarity_threshold = 0.9;
    Token kept = resolve_token({"naue", TokenKind::identifier, true}, lexicon, config);
    CHECK(kept.text == "naue");
    CHECK(lexicon.contains("naue"));
}

TEST_CASE("concatenation inserts spaces only where the source had them") {
    ClassRegistry registry = ClassRegistry::built_in();
    std::vector<Token> tokens = {
        {"if", TokenKind::keyword, false},    {"cookie.name", TokenKind::identifier, true},
        {"==", TokenKind::symbol, true},      {"name", TokenKind::identifier, true},
        {";", TokenKind::symbol, true},
    };
    CHECK(concatenate(tokens, *registry.find("if")) == "if cookie.name == name:");

    std::vector<Token> glued = {
        {"def", TokenKind::keyword, false}, {"get_value", TokenKind::identifier, true},
        {"(", TokenKind::symbol, false},    {"self", TokenKind::identifier, false},
        {"):", TokenKind::symbol, false},
    };
    CHECK(concatenate(glued, *registry.find("def")) == "def get_value(self):");
}

TEST_CASE("colon repair for colon-requiring classes") {
    ClassRegistry registry = ClassRegistry::built_in();
    const StatementClass& while_cls = *registry.find("while");

    std::vector<Token> missing = {{"while", TokenKind::keyword, false},
                                  {"flag", TokenKind::identifier, true}};
    CHECK(concatenate(missing, while_cls) == "while flag:");

    for (const char* bad : {";", ".", ","}) {
        std::vector<Token> swapped = {{"while", TokenKind::keyword, false},
                                      {"flag", TokenKind::identifier, true},
                                      {bad, TokenKind::symbol, true}};
        CAPTURE(bad);
        CHECK(concatenate(swapped, while_cls) == "while flag:");
    }

    std::vector<Token> spaced = {{"while", TokenKind::keyword, false},
                                 {"flag", TokenKind::identifier, true},
                                 {":", TokenKind::symbol, true}};
    CHECK(concatenate(spaced, while_cls) == "while flag:");

    // A trailing identifier is never clobbered; the colon is appended.
    std::vector<Token> ident_tail = {{"else", TokenKind::keyword, false}};
    CHECK(concatenate(ident_tail, *registry.find("else")) == "else:");
}

TEST_CASE("no colon handling for plain classes") {
    ClassRegistry registry = ClassRegistry::built_in();
    std::vector<Token> tokens = {{"return", TokenKind::keyword, false},
                                 {"total", TokenKind::identifier, true},
                                 {";", TokenKind::symbol, true}};
    CHECK(concatenate(tokens, *registry.find("return")) == "return total ;");

    std::vector<Token> minus = {{"x", TokenKind::identifier, false},
                                {"=", TokenKind::symbol, true},
                                {"-", TokenKind::symbol, true},
                                {"1", TokenKind::number_literal, false}};
    CHECK(concatenate(minus, registry.assignment()) == "x = -1");

    CHECK_THROWS_AS(concatenate({}, registry.assignment()), EmptyInputError);
}

TEST_CASE("unbalanced bracket detection flags offending tokens") {
    auto sym = [](const char* s) { return Token{s, TokenKind::symbol, false}; };
    auto ident = [](const char* s) { return Token{s, TokenKind::identifier, false}; };

    std::vector<Token> open = {ident("f"), sym("("), ident("x")};
    StatementDiagnostics diag = detect_unbalanced(open);
    CHECK(diag.unbalanced_brackets == 1);
    CHECK(diag.flagged_tokens == std::vector<std::size_t>{1});

    std::vector<Token> balanced = {ident("f"), sym("("), ident("x"), sym(")")};
    CHECK(detect_unbalanced(balanced) == StatementDiagnostics{});

    std::vector<Token> crossed = {sym("([)]")};
    diag = detect_unbalanced(crossed);
    CHECK(diag.unbalanced_brackets == 2);
    CHECK(diag.flagged_tokens == std::vector<std::size_t>{0});

    // Bracket characters inside strings are invisible to the check.
    std::vector<Token> quoted = {ident("x"), sym("="), {"'('", TokenKind::string_literal, true}};
    CHECK(detect_unbalanced(quoted).unbalanced_brackets == 0);
}

TEST_CASE("statement correction runs the full pipeline") {
    ClassRegistry registry = ClassRegistry::built_in();
    CorrectionConfig config;
    AdaptiveLexicon lexicon(&registry.keywords());
    lexicon.add("cookie");
    lexicon.add("name");

    CorrectedStatement fixed =
        correct_statement("if Cookie. name == naue ;", lexicon, config, registry);
    CHECK(fixed.text == "if cookie.name == name:");
    CHECK(fixed.diagnostics.unbalanced_brackets == 0);

    AdaptiveLexicon dashes(&registry.keywords());
    dashes.add("get_value");
    CHECK(correct_statement("def get-value(self):", dashes, config, registry).text ==
          "def get_value(self):");
}

TEST_CASE("statement correction repairs keywords and colons together") {
    ClassRegistry registry = ClassRegistry::built_in();
    CorrectionConfig config;
    AdaptiveLexicon lexicon(&registry.keywords());
    lexicon.add("flag");

    CHECK(correct_statement("whiIe flag;", lexicon, config, registry).text == "while flag:");
    CHECK(correct_statement("while flag", lexicon, config, registry).text == "while flag:");
    CHECK(correct_statement("retwrn flag", lexicon, config, registry).text == "return flag");
}

TEST_CASE("keyword repair can be disabled independently") {
    ClassRegistry registry = ClassRegistry::built_in();
    CorrectionConfig config;
    config.fuzzy_keyword_repair = false;
    AdaptiveLexicon lexicon(&registry.keywords());

    // With repair off the line is a plain assignment: the near-keyword is
    // kept verbatim and learned like any other identifier.
    CHECK(correct_statement("retwrn = 1", lexicon, config, registry).text == "retwrn = 1");
    CHECK(lexicon.contains("retwrn"));

    // With repair on the same line is reclassified and the keyword fixed.
    CorrectionConfig repair;
    AdaptiveLexicon fresh(&registry.keywords());
    CHECK(correct_statement("retwrn = 1", fresh, repair, registry).text == "return = 1");
}

TEST_CASE("statements that look corrected already pass through unchanged") {
    ClassRegistry registry = ClassRegistry::built_in();
    CorrectionConfig config;
    for (const char* line : {"if(x>1):", "x = -1", "pass", "return", "result = []",
                             "tally = [0, 0, 0, 0]", "spot = -1"}) {
        CAPTURE(line);
        AdaptiveLexicon lexicon(&registry.keywords());
        CHECK(correct_statement(line, lexicon, config, registry).text == line);
    }
}

TEST_CASE("unbalanced brackets surface in statement diagnostics") {
    ClassRegistry registry = ClassRegistry::built_in();
    CorrectionConfig config;
    AdaptiveLexicon lexicon(&registry.keywords());
    CorrectedStatement broken = correct_statement("f(x", lexicon, config, registry);
    CHECK(broken.diagnostics.unbalanced_brackets == 1);
    CHECK(broken.text == "f(x");
}

TEST_CASE("sample correction keeps blank lines and reports the lexicon") {
    ClassRegistry registry = ClassRegistry::built_in();
    CorrectionConfig config;
    std::vector<std::string> lines = {"name = 1", "", "naue = 2"};

    SampleCorrection result = correct_sample(lines, config, registry);
    REQUIRE(result.lines.size() == 3);
    CHECK(result.lines[0] == "name = 1");
    CHECK(result.lines[1] == "");
    CHECK(result.lines[2] == "name = 2");
    CHECK(result.lexicon.contains("name"));
    CHECK_FALSE(result.lexicon.contains("naue"));
    CHECK(result.diagnostics.size() == 3);
}

TEST_CASE("each sample starts with a fresh lexicon unless one is shared") {
    ClassRegistry registry = ClassRegistry::built_in();
    CorrectionConfig config;
    std::vector<std::string> first = {"naue = 1"};
    std::vector<std::string> second = {"name = 1", "naue = 2"};

    // Fresh run: nothing to repair "naue" against.
    CHECK(correct_sample(first, config, registry).lines[0] == "naue = 1");
    CHECK(correct_sample(second, config, registry).lines[1] == "name = 2");

    // Shared lexicon: the first sample teaches the second.
    AdaptiveLexicon shared(&registry.keywords());
    std::vector<std::string> teach = {"name = 1"};
    correct_sample(teach, config, registry, &shared);
    SampleCorrection reuse = correct_sample(first, config, registry, &shared);
    CHECK(reuse.lines[0] == "name = 1");
}

TEST_CASE("a stricter threshold refuses borderline repairs") {
    ClassRegistry registry = ClassRegistry::built_in();
    std::vector<std::string> lines = {"name = 1", "naue = 2"};

    CorrectionConfig loose;  // 0.7 accepts the 0.75 match
    CHECK(correct_sample(lines, loose, registry).lines[1] == "name = 2");

    CorrectionConfig strict;
    strict.similarity_threshold = 0.9;
    CHECK(correct_sample(lines, strict, registry).lines[1] == "naue = 2");
}

TEST_CASE("clean code is a fixed point of the corrector") {
    ClassRegistry registry = ClassRegistry::built_in();
    CorrectionConfig config;
    for (const auto& fn : synthetic::corpus()) {
        CAPTURE(fn.name);
        SampleCorrection result = correct_sample(fn.lines, config, registry);
        CHECK(result.lines == fn.lines);
        for (const auto& diag : result.diagnostics) {
            CHECK(diag.unbalanced_brackets == 0);
        }
    }
}

TEST_CASE("correction is idempotent on corrupted samples") {
    ClassRegistry registry = ClassRegistry::built_in();
    CorrectionConfig config;
    std::vector<std::string> noisy = {
        "def get-value(self):",
        "naue = self. count",
        "whiIe naue > 0;",
        "naue -= 1",
        "retwrn naue",
    };
    SampleCorrection once = correct_sample(noisy, config, registry);
    SampleCorrection twice = correct_sample(once.lines, config, registry);
    CHECK(twice.lines == once.lines);
}
