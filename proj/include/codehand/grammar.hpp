#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace codehand::grammar {

enum class TokenKind { keyword, identifier, symbol, number_literal, string_literal };

const char* to_string(TokenKind kind);

// One lexical unit of a statement. `text` is the verbatim source span, so a
// dotted identifier recognized with stray spaces ("Cookie. name") keeps them
// until normalization. `gap_before` records whether whitespace separated the
// token from its predecessor; reconstruction uses it to restore the original
// adjacency ("foo(x)" stays glued, "a + b" stays spaced).
struct Token {
    std::string text;
    TokenKind kind = TokenKind::identifier;
    bool gap_before = true;

    friend bool operator==(const Token&, const Token&) = default;
};

struct StatementClass {
    std::string name;
    bool requires_trailing_colon = false;

    friend bool operator==(const StatementClass&, const StatementClass&) = default;
};

inline bool requires_trailing_colon(const StatementClass& cls) {
    return cls.requires_trailing_colon;
}

enum class PatternKind {
    keyword_literal,    // the class keyword, repaired on emission
    identifier,         // one name slot
    dotted_identifier,  // one possibly dotted name slot
    symbol,             // one symbol run
    literal,            // one number or string literal
    free_tail,          // remainder of the statement, generically tokenized
};

struct PatternElement {
    PatternKind kind;
    std::string text;  // keyword literals only
};

struct Production {
    std::string class_name;
    std::vector<PatternElement> pattern;
};

// Reserved words. Tokens whose text appears here are never treated as
// correctable identifiers and never enter the adaptive lexicon.
class KeywordSet {
public:
    KeywordSet() = default;
    explicit KeywordSet(std::initializer_list<const char*> words);

    // The full Python reserved-word list.
    static KeywordSet python();

    bool contains(std::string_view word) const;
    void insert(std::string_view word);
    std::size_t size() const { return words_.size(); }

private:
    std::set<std::string, std::less<>> words_;
};

struct ClassifyOptions {
    double fuzzy_threshold = 0.7;
    bool fuzzy_repair = true;
    bool case_insensitive = true;
};

// The statement classes, their productions and the keyword set. The built-in
// registry covers def, if, elif, for, while, try, except, else, break,
// return, yield, raise, pass and the assignment fallback; a configuration
// file can extend or override it.
class ClassRegistry {
public:
    static ClassRegistry built_in();

    // Adds or replaces a class. Non-assignment class names join the keyword
    // set. The production must belong to the class being added.
    void add_class(StatementClass cls, Production production);

    const StatementClass* find(std::string_view name) const;
    const StatementClass& assignment() const;
    const Production& production(std::string_view class_name) const;
    const KeywordSet& keywords() const { return keywords_; }

    // Classes in registration order.
    const std::vector<StatementClass>& classes() const { return classes_; }

    // Merges class definitions from a configuration file. One class per
    // line:  name = <true|false>, <pattern>
    // where the flag is requires_trailing_colon and the pattern is a
    // space-separated element list (kw:<word>, ident, dotted, sym, lit,
    // tail). Blank lines and lines starting with '#' are skipped.
    void merge_config(std::string_view text);
    void merge_config_file(const std::string& path);

private:
    std::vector<StatementClass> classes_;
    std::vector<Production> productions_;  // parallel to classes_
    KeywordSet keywords_;
};

// Picks the statement class for a line. The first whitespace-delimited word
// is matched exactly against the class keywords; failing that, and with
// fuzzy repair enabled, the class keyword with the highest similarity at or
// above the threshold wins (earlier registration breaks ties). Everything
// else is an assignment. Blank lines are rejected.
const StatementClass& classify_statement(std::string_view line, const ClassRegistry& registry,
                                         const ClassifyOptions& opts = {});

// Tokenizes a line against the production of `cls`. Parsing is total: any
// character sequence yields a token list, and concatenating the token texts
// reproduces the input minus inter-token whitespace. For non-assignment
// classes the first whitespace-delimited word is consumed and re-emitted as
// the (possibly repaired) class keyword.
std::vector<Token> parse_statement(std::string_view line, const StatementClass& cls,
                                   const ClassRegistry& registry);

}  // namespace codehand::grammar
