#include "codehand/grammar.hpp"

#include <fstream>
#include <optional>
#include <sstream>

#include "codehand/chars.hpp"
#include "codehand/distance.hpp"
#include "codehand/errors.hpp"

namespace codehand::grammar {

const char* to_string(TokenKind kind) {
    switch (kind) {
        case TokenKind::keyword: return "keyword";
        case TokenKind::identifier: return "identifier";
        case TokenKind::symbol: return "symbol";
        case TokenKind::number_literal: return "number_literal";
        case TokenKind::string_literal: return "string_literal";
    }
    return "unknown";
}

KeywordSet::KeywordSet(std::initializer_list<const char*> words) {
    for (const char* w : words) words_.emplace(w);
}

KeywordSet KeywordSet::python() {
    return KeywordSet{"and",    "as",     "assert", "break", "class",  "continue", "def",
                      "del",    "elif",   "else",   "except", "exec",  "finally",  "for",
                      "from",   "global", "if",     "import", "in",    "is",       "lambda",
                      "not",    "or",     "pass",   "print",  "raise", "return",   "try",
                      "while",  "with",   "yield"};
}

bool KeywordSet::contains(std::string_view word) const {
    return words_.find(word) != words_.end();
}

void KeywordSet::insert(std::string_view word) { words_.emplace(word); }

ClassRegistry ClassRegistry::built_in() {
    ClassRegistry r;
    r.keywords_ = KeywordSet::python();

    auto head = [](const char* name) {
        return PatternElement{PatternKind::keyword_literal, name};
    };
    const PatternElement name_slot{PatternKind::dotted_identifier, ""};
    const PatternElement tail{PatternKind::free_tail, ""};

    r.add_class({"def", true}, {"def", {head("def"), name_slot, tail}});
    r.add_class({"if", true}, {"if", {head("if"), tail}});
    r.add_class({"elif", true}, {"elif", {head("elif"), tail}});
    r.add_class({"for", true}, {"for", {head("for"), tail}});
    r.add_class({"while", true}, {"while", {head("while"), tail}});
    r.add_class({"try", true}, {"try", {head("try"), tail}});
    r.add_class({"except", true}, {"except", {head("except"), tail}});
    r.add_class({"else", true}, {"else", {head("else"), tail}});
    r.add_class({"break", false}, {"break", {head("break"), tail}});
    r.add_class({"return", false}, {"return", {head("return"), tail}});
    r.add_class({"yield", false}, {"yield", {head("yield"), tail}});
    r.add_class({"raise", false}, {"raise", {head("raise"), tail}});
    r.add_class({"pass", false}, {"pass", {head("pass"), tail}});
    r.add_class({"assignment", false}, {"assignment", {tail}});
    return r;
}

void ClassRegistry::add_class(StatementClass cls, Production production) {
    if (production.class_name != cls.name) {
        throw ConfigError("production for class '" + production.class_name +
                          "' registered under '" + cls.name + "'");
    }
    if (cls.name != "assignment") keywords_.insert(cls.name);
    for (std::size_t i = 0; i < classes_.size(); ++i) {
        if (classes_[i].name == cls.name) {
            classes_[i] = std::move(cls);
            productions_[i] = std::move(production);
            return;
        }
    }
    classes_.push_back(std::move(cls));
    productions_.push_back(std::move(production));
}

const StatementClass* ClassRegistry::find(std::string_view name) const {
    for (const auto& cls : classes_) {
        if (cls.name == name) return &cls;
    }
    return nullptr;
}

const StatementClass& ClassRegistry::assignment() const {
    const StatementClass* cls = find("assignment");
    if (!cls) throw ConfigError("registry has no assignment class");
    return *cls;
}

const Production& ClassRegistry::production(std::string_view class_name) const {
    for (std::size_t i = 0; i < classes_.size(); ++i) {
        if (classes_[i].name == class_name) return productions_[i];
    }
    throw ConfigError("no production for class '" + std::string(class_name) + "'");
}

namespace {

PatternElement parse_pattern_element(std::string_view spec, std::size_t line_no) {
    if (spec.rfind("kw:", 0) == 0) {
        std::string word(spec.substr(3));
        if (word.empty()) {
            throw ConfigError("class registry line " + std::to_string(line_no) +
                              ": empty keyword element");
        }
        return {PatternKind::keyword_literal, word};
    }
    if (spec == "ident") return {PatternKind::identifier, ""};
    if (spec == "dotted") return {PatternKind::dotted_identifier, ""};
    if (spec == "sym") return {PatternKind::symbol, ""};
    if (spec == "lit") return {PatternKind::literal, ""};
    if (spec == "tail") return {PatternKind::free_tail, ""};
    throw ConfigError("class registry line " + std::to_string(line_no) +
                      ": unknown pattern element '" + std::string(spec) + "'");
}

}  // namespace

void ClassRegistry::merge_config(std::string_view text) {
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = trim_view(text.substr(start, end - start));
        start = end + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') continue;

        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("class registry line " + std::to_string(line_no) +
                              ": expected '='");
        }
        std::string name(trim_view(line.substr(0, eq)));
        std::string_view rest = trim_view(line.substr(eq + 1));
        std::size_t comma = rest.find(',');
        if (name.empty() || comma == std::string_view::npos) {
            throw ConfigError("class registry line " + std::to_string(line_no) +
                              ": expected '<name> = <true|false>, <pattern>'");
        }
        std::string_view flag = trim_view(rest.substr(0, comma));
        bool colon;
        if (flag == "true") {
            colon = true;
        } else if (flag == "false") {
            colon = false;
        } else {
            throw ConfigError("class registry line " + std::to_string(line_no) +
                              ": flag must be true or false");
        }

        Production prod{name, {}};
        std::istringstream pattern{std::string(trim_view(rest.substr(comma + 1)))};
        std::string spec;
        while (pattern >> spec) prod.pattern.push_back(parse_pattern_element(spec, line_no));
        if (prod.pattern.empty()) {
            throw ConfigError("class registry line " + std::to_string(line_no) +
                              ": empty pattern");
        }
        add_class({name, colon}, std::move(prod));
    }
}

void ClassRegistry::merge_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read class registry file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    merge_config(buf.str());
}

const StatementClass& classify_statement(std::string_view line, const ClassRegistry& registry,
                                         const ClassifyOptions& opts) {
    std::string_view trimmed = trim_view(line);
    if (trimmed.empty()) throw EmptyInputError("cannot classify an empty statement");

    std::size_t word_end = 0;
    while (word_end < trimmed.size() && !is_space_char(trimmed[word_end])) ++word_end;
    std::string_view first = trimmed.substr(0, word_end);

    for (const auto& cls : registry.classes()) {
        if (cls.name != "assignment" && cls.name == first) return cls;
    }
    if (opts.fuzzy_repair) {
        const StatementClass* best = nullptr;
        double best_score = 0.0;
        for (const auto& cls : registry.classes()) {
            if (cls.name == "assignment") continue;
            double score = pipeline::similarity(first, cls.name, opts.case_insensitive);
            if (score > best_score) {
                best_score = score;
                best = &cls;
            }
        }
        if (best && best_score >= opts.fuzzy_threshold) return *best;
    }
    return registry.assignment();
}

namespace {

// Longest run of identifier characters starting at `p`. A '-' is absorbed
// when squeezed directly between identifier characters, so a dash read in
// place of an underscore stays inside the name it corrupted.
std::size_t scan_run(std::string_view s, std::size_t p) {
    while (p < s.size()) {
        if (is_word_char(s[p])) {
            ++p;
        } else if (s[p] == '-' && p + 1 < s.size() && is_word_char(s[p + 1])) {
            ++p;
        } else {
            break;
        }
    }
    return p;
}

class Scanner {
public:
    Scanner(std::string_view line, const KeywordSet& keywords)
        : line_(line), keywords_(keywords) {}

    bool at_end() const { return pos_ >= line_.size(); }

    // Consumes the next whitespace-delimited word verbatim. Used for the
    // leading keyword slot, where the emitted text comes from the class.
    void skip_raw_word() {
        skip_space();
        while (pos_ < line_.size() && !is_space_char(line_[pos_])) ++pos_;
    }

    // True if the upcoming character (after whitespace) starts a token of
    // the requested shape.
    bool peek_identifier() { return peek_class(1); }
    bool peek_symbol() { return peek_class(2); }
    bool peek_literal() { return peek_class(3) || peek_digit(); }

    std::optional<Token> next() {
        std::size_t before = pos_;
        skip_space();
        bool gap = pos_ > before;
        if (at_end()) return std::nullopt;

        Token token;
        char c = line_[pos_];
        if (c == '\'' || c == '"') {
            token = scan_string();
        } else if (is_word_char(c)) {
            token = scan_identifier_like();
        } else {
            token = scan_symbol();
        }
        token.gap_before = gap;
        return token;
    }

private:
    void skip_space() {
        while (pos_ < line_.size() && is_space_char(line_[pos_])) ++pos_;
    }

    bool peek_digit() {
        std::size_t q = pos_;
        while (q < line_.size() && is_space_char(line_[q])) ++q;
        return q < line_.size() && is_ascii_digit(line_[q]);
    }

    bool peek_class(int which) {
        std::size_t q = pos_;
        while (q < line_.size() && is_space_char(line_[q])) ++q;
        if (q >= line_.size()) return false;
        char c = line_[q];
        bool quote = (c == '\'' || c == '"');
        switch (which) {
            case 1: return is_word_char(c);
            case 2: return !is_word_char(c) && !quote;
            case 3: return quote;
        }
        return false;
    }

    // Identifier-shaped token: one or more identifier runs, possibly joined
    // by dots carrying stray spaces ("Cookie. name") or by bare whitespace
    // left behind when the recognizer split a single name ("Conflict
    // Error"). Reserved words never join a span: adjacent bare words in
    // valid code are always separated by a keyword or a symbol, so an
    // unseparated pair can only come from a spurious split.
    Token scan_identifier_like() {
        std::size_t start = pos_;
        std::size_t end = scan_run(line_, pos_);
        bool joined = false;
        while (true) {
            std::size_t q = end;
            while (q < line_.size() && is_space_char(line_[q])) ++q;
            if (q >= line_.size()) break;
            if (line_[q] == '.') {
                std::size_t r = q + 1;
                while (r < line_.size() && is_space_char(line_[r])) ++r;
                if (r < line_.size() && is_word_char(line_[r])) {
                    joined = true;
                    end = scan_run(line_, r);
                    continue;
                }
                break;
            }
            if (q > end && is_word_char(line_[q])) {
                std::size_t r = scan_run(line_, q);
                if (!keywords_.contains(line_.substr(q, r - q))) {
                    joined = true;
                    end = r;
                    continue;
                }
            }
            break;
        }
        pos_ = end;

        Token token;
        token.text = std::string(line_.substr(start, end - start));
        std::string stripped;
        stripped.reserve(token.text.size());
        for (char c : token.text) {
            if (!is_space_char(c)) stripped.push_back(c);
        }
        bool numeric = !stripped.empty();
        bool has_digit = false;
        for (char c : stripped) {
            if (is_ascii_digit(c)) {
                has_digit = true;
            } else if (c != '.') {
                numeric = false;
                break;
            }
        }
        if (numeric && has_digit) {
            token.kind = TokenKind::number_literal;
        } else if (!joined && keywords_.contains(stripped)) {
            token.kind = TokenKind::keyword;
        } else {
            token.kind = TokenKind::identifier;
        }
        return token;
    }

    // Quoted span, verbatim, backslash escapes honored. An unterminated
    // quote swallows the rest of the line; parsing never fails.
    Token scan_string() {
        std::size_t start = pos_;
        char quote = line_[pos_++];
        while (pos_ < line_.size() && line_[pos_] != quote) {
            pos_ += (line_[pos_] == '\\' && pos_ + 1 < line_.size()) ? 2 : 1;
        }
        if (pos_ < line_.size()) ++pos_;
        return {std::string(line_.substr(start, pos_ - start)), TokenKind::string_literal, true};
    }

    // Maximal contiguous run of symbol characters.
    Token scan_symbol() {
        std::size_t start = pos_;
        while (pos_ < line_.size()) {
            char c = line_[pos_];
            if (!is_symbol_char(c) || c == '_' || c == '\'' || c == '"') break;
            ++pos_;
        }
        return {std::string(line_.substr(start, pos_ - start)), TokenKind::symbol, true};
    }

    std::string_view line_;
    const KeywordSet& keywords_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<Token> parse_statement(std::string_view line, const StatementClass& cls,
                                   const ClassRegistry& registry) {
    std::string_view trimmed = trim_view(line);
    if (trimmed.empty()) throw EmptyInputError("cannot parse an empty statement");

    const Production& prod = registry.production(cls.name);
    Scanner scanner(trimmed, registry.keywords());
    std::vector<Token> tokens;

    for (const auto& elem : prod.pattern) {
        if (scanner.at_end()) break;
        switch (elem.kind) {
            case PatternKind::keyword_literal:
                scanner.skip_raw_word();
                tokens.push_back({elem.text, TokenKind::keyword, !tokens.empty()});
                break;
            case PatternKind::identifier:
            case PatternKind::dotted_identifier:
                if (scanner.peek_identifier()) {
                    if (auto t = scanner.next()) tokens.push_back(std::move(*t));
                }
                break;
            case PatternKind::symbol:
                if (scanner.peek_symbol()) {
                    if (auto t = scanner.next()) tokens.push_back(std::move(*t));
                }
                break;
            case PatternKind::literal:
                if (scanner.peek_literal()) {
                    if (auto t = scanner.next()) tokens.push_back(std::move(*t));
                }
                break;
            case PatternKind::free_tail:
                while (auto t = scanner.next()) tokens.push_back(std::move(*t));
                break;
        }
    }
    // Leftover input after a pattern without a free tail: tokenize it anyway
    // so that parsing stays total.
    while (auto t = scanner.next()) tokens.push_back(std::move(*t));
    return tokens;
}

}  // namespace codehand::grammar
