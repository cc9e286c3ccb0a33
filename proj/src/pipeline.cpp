#include "codehand/pipeline.hpp"

#include <algorithm>
#include <sstream>

#include "codehand/chars.hpp"
#include "codehand/errors.hpp"

namespace codehand::pipeline {

bool AdaptiveLexicon::add(std::string_view entry) {
    if (entry.empty()) return false;
    if (keywords_ && keywords_->contains(entry)) return false;
    if (index_.find(entry) != index_.end()) return false;
    entries_.emplace_back(entry);
    index_.emplace(entry);
    return true;
}

bool AdaptiveLexicon::contains(std::string_view entry) const {
    return index_.find(entry) != index_.end();
}

std::optional<AdaptiveLexicon::Match> AdaptiveLexicon::best_match(
    std::string_view text, double threshold, bool case_insensitive) const {
    const std::string* best = nullptr;
    double best_score = 0.0;
    for (const auto& entry : entries_) {
        double score = similarity(text, entry, case_insensitive);
        if (score > best_score) {
            best_score = score;
            best = &entry;
        }
    }
    if (best && best_score >= threshold) return Match{*best, best_score};
    return std::nullopt;
}

void CorrectionConfig::validate() const {
    if (!(similarity_threshold > 0.0 && similarity_threshold <= 1.0)) {
        throw ConfigError("similarity_threshold must lie in (0, 1]");
    }
}

namespace {

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError(key + " must be true or false");
}

}  // namespace

CorrectionConfig CorrectionConfig::from_kv(const std::map<std::string, std::string>& kv) {
    CorrectionConfig config;
    for (const auto& [key, value] : kv) {
        if (key == "similarity_threshold") {
            try {
                config.similarity_threshold = std::stod(value);
            } catch (const std::exception&) {
                throw ConfigError("similarity_threshold: not a number: " + value);
            }
        } else if (key == "fuzzy_keyword_repair") {
            config.fuzzy_keyword_repair = parse_bool(key, value);
        } else if (key == "case_insensitive_match") {
            config.case_insensitive_match = parse_bool(key, value);
        } else {
            throw ConfigError("unknown correction option: " + key);
        }
    }
    config.validate();
    return config;
}

std::string CorrectionConfig::to_kv() const {
    std::ostringstream out;
    out << "similarity_threshold=" << similarity_threshold << "\n"
        << "fuzzy_keyword_repair=" << (fuzzy_keyword_repair ? "true" : "false") << "\n"
        << "case_insensitive_match=" << (case_insensitive_match ? "true" : "false") << "\n";
    return out.str();
}

Token normalize_token(Token token) {
    std::string cleaned;
    cleaned.reserve(token.text.size());
    for (char c : token.text) {
        if (!is_space_char(c)) cleaned.push_back(c);
    }
    token.text = std::move(cleaned);
    return token;
}

namespace {

bool number_shaped(std::string_view text) {
    bool has_digit = false;
    for (char c : text) {
        if (is_ascii_digit(c)) {
            has_digit = true;
        } else if (c != '.') {
            return false;
        }
    }
    return has_digit;
}

std::string resolve_segment(std::string_view segment, AdaptiveLexicon& lexicon,
                            const CorrectionConfig& config,
                            const grammar::KeywordSet* keywords) {
    if (segment.empty() || number_shaped(segment)) return std::string(segment);
    if (keywords && keywords->contains(segment)) return std::string(segment);
    // An exact lexicon member is already accepted; never rewrite it to a
    // merely similar (possibly corrupt) earlier entry.
    if (lexicon.contains(segment)) return std::string(segment);
    if (auto match = lexicon.best_match(segment, config.similarity_threshold,
                                        config.case_insensitive_match)) {
        return match->entry;
    }
    lexicon.add(segment);
    return std::string(segment);
}

}  // namespace

Token resolve_token(Token token, AdaptiveLexicon& lexicon, const CorrectionConfig& config) {
    if (token.kind != grammar::TokenKind::identifier) return token;

    const grammar::KeywordSet* keywords = lexicon.keywords();
    std::string resolved;
    resolved.reserve(token.text.size());
    std::string_view text = token.text;
    std::size_t start = 0;
    while (true) {
        std::size_t dot = text.find('.', start);
        std::string_view segment =
            text.substr(start, dot == std::string_view::npos ? dot : dot - start);
        resolved += resolve_segment(segment, lexicon, config, keywords);
        if (dot == std::string_view::npos) break;
        resolved.push_back('.');
        start = dot + 1;
    }
    token.text = std::move(resolved);
    return token;
}

std::string concatenate(std::span<const Token> tokens, const grammar::StatementClass& cls) {
    if (tokens.empty()) throw EmptyInputError("cannot concatenate an empty token sequence");

    std::string out = tokens.front().text;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        if (tokens[i].gap_before) out.push_back(' ');
        out += tokens[i].text;
    }

    if (cls.requires_trailing_colon) {
        const Token& last = tokens.back();
        if (last.kind == grammar::TokenKind::symbol && !out.empty()) {
            char tail = out.back();
            if (tail == ';' || tail == '.' || tail == ',') out.back() = ':';
        }
        if (out.empty() || out.back() != ':') out.push_back(':');
        // No space before the statement-final colon.
        std::size_t colon = out.size() - 1;
        std::size_t cut = colon;
        while (cut > 0 && out[cut - 1] == ' ') --cut;
        if (cut < colon) out.erase(cut, colon - cut);
    }
    return out;
}

StatementDiagnostics detect_unbalanced(std::span<const Token> tokens) {
    StatementDiagnostics diag;
    std::vector<std::pair<char, std::size_t>> stack;
    auto closes = [](char open, char close) {
        return (open == '(' && close == ')') || (open == '[' && close == ']') ||
               (open == '{' && close == '}');
    };

    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (tokens[i].kind != grammar::TokenKind::symbol) continue;
        for (char c : tokens[i].text) {
            if (c == '(' || c == '[' || c == '{') {
                stack.emplace_back(c, i);
            } else if (c == ')' || c == ']' || c == '}') {
                if (!stack.empty() && closes(stack.back().first, c)) {
                    stack.pop_back();
                } else {
                    ++diag.unbalanced_brackets;
                    diag.flagged_tokens.push_back(i);
                }
            }
        }
    }
    for (const auto& [open, index] : stack) {
        ++diag.unbalanced_brackets;
        diag.flagged_tokens.push_back(index);
    }
    std::sort(diag.flagged_tokens.begin(), diag.flagged_tokens.end());
    diag.flagged_tokens.erase(
        std::unique(diag.flagged_tokens.begin(), diag.flagged_tokens.end()),
        diag.flagged_tokens.end());
    return diag;
}

CorrectedStatement correct_statement(std::string_view line, AdaptiveLexicon& lexicon,
                                     const CorrectionConfig& config,
                                     const grammar::ClassRegistry& registry) {
    config.validate();
    grammar::ClassifyOptions classify_opts{config.similarity_threshold,
                                           config.fuzzy_keyword_repair,
                                           config.case_insensitive_match};
    const grammar::StatementClass& cls = grammar::classify_statement(line, registry, classify_opts);

    std::vector<Token> tokens = grammar::parse_statement(line, cls, registry);
    for (Token& token : tokens) token = normalize_token(std::move(token));
    for (Token& token : tokens) {
        if (token.kind == grammar::TokenKind::identifier) {
            token = resolve_token(std::move(token), lexicon, config);
        }
    }

    CorrectedStatement result;
    result.diagnostics = detect_unbalanced(tokens);
    result.text = concatenate(tokens, cls);
    return result;
}

SampleCorrection correct_sample(std::span<const std::string> lines,
                                const CorrectionConfig& config,
                                const grammar::ClassRegistry& registry,
                                AdaptiveLexicon* shared) {
    SampleCorrection result;
    AdaptiveLexicon local(&registry.keywords());
    AdaptiveLexicon& lexicon = shared ? *shared : local;

    result.lines.reserve(lines.size());
    result.diagnostics.reserve(lines.size());
    for (const std::string& line : lines) {
        if (trim_view(line).empty()) {
            result.lines.push_back(line);
            result.diagnostics.emplace_back();
            continue;
        }
        CorrectedStatement corrected = correct_statement(line, lexicon, config, registry);
        result.lines.push_back(std::move(corrected.text));
        result.diagnostics.push_back(std::move(corrected.diagnostics));
    }
    result.lexicon = lexicon;
    return result;
}

}  // namespace codehand::pipeline
