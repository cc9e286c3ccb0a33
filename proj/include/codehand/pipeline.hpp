#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "codehand/distance.hpp"
#include "codehand/grammar.hpp"

namespace codehand::pipeline {

using grammar::Token;

// Insertion-ordered store of the identifiers seen so far. Entries are
// deduplicated under exact match and reserved words are refused, so the
// lexicon only ever holds correctable names. Single writer per sample.
class AdaptiveLexicon {
public:
    AdaptiveLexicon() = default;
    explicit AdaptiveLexicon(const grammar::KeywordSet* keywords) : keywords_(keywords) {}

    // Returns false when the entry is already present or is a reserved word.
    bool add(std::string_view entry);

    bool contains(std::string_view entry) const;
    std::size_t size() const { return entries_.size(); }
    const std::vector<std::string>& entries() const { return entries_; }
    const grammar::KeywordSet* keywords() const { return keywords_; }

    struct Match {
        std::string entry;
        double score = 0.0;
    };

    // Entry with the highest similarity at or above `threshold`. Ties go to
    // the earliest inserted entry.
    std::optional<Match> best_match(std::string_view text, double threshold,
                                    bool case_insensitive) const;

private:
    std::vector<std::string> entries_;
    std::set<std::string, std::less<>> index_;
    const grammar::KeywordSet* keywords_ = nullptr;
};

struct CorrectionConfig {
    double similarity_threshold = 0.7;
    bool fuzzy_keyword_repair = true;
    bool case_insensitive_match = true;

    // Throws ConfigError unless similarity_threshold lies in (0, 1].
    void validate() const;

    // key=value round trip ("similarity_threshold=0.7" one pair per line).
    static CorrectionConfig from_kv(const std::map<std::string, std::string>& kv);
    std::string to_kv() const;
};

struct StatementDiagnostics {
    std::size_t unbalanced_brackets = 0;
    std::vector<std::size_t> flagged_tokens;  // token indices left uncorrected

    friend bool operator==(const StatementDiagnostics&, const StatementDiagnostics&) = default;
};

// Strips every whitespace character from the token text. Kind is unchanged.
Token normalize_token(Token token);

// Corrects one identifier token against the lexicon. Dotted identifiers are
// resolved segment-wise on their dot-separated parts; a matching entry
// replaces the segment (lexicon casing wins), otherwise the segment is
// accepted as-is and appended to the lexicon. Number-shaped segments and
// reserved words pass through untouched. Non-identifier tokens are returned
// unchanged.
Token resolve_token(Token token, AdaptiveLexicon& lexicon, const CorrectionConfig& config);

// Joins token texts back into a statement, inserting a single space exactly
// where the source had whitespace (`gap_before`). For classes that require
// a trailing colon, a final symbol ending in ';', '.' or ',' has that
// character replaced by ':'; a missing colon is appended; and no space is
// left before the statement-final ':'.
std::string concatenate(std::span<const Token> tokens, const grammar::StatementClass& cls);

// Counts unmatched round, square and curly brackets across symbol tokens
// and flags the token positions holding them. Never mutates.
StatementDiagnostics detect_unbalanced(std::span<const Token> tokens);

struct CorrectedStatement {
    std::string text;
    StatementDiagnostics diagnostics;
};

// classify -> parse -> normalize -> resolve identifiers -> concatenate.
CorrectedStatement correct_statement(std::string_view line, AdaptiveLexicon& lexicon,
                                     const CorrectionConfig& config,
                                     const grammar::ClassRegistry& registry);

struct SampleCorrection {
    std::vector<std::string> lines;
    std::vector<StatementDiagnostics> diagnostics;
    AdaptiveLexicon lexicon;  // state after the last statement
};

// Corrects the statements of one sample in order. The lexicon starts empty
// (fresh per sample) unless `shared` points at one to reuse across samples;
// blank lines are preserved as-is.
SampleCorrection correct_sample(std::span<const std::string> lines,
                                const CorrectionConfig& config,
                                const grammar::ClassRegistry& registry,
                                AdaptiveLexicon* shared = nullptr);

}  // namespace codehand::pipeline
