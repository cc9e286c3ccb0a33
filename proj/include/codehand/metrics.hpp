#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace codehand::metrics {

enum class EditOpKind { match, deletion, insertion, substitution };

struct EditOp {
    EditOpKind kind;
    std::string ref_unit;  // empty for insertions
    std::string hyp_unit;  // empty for deletions
    std::size_t ref_pos;   // unit index in the reference (gap index for insertions)
};

struct EditAlignment {
    std::size_t deletions = 0;
    std::size_t insertions = 0;
    std::size_t substitutions = 0;
    std::size_t ref_length = 0;
    std::vector<EditOp> ops;

    std::size_t total_edits() const { return deletions + insertions + substitutions; }
};

// Minimum-cost alignment between two unit sequences (unit cost 1 for every
// edit). Ties during backtrace prefer substitution over deletion over
// insertion, so the op list is deterministic. Applying `ops` to `ref`
// reproduces `hyp`.
EditAlignment align(std::span<const std::string> ref, std::span<const std::string> hyp);

// Maximal whitespace-free runs.
std::vector<std::string> split_words(std::string_view text);

// One unit per byte, spaces included.
std::vector<std::string> split_chars(std::string_view text);

// Word error rate, percent: (D + I + S) / L * 100 over whitespace-delimited
// words. Throws UndefinedRateError when the reference has no words.
double wer(std::string_view ref, std::string_view hyp);

// Character error rate, percent, over bytes including spaces. Throws
// UndefinedRateError when the reference is empty.
double cer(std::string_view ref, std::string_view hyp);

struct ErrorBreakdown {
    std::size_t word_errors = 0;
    std::size_t symbol_errors = 0;
    std::size_t space_errors = 0;

    ErrorBreakdown& operator+=(const ErrorBreakdown& other);
    friend bool operator==(const ErrorBreakdown&, const ErrorBreakdown&) = default;
};

// Splits the character-level edits between ref and hyp into the three error
// families: inserted or deleted whitespace is a space error; any other edit
// touching a non-alphanumeric character is a symbol error; the remaining
// edits count one word error per affected reference word.
ErrorBreakdown classify_errors(std::string_view ref, std::string_view hyp);

struct SampleResult {
    std::string sample_id;
    std::string writer_id;
    double wer = 0.0;
    double cer = 0.0;
    ErrorBreakdown errors;
};

struct GroupMean {
    std::string sample_id;
    std::size_t count = 0;
    double mean_wer = 0.0;
    double mean_cer = 0.0;
    double mean_word_errors = 0.0;
    double mean_symbol_errors = 0.0;
    double mean_space_errors = 0.0;
};

// Per-group means, grouped by sample_id in first-appearance order. Throws
// UndefinedRateError on empty input.
std::vector<GroupMean> aggregate_report(std::span<const SampleResult> results);

// Report writers. Text: one CSV row per sample plus group_mean footer rows.
std::string format_report_text(std::span<const SampleResult> results);
std::string format_report_json(std::span<const SampleResult> results);

}  // namespace codehand::metrics
