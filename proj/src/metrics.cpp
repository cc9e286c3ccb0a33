#include "codehand/metrics.hpp"

#include <algorithm>
#include <iomanip>
#include <set>
#include <sstream>

#include <json.hpp>

#include "codehand/chars.hpp"
#include "codehand/errors.hpp"

namespace codehand::metrics {

EditAlignment align(std::span<const std::string> ref, std::span<const std::string> hyp) {
    const std::size_t n = ref.size();
    const std::size_t m = hyp.size();

    // dp[i][j]: edits turning ref[0..i) into hyp[0..j).
    std::vector<std::vector<std::size_t>> dp(n + 1, std::vector<std::size_t>(m + 1));
    for (std::size_t i = 0; i <= n; ++i) dp[i][0] = i;
    for (std::size_t j = 0; j <= m; ++j) dp[0][j] = j;
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= m; ++j) {
            std::size_t sub = dp[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
            dp[i][j] = std::min({sub, dp[i - 1][j] + 1, dp[i][j - 1] + 1});
        }
    }

    EditAlignment result;
    result.ref_length = n;

    // Backtrace; on equal cost a substitution wins over a deletion, which
    // wins over an insertion.
    std::size_t i = n;
    std::size_t j = m;
    std::vector<EditOp> reversed;
    while (i > 0 || j > 0) {
        if (i > 0 && j > 0 && ref[i - 1] == hyp[j - 1] && dp[i][j] == dp[i - 1][j - 1]) {
            reversed.push_back({EditOpKind::match, ref[i - 1], hyp[j - 1], i - 1});
            --i;
            --j;
        } else if (i > 0 && j > 0 && dp[i][j] == dp[i - 1][j - 1] + 1) {
            reversed.push_back({EditOpKind::substitution, ref[i - 1], hyp[j - 1], i - 1});
            ++result.substitutions;
            --i;
            --j;
        } else if (i > 0 && dp[i][j] == dp[i - 1][j] + 1) {
            reversed.push_back({EditOpKind::deletion, ref[i - 1], "", i - 1});
            ++result.deletions;
            --i;
        } else {
            reversed.push_back({EditOpKind::insertion, "", hyp[j - 1], i});
            ++result.insertions;
            --j;
        }
    }
    result.ops.assign(reversed.rbegin(), reversed.rend());
    return result;
}

std::vector<std::string> split_words(std::string_view text) {
    std::vector<std::string> words;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_space_char(text[i])) ++i;
        std::size_t start = i;
        while (i < text.size() && !is_space_char(text[i])) ++i;
        if (i > start) words.emplace_back(text.substr(start, i - start));
    }
    return words;
}

std::vector<std::string> split_chars(std::string_view text) {
    std::vector<std::string> chars;
    chars.reserve(text.size());
    for (char c : text) chars.emplace_back(1, c);
    return chars;
}

double wer(std::string_view ref, std::string_view hyp) {
    std::vector<std::string> ref_words = split_words(ref);
    if (ref_words.empty()) {
        throw UndefinedRateError("word error rate undefined for an empty reference");
    }
    std::vector<std::string> hyp_words = split_words(hyp);
    EditAlignment alignment = align(ref_words, hyp_words);
    return 100.0 * static_cast<double>(alignment.total_edits()) /
           static_cast<double>(ref_words.size());
}

double cer(std::string_view ref, std::string_view hyp) {
    if (ref.empty()) {
        throw UndefinedRateError("character error rate undefined for an empty reference");
    }
    EditAlignment alignment = align(split_chars(ref), split_chars(hyp));
    return 100.0 * static_cast<double>(alignment.total_edits()) /
           static_cast<double>(ref.size());
}

ErrorBreakdown& ErrorBreakdown::operator+=(const ErrorBreakdown& other) {
    word_errors += other.word_errors;
    symbol_errors += other.symbol_errors;
    space_errors += other.space_errors;
    return *this;
}

namespace {

bool space_unit(const std::string& unit) {
    return unit.size() == 1 && is_space_char(unit[0]);
}

bool symbol_unit(const std::string& unit) {
    return unit.size() == 1 && is_symbol_char(unit[0]);
}

}  // namespace

ErrorBreakdown classify_errors(std::string_view ref, std::string_view hyp) {
    EditAlignment alignment = align(split_chars(ref), split_chars(hyp));

    // Word index for every reference position; spaces carry no index.
    constexpr std::size_t kNoWord = static_cast<std::size_t>(-1);
    std::vector<std::size_t> word_at(ref.size() + 1, kNoWord);
    std::size_t word_count = 0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        if (is_space_char(ref[i])) continue;
        if (i == 0 || is_space_char(ref[i - 1])) ++word_count;
        word_at[i] = word_count - 1;
    }
    // Edits landing between words attach to the word that follows.
    std::vector<std::size_t> word_from(ref.size() + 1, kNoWord);
    std::size_t upcoming = kNoWord;
    for (std::size_t i = ref.size() + 1; i-- > 0;) {
        if (i < ref.size() && word_at[i] != kNoWord) upcoming = word_at[i];
        word_from[i] = upcoming;
    }

    ErrorBreakdown breakdown;
    std::set<std::size_t> damaged_words;
    bool stray_word_edit = false;
    for (const EditOp& op : alignment.ops) {
        if (op.kind == EditOpKind::match) continue;
        if ((op.kind == EditOpKind::deletion && space_unit(op.ref_unit)) ||
            (op.kind == EditOpKind::insertion && space_unit(op.hyp_unit))) {
            ++breakdown.space_errors;
            continue;
        }
        if ((!op.ref_unit.empty() && symbol_unit(op.ref_unit)) ||
            (!op.hyp_unit.empty() && symbol_unit(op.hyp_unit))) {
            ++breakdown.symbol_errors;
            continue;
        }
        std::size_t word = word_at[std::min(op.ref_pos, ref.size())];
        if (word == kNoWord) word = word_from[std::min(op.ref_pos, ref.size())];
        if (word == kNoWord && word_count > 0) word = word_count - 1;
        if (word == kNoWord) {
            stray_word_edit = true;
        } else {
            damaged_words.insert(word);
        }
    }
    breakdown.word_errors = damaged_words.size() + (stray_word_edit ? 1 : 0);
    return breakdown;
}

std::vector<GroupMean> aggregate_report(std::span<const SampleResult> results) {
    if (results.empty()) {
        throw UndefinedRateError("cannot aggregate an empty result set");
    }
    std::vector<GroupMean> groups;
    for (const SampleResult& result : results) {
        GroupMean* group = nullptr;
        for (GroupMean& candidate : groups) {
            if (candidate.sample_id == result.sample_id) {
                group = &candidate;
                break;
            }
        }
        if (!group) {
            groups.push_back({result.sample_id});
            group = &groups.back();
        }
        ++group->count;
        group->mean_wer += result.wer;
        group->mean_cer += result.cer;
        group->mean_word_errors += static_cast<double>(result.errors.word_errors);
        group->mean_symbol_errors += static_cast<double>(result.errors.symbol_errors);
        group->mean_space_errors += static_cast<double>(result.errors.space_errors);
    }
    for (GroupMean& group : groups) {
        double n = static_cast<double>(group.count);
        group.mean_wer /= n;
        group.mean_cer /= n;
        group.mean_word_errors /= n;
        group.mean_symbol_errors /= n;
        group.mean_space_errors /= n;
    }
    return groups;
}

std::string format_report_text(std::span<const SampleResult> results) {
    std::vector<GroupMean> groups = aggregate_report(results);
    std::ostringstream out;
    out << std::fixed << std::setprecision(2);
    out << "sample_id,writer_id,wer,cer,word_errors,symbol_errors,space_errors\n";
    for (const SampleResult& r : results) {
        out << r.sample_id << ',' << r.writer_id << ',' << r.wer << ',' << r.cer << ','
            << r.errors.word_errors << ',' << r.errors.symbol_errors << ','
            << r.errors.space_errors << '\n';
    }
    for (const GroupMean& g : groups) {
        out << "group_mean," << g.sample_id << ',' << g.mean_wer << ',' << g.mean_cer << ','
            << g.mean_word_errors << ',' << g.mean_symbol_errors << ','
            << g.mean_space_errors << '\n';
    }
    return out.str();
}

std::string format_report_json(std::span<const SampleResult> results) {
    std::vector<GroupMean> groups = aggregate_report(results);
    nlohmann::json doc;
    doc["samples"] = nlohmann::json::array();
    for (const SampleResult& r : results) {
        doc["samples"].push_back({{"sample_id", r.sample_id},
                                  {"writer_id", r.writer_id},
                                  {"wer", r.wer},
                                  {"cer", r.cer},
                                  {"word_errors", r.errors.word_errors},
                                  {"symbol_errors", r.errors.symbol_errors},
                                  {"space_errors", r.errors.space_errors}});
    }
    doc["group_means"] = nlohmann::json::array();
    for (const GroupMean& g : groups) {
        doc["group_means"].push_back({{"sample_id", g.sample_id},
                                      {"count", g.count},
                                      {"wer", g.mean_wer},
                                      {"cer", g.mean_cer},
                                      {"word_errors", g.mean_word_errors},
                                      {"symbol_errors", g.mean_symbol_errors},
                                      {"space_errors", g.mean_space_errors}});
    }
    return doc.dump(2) + "\n";
}

}  // namespace codehand::metrics
