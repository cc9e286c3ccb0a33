#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace codehand::noise {

struct NoiseConfig {
    double p_space = 0.15;   // per eligible boundary inside an identifier
    double p_symbol = 0.10;  // per occurrence of a confusable symbol
    double p_word = 0.08;    // per identifier, one letter-pair swap
    std::uint64_t seed = 0;

    // Throws ConfigError unless every probability lies in [0, 1].
    void validate() const;
};

// Recognition confusions. `symbol_map` entries are directional
// (source character -> replacement text); `letter_pairs` are visually
// confusable letter groups applied in both directions.
struct ConfusionTable {
    std::vector<std::pair<std::string, std::string>> symbol_map;
    std::vector<std::pair<std::string, std::string>> letter_pairs;

    const std::string* find_symbol(char source) const;

    // Throws ConfigError when an entry maps a string to itself.
    void validate() const;
};

// Built-in table: '_'->'-', ':'->';', '('->'l' plus the letter pairs
// m/u, n/u, l/I, rn/m and a/o.
ConfusionTable default_confusion_table();

// One mapping per line: source<TAB>target. Lines whose source starts with a
// letter are letter pairs; the rest go to the symbol map. Blank lines and
// '#' comments are skipped.
ConfusionTable parse_confusion_table(std::string_view text);
ConfusionTable load_confusion_table(const std::string& path);
std::string format_confusion_table(const ConfusionTable& table);

enum class ErrorType { word, symbol, space };

const char* to_string(ErrorType type);
std::optional<ErrorType> error_type_from(std::string_view name);

struct InjectionRecord {
    std::size_t line_index = 0;  // zero-based
    std::size_t position = 0;    // byte offset in the corrupted line
    ErrorType type = ErrorType::word;
    std::string original;   // empty for pure insertions
    std::string corrupted;
};

struct InjectionLog {
    std::vector<InjectionRecord> records;

    std::size_t count(ErrorType type) const;

    // line_index<TAB>error_type<TAB>original<TAB>corrupted
    std::string to_tsv() const;
};

struct InjectionResult {
    std::vector<std::string> lines;
    InjectionLog log;
};

// Corrupts the sample with the three error families of the noisy channel:
// spaces inserted at camelCase humps, underscores and dots inside dotted
// names; confusion-table substitutions on symbols; and one letter-pair swap
// per corrupted identifier. Identical inputs, configuration and seed yield
// identical output on every platform. Draws come from one std::mt19937_64
// seeded with `config.seed` and are consumed line by line, left to right;
// an identifier hit by a word swap receives no further mutation.
InjectionResult inject_errors(std::span<const std::string> clean, const NoiseConfig& config,
                              const ConfusionTable& table);

// Applies the log's mutations to the clean input; reproduces the noisy
// lines exactly.
std::vector<std::string> replay_log(std::span<const std::string> clean,
                                    const InjectionLog& log);

}  // namespace codehand::noise
