#include "codehand/noise.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <tuple>

#include "codehand/chars.hpp"
#include "codehand/errors.hpp"
#include "codehand/rng.hpp"

namespace codehand::noise {

void NoiseConfig::validate() const {
    auto probability = [](double p, const char* name) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ConfigError(std::string(name) + " must lie in [0, 1]");
        }
    };
    probability(p_space, "p_space");
    probability(p_symbol, "p_symbol");
    probability(p_word, "p_word");
}

const std::string* ConfusionTable::find_symbol(char source) const {
    for (const auto& [from, to] : symbol_map) {
        if (from.size() == 1 && from[0] == source) return &to;
    }
    return nullptr;
}

void ConfusionTable::validate() const {
    for (const auto& [from, to] : symbol_map) {
        if (from.empty()) throw ConfigError("confusion table: empty source");
        if (from == to) throw ConfigError("confusion table: '" + from + "' maps to itself");
    }
    for (const auto& [a, b] : letter_pairs) {
        if (a.empty() || b.empty()) throw ConfigError("confusion table: empty source");
        if (a == b) throw ConfigError("confusion table: '" + a + "' maps to itself");
    }
}

ConfusionTable default_confusion_table() {
    ConfusionTable table;
    table.symbol_map = {{"_", "-"}, {":", ";"}, {"(", "l"}};
    table.letter_pairs = {{"m", "u"}, {"n", "u"}, {"l", "I"}, {"rn", "m"}, {"a", "o"}};
    return table;
}

ConfusionTable parse_confusion_table(std::string_view text) {
    ConfusionTable table;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (trim_view(line).empty() || trim_view(line).front() == '#') continue;

        std::size_t tab = line.find('\t');
        if (tab == std::string_view::npos) {
            throw ParseError("confusion table line " + std::to_string(line_no) +
                             ": expected source<TAB>target");
        }
        std::string from(line.substr(0, tab));
        std::string to(line.substr(tab + 1));
        if (from.empty()) {
            throw ParseError("confusion table line " + std::to_string(line_no) +
                             ": empty source");
        }
        if (is_ascii_alpha(from[0])) {
            table.letter_pairs.emplace_back(std::move(from), std::move(to));
        } else {
            table.symbol_map.emplace_back(std::move(from), std::move(to));
        }
    }
    table.validate();
    return table;
}

ConfusionTable load_confusion_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read confusion table: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_confusion_table(buf.str());
}

std::string format_confusion_table(const ConfusionTable& table) {
    std::ostringstream out;
    for (const auto& [from, to] : table.symbol_map) out << from << '\t' << to << '\n';
    for (const auto& [a, b] : table.letter_pairs) out << a << '\t' << b << '\n';
    return out.str();
}

const char* to_string(ErrorType type) {
    switch (type) {
        case ErrorType::word: return "word";
        case ErrorType::symbol: return "symbol";
        case ErrorType::space: return "space";
    }
    return "unknown";
}

std::optional<ErrorType> error_type_from(std::string_view name) {
    if (name == "word") return ErrorType::word;
    if (name == "symbol") return ErrorType::symbol;
    if (name == "space") return ErrorType::space;
    return std::nullopt;
}

std::size_t InjectionLog::count(ErrorType type) const {
    std::size_t n = 0;
    for (const InjectionRecord& record : records) {
        if (record.type == type) ++n;
    }
    return n;
}

std::string InjectionLog::to_tsv() const {
    std::ostringstream out;
    for (const InjectionRecord& record : records) {
        out << record.line_index << '\t' << to_string(record.type) << '\t' << record.original
            << '\t' << record.corrupted << '\n';
    }
    return out.str();
}

namespace {

bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }

struct Injector {
    const NoiseConfig& config;
    const ConfusionTable& table;
    std::mt19937_64 rng;
    InjectionLog log;

    explicit Injector(const NoiseConfig& cfg, const ConfusionTable& tbl)
        : config(cfg), table(tbl), rng(cfg.seed) {}

    bool roll(double p) { return unit_uniform(rng) < p; }

    // One identifier: either a single letter-pair swap, or independent
    // space/underscore mutations at each eligible position.
    void corrupt_run(std::string_view run, std::size_t line_index, std::string& out) {
        std::vector<std::tuple<std::size_t, std::string_view, std::string_view>> swaps;
        for (const auto& [a, b] : table.letter_pairs) {
            for (int dir = 0; dir < 2; ++dir) {
                std::string_view from = dir == 0 ? a : b;
                std::string_view to = dir == 0 ? b : a;
                for (std::size_t at = run.find(from); at != std::string_view::npos;
                     at = run.find(from, at + 1)) {
                    swaps.emplace_back(at, from, to);
                }
            }
        }
        if (!swaps.empty() && roll(config.p_word)) {
            auto [at, from, to] = swaps[bounded_uniform(rng, swaps.size())];
            std::string corrupted(run);
            corrupted.replace(at, from.size(), to);
            log.records.push_back(
                {line_index, out.size(), ErrorType::word, std::string(run), corrupted});
            out += corrupted;
            return;
        }

        for (std::size_t k = 0; k < run.size(); ++k) {
            char c = run[k];
            if (c == '_') {
                if (const std::string* to = table.find_symbol('_'); to && roll(config.p_symbol)) {
                    log.records.push_back({line_index, out.size(), ErrorType::symbol, "_", *to});
                    out += *to;
                    continue;
                }
                out.push_back('_');
                if (k + 1 < run.size() && roll(config.p_space)) {
                    log.records.push_back({line_index, out.size(), ErrorType::space, "", " "});
                    out.push_back(' ');
                }
                continue;
            }
            if (k > 0 && is_lower(run[k - 1]) && is_upper(c) && roll(config.p_space)) {
                log.records.push_back({line_index, out.size(), ErrorType::space, "", " "});
                out.push_back(' ');
            }
            out.push_back(c);
        }
    }

    std::string corrupt_line(const std::string& line, std::size_t line_index) {
        std::string out;
        out.reserve(line.size() + 8);
        std::size_t i = 0;
        while (i < line.size()) {
            if (is_word_char(line[i])) {
                std::size_t end = i;
                while (end < line.size() && is_word_char(line[end])) ++end;
                corrupt_run(std::string_view(line).substr(i, end - i), line_index, out);
                i = end;
                continue;
            }
            char c = line[i];
            bool dotted_name = c == '.' && i > 0 && is_word_char(line[i - 1]) &&
                               i + 1 < line.size() && is_word_char(line[i + 1]);
            if (const std::string* to = table.find_symbol(c); to && roll(config.p_symbol)) {
                log.records.push_back(
                    {line_index, out.size(), ErrorType::symbol, std::string(1, c), *to});
                out += *to;
            } else {
                out.push_back(c);
                if (dotted_name && roll(config.p_space)) {
                    log.records.push_back({line_index, out.size(), ErrorType::space, "", " "});
                    out.push_back(' ');
                }
            }
            ++i;
        }
        return out;
    }
};

}  // namespace

InjectionResult inject_errors(std::span<const std::string> clean, const NoiseConfig& config,
                              const ConfusionTable& table) {
    config.validate();
    table.validate();

    Injector injector(config, table);
    InjectionResult result;
    result.lines.reserve(clean.size());
    for (std::size_t i = 0; i < clean.size(); ++i) {
        result.lines.push_back(injector.corrupt_line(clean[i], i));
    }
    result.log = std::move(injector.log);
    return result;
}

std::vector<std::string> replay_log(std::span<const std::string> clean,
                                    const InjectionLog& log) {
    std::vector<std::string> lines(clean.begin(), clean.end());
    for (const InjectionRecord& record : log.records) {
        if (record.line_index >= lines.size()) {
            throw ParseError("injection log names line " + std::to_string(record.line_index) +
                             " of a " + std::to_string(lines.size()) + "-line sample");
        }
        std::string& line = lines[record.line_index];
        if (record.position > line.size()) {
            throw ParseError("injection log position " + std::to_string(record.position) +
                             " beyond end of line " + std::to_string(record.line_index));
        }
        line.replace(record.position, record.original.size(), record.corrupted);
    }
    return lines;
}

}  // namespace codehand::noise
