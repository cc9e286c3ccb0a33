#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "codehand/chars.hpp"
#include "codehand/corpus.hpp"
#include "codehand/errors.hpp"
#include "codehand/grammar.hpp"
#include "codehand/ink.hpp"
#include "codehand/io.hpp"
#include "codehand/metrics.hpp"
#include "codehand/noise.hpp"
#include "codehand/pipeline.hpp"
#include "codehand/version.hpp"

#if defined(_WIN32)
#include <io.h>
#define CODEHAND_ISATTY(fd) _isatty(fd)
#else
#include <unistd.h>
#define CODEHAND_ISATTY(fd) isatty(fd)
#endif

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

bool use_color() {
    if (std::getenv("CODEHAND_NO_COLOR") != nullptr) return false;
    return CODEHAND_ISATTY(2) != 0;
}

void report_error(const std::string& message) {
    if (use_color()) {
        std::cerr << "\x1b[31mcodehand: error:\x1b[0m " << message << '\n';
    } else {
        std::cerr << "codehand: error: " << message << '\n';
    }
}

// key=value file shared by inject/correct/experiment/segment. Explicit
// flags override anything read here.
std::map<std::string, std::string> read_kv_config(const std::string& path) {
    std::map<std::string, std::string> kv;
    std::vector<std::string> lines = codehand::io::read_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string_view line = codehand::trim_view(lines[i]);
        if (line.empty() || line.front() == '#') continue;
        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw codehand::ConfigError(path + ":" + std::to_string(i + 1) +
                                        ": expected key=value");
        }
        std::string key(codehand::trim_view(line.substr(0, eq)));
        std::string value(codehand::trim_view(line.substr(eq + 1)));
        if (key.empty()) {
            throw codehand::ConfigError(path + ":" + std::to_string(i + 1) + ": empty key");
        }
        kv[key] = value;
    }
    return kv;
}

double kv_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        double parsed = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw codehand::ConfigError("config key " + key + ": not a number: '" + value + "'");
    }
}

bool kv_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw codehand::ConfigError("config key " + key + ": not a boolean: '" + value + "'");
}

const std::vector<std::string> kKnownConfigKeys = {
    "similarity_threshold", "fuzzy_keyword_repair", "case_insensitive_match",
    "p_space",              "p_symbol",             "p_word",
    "line_gap_ratio"};

void reject_unknown_keys(const std::map<std::string, std::string>& kv) {
    for (const auto& [key, value] : kv) {
        bool known = false;
        for (const std::string& candidate : kKnownConfigKeys) {
            if (key == candidate) known = true;
        }
        if (!known) throw codehand::ConfigError("config file: unknown key '" + key + "'");
    }
}

struct Manifest {
    std::string command;
    std::uint64_t seed = 0;
    ordered_json options = ordered_json::object();
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;

    void write(const fs::path& out_dir) const {
        ordered_json doc;
        doc["tool"] = "codehand";
        doc["version"] = codehand::kVersion;
        doc["command"] = command;
        doc["seed"] = seed;
        doc["options"] = options;
        doc["inputs"] = inputs;
        doc["outputs"] = outputs;
        codehand::io::atomic_write_file(out_dir / "manifest.json", doc.dump(2) + "\n");
    }
};

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

// ---------------------------------------------------------------- segment

struct SegmentArgs {
    std::string ink_file;
    std::string out_dir = "codehand_out";
    std::string config_file;
    double line_gap_ratio = 0.6;
    bool ratio_given = false;
    bool json = false;
};

int run_segment(const SegmentArgs& args) {
    double ratio = args.line_gap_ratio;
    if (!args.config_file.empty()) {
        auto kv = read_kv_config(args.config_file);
        reject_unknown_keys(kv);
        if (auto it = kv.find("line_gap_ratio"); it != kv.end() && !args.ratio_given) {
            ratio = kv_double(it->first, it->second);
        }
    }
    codehand::ink::SegmentationConfig config;
    config.line_gap_ratio = ratio;

    codehand::ink::InkSample sample = codehand::ink::parse_ink_file(args.ink_file);
    std::vector<codehand::ink::LineGroup> groups = codehand::ink::segment_lines(sample, config);

    ordered_json doc;
    doc["source"] = args.ink_file;
    doc["line_count"] = groups.size();
    doc["lines"] = ordered_json::array();
    for (const codehand::ink::LineGroup& group : groups) {
        ordered_json entry;
        entry["strokes"] = group.stroke_indices;
        entry["y_min"] = group.y_min;
        entry["y_max"] = group.y_max;
        doc["lines"].push_back(entry);
    }

    fs::path out_dir(args.out_dir);
    std::string lines_file = (out_dir / (stem_of(args.ink_file) + ".lines.json")).string();
    codehand::io::atomic_write_file(lines_file, doc.dump(2) + "\n");

    Manifest manifest;
    manifest.command = "segment";
    manifest.options["line_gap_ratio"] = ratio;
    manifest.inputs = {args.ink_file};
    manifest.outputs = {lines_file};
    manifest.write(out_dir);

    if (args.json) {
        std::cout << doc.dump(2) << '\n';
    } else {
        std::cout << groups.size() << " lines\n";
        for (std::size_t i = 0; i < groups.size(); ++i) {
            std::cout << "line " << i << ": strokes";
            for (std::size_t index : groups[i].stroke_indices) std::cout << ' ' << index;
            std::cout << "  y " << groups[i].y_min << ".." << groups[i].y_max << '\n';
        }
    }
    return 0;
}

// ----------------------------------------------------------------- inject

struct InjectArgs {
    std::string clean_file;
    std::string out_dir = "codehand_out";
    std::string config_file;
    std::string table_file;
    codehand::noise::NoiseConfig noise;
    bool p_space_given = false;
    bool p_symbol_given = false;
    bool p_word_given = false;
    bool json = false;
};

void apply_noise_config(const std::map<std::string, std::string>& kv,
                        codehand::noise::NoiseConfig& noise, const InjectArgs& args) {
    if (auto it = kv.find("p_space"); it != kv.end() && !args.p_space_given) {
        noise.p_space = kv_double(it->first, it->second);
    }
    if (auto it = kv.find("p_symbol"); it != kv.end() && !args.p_symbol_given) {
        noise.p_symbol = kv_double(it->first, it->second);
    }
    if (auto it = kv.find("p_word"); it != kv.end() && !args.p_word_given) {
        noise.p_word = kv_double(it->first, it->second);
    }
}

int run_inject(InjectArgs& args) {
    if (!args.config_file.empty()) {
        auto kv = read_kv_config(args.config_file);
        reject_unknown_keys(kv);
        apply_noise_config(kv, args.noise, args);
    }
    codehand::noise::ConfusionTable table = args.table_file.empty()
                                                ? codehand::noise::default_confusion_table()
                                                : codehand::noise::load_confusion_table(args.table_file);

    std::vector<std::string> clean = codehand::io::read_lines(args.clean_file);
    codehand::noise::InjectionResult result = codehand::noise::inject_errors(clean, args.noise, table);

    fs::path out_dir(args.out_dir);
    std::string stem = stem_of(args.clean_file);
    std::string noisy_file = (out_dir / (stem + ".noisy.txt")).string();
    std::string log_file = (out_dir / (stem + ".injection_log.tsv")).string();
    codehand::io::atomic_write_file(noisy_file, codehand::io::join_lines(result.lines));
    codehand::io::atomic_write_file(log_file, result.log.to_tsv());

    Manifest manifest;
    manifest.command = "inject";
    manifest.seed = args.noise.seed;
    manifest.options["p_space"] = args.noise.p_space;
    manifest.options["p_symbol"] = args.noise.p_symbol;
    manifest.options["p_word"] = args.noise.p_word;
    manifest.options["table"] = args.table_file.empty() ? "built-in" : args.table_file;
    manifest.inputs = {args.clean_file};
    manifest.outputs = {noisy_file, log_file};
    manifest.write(out_dir);

    using codehand::noise::ErrorType;
    if (args.json) {
        ordered_json doc;
        doc["mutations"] = result.log.records.size();
        doc["word_errors"] = result.log.count(ErrorType::word);
        doc["symbol_errors"] = result.log.count(ErrorType::symbol);
        doc["space_errors"] = result.log.count(ErrorType::space);
        std::cout << doc.dump(2) << '\n';
    } else {
        std::cout << result.log.records.size() << " mutations ("
                  << result.log.count(ErrorType::word) << " word, "
                  << result.log.count(ErrorType::symbol) << " symbol, "
                  << result.log.count(ErrorType::space) << " space)\n";
    }
    return 0;
}

// ---------------------------------------------------------------- correct

struct CorrectArgs {
    std::string noisy_file;
    std::string out_dir = "codehand_out";
    std::string config_file;
    std::string lexicon_file;
    std::string classes_file;
    codehand::pipeline::CorrectionConfig correction;
    bool threshold_given = false;
    bool no_fuzzy_repair = false;
    bool case_sensitive = false;
    bool json = false;
};

void apply_correction_config(const std::map<std::string, std::string>& kv,
                             codehand::pipeline::CorrectionConfig& config,
                             bool threshold_given, bool no_fuzzy_given, bool case_given) {
    if (auto it = kv.find("similarity_threshold"); it != kv.end() && !threshold_given) {
        config.similarity_threshold = kv_double(it->first, it->second);
    }
    if (auto it = kv.find("fuzzy_keyword_repair"); it != kv.end() && !no_fuzzy_given) {
        config.fuzzy_keyword_repair = kv_bool(it->first, it->second);
    }
    if (auto it = kv.find("case_insensitive_match"); it != kv.end() && !case_given) {
        config.case_insensitive_match = kv_bool(it->first, it->second);
    }
}

std::string diagnostics_tsv(const codehand::pipeline::SampleCorrection& corrected) {
    std::string out = "line\tunbalanced_brackets\tflagged_tokens\n";
    for (std::size_t i = 0; i < corrected.diagnostics.size(); ++i) {
        const auto& diag = corrected.diagnostics[i];
        out += std::to_string(i);
        out += '\t';
        out += std::to_string(diag.unbalanced_brackets);
        out += '\t';
        for (std::size_t k = 0; k < diag.flagged_tokens.size(); ++k) {
            if (k > 0) out += ',';
            out += std::to_string(diag.flagged_tokens[k]);
        }
        out += '\n';
    }
    return out;
}

int run_correct(CorrectArgs& args) {
    if (!args.config_file.empty()) {
        auto kv = read_kv_config(args.config_file);
        reject_unknown_keys(kv);
        apply_correction_config(kv, args.correction, args.threshold_given, args.no_fuzzy_repair,
                                args.case_sensitive);
    }
    if (args.no_fuzzy_repair) args.correction.fuzzy_keyword_repair = false;
    if (args.case_sensitive) args.correction.case_insensitive_match = false;

    codehand::grammar::ClassRegistry registry = codehand::grammar::ClassRegistry::built_in();
    if (!args.classes_file.empty()) registry.merge_config_file(args.classes_file);

    codehand::pipeline::AdaptiveLexicon lexicon(&registry.keywords());
    if (!args.lexicon_file.empty()) {
        for (const std::string& entry : codehand::io::read_lines(args.lexicon_file)) {
            std::string_view trimmed = codehand::trim_view(entry);
            if (!trimmed.empty()) lexicon.add(trimmed);
        }
    }

    std::vector<std::string> noisy = codehand::io::read_lines(args.noisy_file);
    codehand::pipeline::SampleCorrection corrected =
        codehand::pipeline::correct_sample(noisy, args.correction, registry, &lexicon);

    fs::path out_dir(args.out_dir);
    std::string stem = stem_of(args.noisy_file);
    std::string corrected_file = (out_dir / (stem + ".corrected.txt")).string();
    std::string diag_file = (out_dir / (stem + ".diagnostics.tsv")).string();
    codehand::io::atomic_write_file(corrected_file, codehand::io::join_lines(corrected.lines));
    codehand::io::atomic_write_file(diag_file, diagnostics_tsv(corrected));

    Manifest manifest;
    manifest.command = "correct";
    manifest.options["similarity_threshold"] = args.correction.similarity_threshold;
    manifest.options["fuzzy_keyword_repair"] = args.correction.fuzzy_keyword_repair;
    manifest.options["case_insensitive_match"] = args.correction.case_insensitive_match;
    manifest.options["lexicon"] = args.lexicon_file;
    manifest.options["classes"] = args.classes_file;
    manifest.inputs = {args.noisy_file};
    manifest.outputs = {corrected_file, diag_file};
    manifest.write(out_dir);

    if (args.json) {
        ordered_json doc;
        doc["lines"] = corrected.lines.size();
        doc["lexicon_entries"] = corrected.lexicon.entries();
        std::cout << doc.dump(2) << '\n';
    } else {
        std::cout << "corrected " << corrected.lines.size() << " lines, lexicon holds "
                  << corrected.lexicon.size() << " entries\n";
    }
    return 0;
}

// --------------------------------------------------------------- evaluate

struct EvaluateArgs {
    std::string ref_file;
    std::string hyp_file;
    std::string out_dir = "codehand_out";
    std::string sample_id;
    std::string writer_id;
    bool per_line = false;
    bool json = false;
};

int run_evaluate(const EvaluateArgs& args) {
    std::vector<std::string> ref_lines = codehand::io::read_lines(args.ref_file);
    std::vector<std::string> hyp_lines = codehand::io::read_lines(args.hyp_file);
    std::string sample_id = args.sample_id.empty() ? stem_of(args.hyp_file) : args.sample_id;

    std::vector<codehand::metrics::SampleResult> results;
    if (args.per_line) {
        if (ref_lines.size() != hyp_lines.size()) {
            throw codehand::ParseError("per-line evaluation needs matching line counts (" +
                                       std::to_string(ref_lines.size()) + " vs " +
                                       std::to_string(hyp_lines.size()) + ")");
        }
        for (std::size_t i = 0; i < ref_lines.size(); ++i) {
            codehand::metrics::SampleResult row;
            row.sample_id = sample_id + ":" + std::to_string(i);
            row.writer_id = args.writer_id;
            row.wer = codehand::metrics::wer(ref_lines[i], hyp_lines[i]);
            row.cer = codehand::metrics::cer(ref_lines[i], hyp_lines[i]);
            row.errors = codehand::metrics::classify_errors(ref_lines[i], hyp_lines[i]);
            results.push_back(std::move(row));
        }
    } else {
        std::string ref = codehand::io::join_lines(ref_lines);
        std::string hyp = codehand::io::join_lines(hyp_lines);
        if (!ref.empty()) ref.pop_back();
        if (!hyp.empty()) hyp.pop_back();
        codehand::metrics::SampleResult row;
        row.sample_id = sample_id;
        row.writer_id = args.writer_id;
        row.wer = codehand::metrics::wer(ref, hyp);
        row.cer = codehand::metrics::cer(ref, hyp);
        row.errors = codehand::metrics::classify_errors(ref, hyp);
        results.push_back(std::move(row));
    }

    std::string text_report = codehand::metrics::format_report_text(results);
    std::string json_report = codehand::metrics::format_report_json(results);

    fs::path out_dir(args.out_dir);
    std::string text_file = (out_dir / "report.txt").string();
    std::string json_file = (out_dir / "report.json").string();
    codehand::io::atomic_write_file(text_file, text_report);
    codehand::io::atomic_write_file(json_file, json_report);

    Manifest manifest;
    manifest.command = "evaluate";
    manifest.options["per_line"] = args.per_line;
    manifest.options["sample_id"] = sample_id;
    manifest.options["writer_id"] = args.writer_id;
    manifest.inputs = {args.ref_file, args.hyp_file};
    manifest.outputs = {text_file, json_file};
    manifest.write(out_dir);

    std::cout << (args.json ? json_report : text_report);
    return 0;
}

// ----------------------------------------------------------- sample-corpus

struct SampleCorpusArgs {
    std::string source_dir;
    std::string out_dir = "codehand_out";
    std::size_t count = 0;
    std::uint64_t seed = 0;
    codehand::corpus::FilterOptions filter;
    bool json = false;
};

int run_sample_corpus(const SampleCorpusArgs& args) {
    std::vector<codehand::corpus::FunctionSample> all =
        codehand::corpus::harvest_directory(args.source_dir);
    std::vector<codehand::corpus::FunctionSample> eligible =
        codehand::corpus::filter_eligible(all, args.filter);
    std::vector<codehand::corpus::FunctionSample> picked =
        codehand::corpus::sample_functions(eligible, args.count, args.seed);

    fs::path out_dir(args.out_dir);
    fs::path samples_dir = out_dir / "samples";
    codehand::corpus::write_samples(picked, samples_dir);

    Manifest manifest;
    manifest.command = "sample-corpus";
    manifest.seed = args.seed;
    manifest.options["count"] = args.count;
    manifest.options["min_lines"] = args.filter.min_lines;
    manifest.options["max_lines"] = args.filter.max_lines;
    manifest.options["max_line_length"] = args.filter.max_line_length;
    manifest.options["drop_repetitive"] = args.filter.drop_repetitive;
    manifest.inputs = {args.source_dir};
    manifest.outputs = {(samples_dir / "index.txt").string()};
    for (const auto& sample : picked) {
        manifest.outputs.push_back((samples_dir / (sample.id + ".txt")).string());
    }
    manifest.write(out_dir);

    if (args.json) {
        ordered_json doc;
        doc["total"] = all.size();
        doc["eligible"] = eligible.size();
        doc["sampled"] = picked.size();
        std::cout << doc.dump(2) << '\n';
    } else {
        std::cout << "sampled " << picked.size() << " of " << eligible.size()
                  << " eligible functions (" << all.size() << " found)\n";
    }
    return 0;
}

// ------------------------------------------------------------- experiment

struct ExperimentArgs {
    std::string samples_dir;
    std::string out_dir = "codehand_out";
    std::string config_file;
    std::string table_file;
    codehand::noise::NoiseConfig noise;
    codehand::pipeline::CorrectionConfig correction;
    bool p_space_given = false;
    bool p_symbol_given = false;
    bool p_word_given = false;
    bool threshold_given = false;
    bool no_fuzzy_repair = false;
    bool case_sensitive = false;
    bool json = false;
};

struct TypeTally {
    std::size_t injected = 0;
    std::size_t residual = 0;

    double fix_rate() const {
        if (injected == 0) return 1.0;
        return 1.0 - static_cast<double>(residual) / static_cast<double>(injected);
    }
};

int run_experiment(ExperimentArgs& args) {
    if (!args.config_file.empty()) {
        auto kv = read_kv_config(args.config_file);
        reject_unknown_keys(kv);
        InjectArgs shim;
        shim.p_space_given = args.p_space_given;
        shim.p_symbol_given = args.p_symbol_given;
        shim.p_word_given = args.p_word_given;
        apply_noise_config(kv, args.noise, shim);
        apply_correction_config(kv, args.correction, args.threshold_given, args.no_fuzzy_repair,
                                args.case_sensitive);
    }
    if (args.no_fuzzy_repair) args.correction.fuzzy_keyword_repair = false;
    if (args.case_sensitive) args.correction.case_insensitive_match = false;

    codehand::noise::ConfusionTable table = args.table_file.empty()
                                                ? codehand::noise::default_confusion_table()
                                                : codehand::noise::load_confusion_table(args.table_file);

    std::error_code ec;
    if (!fs::is_directory(args.samples_dir, ec)) {
        throw codehand::ConfigError("not a directory: " + args.samples_dir);
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(args.samples_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        throw codehand::EmptyInputError("no .txt samples in " + args.samples_dir);
    }

    codehand::grammar::ClassRegistry registry = codehand::grammar::ClassRegistry::built_in();

    std::vector<codehand::metrics::SampleResult> noisy_results;
    std::vector<codehand::metrics::SampleResult> corrected_results;
    TypeTally word_tally, symbol_tally, space_tally;
    ordered_json per_sample = ordered_json::array();

    for (std::size_t i = 0; i < files.size(); ++i) {
        std::vector<std::string> clean = codehand::io::read_lines(files[i]);

        codehand::noise::NoiseConfig noise = args.noise;
        noise.seed = args.noise.seed + i;
        codehand::noise::InjectionResult injected =
            codehand::noise::inject_errors(clean, noise, table);

        codehand::pipeline::SampleCorrection corrected =
            codehand::pipeline::correct_sample(injected.lines, args.correction, registry);

        std::string ref = codehand::io::join_lines(clean);
        std::string noisy_text = codehand::io::join_lines(injected.lines);
        std::string corrected_text = codehand::io::join_lines(corrected.lines);
        if (!ref.empty()) ref.pop_back();
        if (!noisy_text.empty()) noisy_text.pop_back();
        if (!corrected_text.empty()) corrected_text.pop_back();

        std::string stem = files[i].stem().string();
        codehand::metrics::SampleResult noisy_row;
        noisy_row.sample_id = stem;
        noisy_row.wer = codehand::metrics::wer(ref, noisy_text);
        noisy_row.cer = codehand::metrics::cer(ref, noisy_text);
        noisy_row.errors = codehand::metrics::classify_errors(ref, noisy_text);
        noisy_results.push_back(noisy_row);

        codehand::metrics::SampleResult corrected_row;
        corrected_row.sample_id = stem;
        corrected_row.wer = codehand::metrics::wer(ref, corrected_text);
        corrected_row.cer = codehand::metrics::cer(ref, corrected_text);
        corrected_row.errors = codehand::metrics::classify_errors(ref, corrected_text);
        corrected_results.push_back(corrected_row);

        using codehand::noise::ErrorType;
        word_tally.injected += injected.log.count(ErrorType::word);
        symbol_tally.injected += injected.log.count(ErrorType::symbol);
        space_tally.injected += injected.log.count(ErrorType::space);
        word_tally.residual += corrected_row.errors.word_errors;
        symbol_tally.residual += corrected_row.errors.symbol_errors;
        space_tally.residual += corrected_row.errors.space_errors;

        ordered_json row;
        row["sample"] = stem;
        row["noisy_wer"] = noisy_row.wer;
        row["noisy_cer"] = noisy_row.cer;
        row["corrected_wer"] = corrected_row.wer;
        row["corrected_cer"] = corrected_row.cer;
        per_sample.push_back(row);
    }

    auto mean_of = [](const std::vector<codehand::metrics::SampleResult>& rows, bool use_wer) {
        double total = 0.0;
        for (const auto& row : rows) total += use_wer ? row.wer : row.cer;
        return total / static_cast<double>(rows.size());
    };

    ordered_json doc;
    doc["samples"] = files.size();
    doc["seed"] = args.noise.seed;
    doc["noisy"] = {{"mean_wer", mean_of(noisy_results, true)},
                    {"mean_cer", mean_of(noisy_results, false)}};
    doc["corrected"] = {{"mean_wer", mean_of(corrected_results, true)},
                        {"mean_cer", mean_of(corrected_results, false)}};
    auto tally_json = [](const TypeTally& tally) {
        return ordered_json{{"injected", tally.injected},
                            {"residual", tally.residual},
                            {"fix_rate", tally.fix_rate()}};
    };
    doc["errors"] = {{"word", tally_json(word_tally)},
                     {"symbol", tally_json(symbol_tally)},
                     {"space", tally_json(space_tally)}};
    doc["per_sample"] = per_sample;

    std::string text;
    text += "samples: " + std::to_string(files.size()) + "\n";
    auto fmt = [](double value) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.2f", value);
        return std::string(buf);
    };
    text += "noisy     mean WER " + fmt(doc["noisy"]["mean_wer"].get<double>()) + "%  mean CER " +
            fmt(doc["noisy"]["mean_cer"].get<double>()) + "%\n";
    text += "corrected mean WER " + fmt(doc["corrected"]["mean_wer"].get<double>()) +
            "%  mean CER " + fmt(doc["corrected"]["mean_cer"].get<double>()) + "%\n";
    auto tally_text = [&](const char* name, const TypeTally& tally) {
        text += std::string(name) + " errors: injected " + std::to_string(tally.injected) +
                ", residual " + std::to_string(tally.residual) + ", fix rate " +
                fmt(tally.fix_rate() * 100.0) + "%\n";
    };
    tally_text("word", word_tally);
    tally_text("symbol", symbol_tally);
    tally_text("space", space_tally);

    fs::path out_dir(args.out_dir);
    std::string json_file = (out_dir / "experiment.json").string();
    std::string text_file = (out_dir / "experiment.txt").string();
    codehand::io::atomic_write_file(json_file, doc.dump(2) + "\n");
    codehand::io::atomic_write_file(text_file, text);

    Manifest manifest;
    manifest.command = "experiment";
    manifest.seed = args.noise.seed;
    manifest.options["p_space"] = args.noise.p_space;
    manifest.options["p_symbol"] = args.noise.p_symbol;
    manifest.options["p_word"] = args.noise.p_word;
    manifest.options["similarity_threshold"] = args.correction.similarity_threshold;
    manifest.options["fuzzy_keyword_repair"] = args.correction.fuzzy_keyword_repair;
    manifest.options["case_insensitive_match"] = args.correction.case_insensitive_match;
    manifest.options["table"] = args.table_file.empty() ? "built-in" : args.table_file;
    manifest.inputs = {args.samples_dir};
    manifest.outputs = {json_file, text_file};
    manifest.write(out_dir);

    std::cout << (args.json ? doc.dump(2) + "\n" : text);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"grammar-aware correction of handwritten Python recognition output"};
    app.set_version_flag("--version", codehand::kVersion);
    app.require_subcommand(1);

    SegmentArgs segment_args;
    CLI::App* segment = app.add_subcommand("segment", "split an ink sample into text lines");
    segment->add_option("ink_file", segment_args.ink_file, "ink sample (JSON)")->required();
    CLI::Option* ratio_opt =
        segment->add_option("--line-gap-ratio", segment_args.line_gap_ratio,
                            "new-line threshold as a fraction of median stroke height");
    segment->add_option("--out", segment_args.out_dir, "output directory");
    segment->add_option("--config", segment_args.config_file, "key=value config file");
    segment->add_flag("--json", segment_args.json, "machine-readable stdout");

    InjectArgs inject_args;
    CLI::App* inject = app.add_subcommand("inject", "corrupt clean source with recognizer noise");
    inject->add_option("clean_file", inject_args.clean_file, "clean source sample")->required();
    CLI::Option* p_space_opt =
        inject->add_option("--p-space", inject_args.noise.p_space, "space insertion probability");
    CLI::Option* p_symbol_opt = inject->add_option("--p-symbol", inject_args.noise.p_symbol,
                                                   "symbol substitution probability");
    CLI::Option* p_word_opt =
        inject->add_option("--p-word", inject_args.noise.p_word, "word corruption probability");
    inject->add_option("--seed", inject_args.noise.seed, "random stream seed");
    inject->add_option("--table", inject_args.table_file, "confusion table (TSV)");
    inject->add_option("--out", inject_args.out_dir, "output directory");
    inject->add_option("--config", inject_args.config_file, "key=value config file");
    inject->add_flag("--json", inject_args.json, "machine-readable stdout");

    CorrectArgs correct_args;
    CLI::App* correct = app.add_subcommand("correct", "run the correction pipeline over a sample");
    correct->add_option("noisy_file", correct_args.noisy_file, "recognizer output")->required();
    CLI::Option* threshold_opt =
        correct->add_option("--threshold", correct_args.correction.similarity_threshold,
                            "lexicon similarity threshold");
    correct->add_flag("--no-fuzzy-keyword-repair", correct_args.no_fuzzy_repair,
                      "disable fuzzy statement-class repair");
    correct->add_flag("--case-sensitive", correct_args.case_sensitive,
                      "match lexicon entries case-sensitively");
    correct->add_option("--lexicon", correct_args.lexicon_file,
                        "file of identifiers to pre-seed the lexicon, one per line");
    correct->add_option("--classes", correct_args.classes_file,
                        "statement-class config merged over the built-ins");
    correct->add_option("--out", correct_args.out_dir, "output directory");
    correct->add_option("--config", correct_args.config_file, "key=value config file");
    correct->add_flag("--json", correct_args.json, "machine-readable stdout");

    EvaluateArgs evaluate_args;
    CLI::App* evaluate = app.add_subcommand("evaluate", "score a hypothesis against a reference");
    evaluate->add_option("ref_file", evaluate_args.ref_file, "ground truth")->required();
    evaluate->add_option("hyp_file", evaluate_args.hyp_file, "hypothesis")->required();
    evaluate->add_flag("--per-line", evaluate_args.per_line, "score each line separately");
    evaluate->add_option("--sample-id", evaluate_args.sample_id, "sample id for the report");
    evaluate->add_option("--writer", evaluate_args.writer_id, "writer id for the report");
    evaluate->add_option("--out", evaluate_args.out_dir, "output directory");
    evaluate->add_flag("--json", evaluate_args.json, "print the JSON report");

    SampleCorpusArgs corpus_args;
    CLI::App* sample_corpus =
        app.add_subcommand("sample-corpus", "harvest, filter and sample functions from .py files");
    sample_corpus->add_option("source_dir", corpus_args.source_dir, "directory of .py files")
        ->required();
    sample_corpus->add_option("-n,--count", corpus_args.count, "functions to sample")->required();
    sample_corpus->add_option("--seed", corpus_args.seed, "selection seed");
    sample_corpus->add_option("--min-lines", corpus_args.filter.min_lines, "minimum line count");
    sample_corpus->add_option("--max-lines", corpus_args.filter.max_lines, "maximum line count");
    sample_corpus->add_option("--max-line-length", corpus_args.filter.max_line_length,
                              "maximum line length");
    sample_corpus->add_flag("--drop-repetitive", corpus_args.filter.drop_repetitive,
                            "drop samples that are mostly assignments");
    sample_corpus->add_option("--out", corpus_args.out_dir, "output directory");
    sample_corpus->add_flag("--json", corpus_args.json, "machine-readable stdout");

    ExperimentArgs experiment_args;
    CLI::App* experiment =
        app.add_subcommand("experiment", "inject, correct and evaluate a directory of samples");
    experiment->add_option("samples_dir", experiment_args.samples_dir, "directory of .txt samples")
        ->required();
    CLI::Option* exp_p_space = experiment->add_option("--p-space", experiment_args.noise.p_space,
                                                      "space insertion probability");
    CLI::Option* exp_p_symbol = experiment->add_option(
        "--p-symbol", experiment_args.noise.p_symbol, "symbol substitution probability");
    CLI::Option* exp_p_word = experiment->add_option("--p-word", experiment_args.noise.p_word,
                                                     "word corruption probability");
    experiment->add_option("--seed", experiment_args.noise.seed, "random stream seed");
    experiment->add_option("--table", experiment_args.table_file, "confusion table (TSV)");
    CLI::Option* exp_threshold =
        experiment->add_option("--threshold", experiment_args.correction.similarity_threshold,
                               "lexicon similarity threshold");
    experiment->add_flag("--no-fuzzy-keyword-repair", experiment_args.no_fuzzy_repair,
                         "disable fuzzy statement-class repair");
    experiment->add_flag("--case-sensitive", experiment_args.case_sensitive,
                         "match lexicon entries case-sensitively");
    experiment->add_option("--out", experiment_args.out_dir, "output directory");
    experiment->add_option("--config", experiment_args.config_file, "key=value config file");
    experiment->add_flag("--json", experiment_args.json, "machine-readable stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    }

    segment_args.ratio_given = ratio_opt->count() > 0;
    inject_args.p_space_given = p_space_opt->count() > 0;
    inject_args.p_symbol_given = p_symbol_opt->count() > 0;
    inject_args.p_word_given = p_word_opt->count() > 0;
    correct_args.threshold_given = threshold_opt->count() > 0;
    experiment_args.p_space_given = exp_p_space->count() > 0;
    experiment_args.p_symbol_given = exp_p_symbol->count() > 0;
    experiment_args.p_word_given = exp_p_word->count() > 0;
    experiment_args.threshold_given = exp_threshold->count() > 0;

    try {
        if (segment->parsed()) return run_segment(segment_args);
        if (inject->parsed()) return run_inject(inject_args);
        if (correct->parsed()) return run_correct(correct_args);
        if (evaluate->parsed()) return run_evaluate(evaluate_args);
        if (sample_corpus->parsed()) return run_sample_corpus(corpus_args);
        if (experiment->parsed()) return run_experiment(experiment_args);
    } catch (const codehand::ParseError& e) {
        report_error(e.what());
        return 2;
    } catch (const codehand::InsufficientCorpusError& e) {
        report_error(e.what());
        return 3;
    } catch (const codehand::ConfigError& e) {
        report_error(e.what());
        return 3;
    } catch (const codehand::EmptyInputError& e) {
        report_error(e.what());
        return 4;
    } catch (const codehand::UndefinedRateError& e) {
        report_error(e.what());
        return 4;
    } catch (const std::exception& e) {
        report_error(e.what());
        return 1;
    }
    return 0;
}
