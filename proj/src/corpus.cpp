#include "codehand/corpus.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "codehand/chars.hpp"
#include "codehand/errors.hpp"
#include "codehand/grammar.hpp"
#include "codehand/io.hpp"
#include "codehand/rng.hpp"

namespace codehand::corpus {

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t hash = 14695981039346656037ull;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

namespace {

std::string_view lstrip(std::string_view line) {
    std::size_t i = 0;
    while (i < line.size() && is_space_char(line[i])) ++i;
    return line.substr(i);
}

std::size_t indent_of(std::string_view line) { return line.size() - lstrip(line).size(); }

bool is_blank(std::string_view line) { return lstrip(line).empty(); }

std::string strip_line_comment(const std::string& line) {
    char quote = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quote != 0) {
            if (c == '\\') {
                ++i;
            } else if (c == quote) {
                quote = 0;
            }
            continue;
        }
        if (c == '\'' || c == '"') {
            quote = c;
            continue;
        }
        if (c == '#') {
            std::string_view kept(line.data(), i);
            while (!kept.empty() && is_space_char(kept.back())) kept.remove_suffix(1);
            return std::string(kept);
        }
    }
    return line;
}

}  // namespace

std::vector<std::string> strip_comments(std::span<const std::string> lines) {
    std::vector<std::string> out;
    out.reserve(lines.size());
    for (const std::string& line : lines) {
        std::string_view code = lstrip(line);
        if (!code.empty() && code.front() == '#') continue;
        out.push_back(strip_line_comment(line));
    }
    return out;
}

std::vector<FunctionSample> extract_functions(std::span<const std::string> lines,
                                              const std::string& origin_path) {
    std::vector<FunctionSample> samples;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string_view head = lstrip(lines[i]);
        if (!head.starts_with("def ")) continue;

        FunctionSample sample;
        sample.origin_path = origin_path;
        sample.origin_line = i + 1;
        sample.lines.emplace_back(head);

        std::size_t def_indent = indent_of(lines[i]);
        for (std::size_t j = i + 1; j < lines.size(); ++j) {
            if (is_blank(lines[j])) continue;
            if (indent_of(lines[j]) <= def_indent) break;
            sample.lines.emplace_back(lstrip(lines[j]));
        }

        std::string key = origin_path + ":" + std::to_string(sample.origin_line);
        std::ostringstream id;
        id << "fn_" << std::hex << fnv1a64(key);
        sample.id = id.str();
        samples.push_back(std::move(sample));
    }
    return samples;
}

namespace {

bool mostly_assignments(const FunctionSample& sample, double share) {
    grammar::ClassRegistry registry = grammar::ClassRegistry::built_in();
    grammar::ClassifyOptions options;
    options.fuzzy_repair = false;
    std::size_t assignments = 0;
    for (const std::string& line : sample.lines) {
        if (grammar::classify_statement(line, registry, options).name == "assignment") {
            ++assignments;
        }
    }
    return static_cast<double>(assignments) >
           share * static_cast<double>(sample.lines.size());
}

}  // namespace

std::vector<FunctionSample> filter_eligible(std::span<const FunctionSample> samples,
                                            const FilterOptions& options) {
    std::vector<FunctionSample> out;
    for (const FunctionSample& sample : samples) {
        if (sample.lines.size() < options.min_lines ||
            sample.lines.size() > options.max_lines) {
            continue;
        }
        std::size_t longest = 0;
        for (const std::string& line : sample.lines) longest = std::max(longest, line.size());
        if (longest > options.max_line_length) continue;
        if (options.drop_repetitive && mostly_assignments(sample, options.assignment_share)) {
            continue;
        }
        out.push_back(sample);
    }
    return out;
}

std::vector<FunctionSample> sample_functions(std::span<const FunctionSample> samples,
                                             std::size_t n, std::uint64_t seed) {
    if (n > samples.size()) {
        throw InsufficientCorpusError("asked for " + std::to_string(n) + " functions, corpus has " +
                                      std::to_string(samples.size()));
    }
    std::vector<FunctionSample> pool(samples.begin(), samples.end());
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = i + bounded_uniform(rng, pool.size() - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(n);
    return pool;
}

std::vector<FunctionSample> harvest_directory(const std::filesystem::path& root) {
    std::error_code ec;
    if (!std::filesystem::is_directory(root, ec)) {
        throw ConfigError("not a directory: " + root.string());
    }
    std::vector<std::filesystem::path> files;
    for (auto it = std::filesystem::recursive_directory_iterator(root, ec);
         it != std::filesystem::recursive_directory_iterator(); ++it) {
        if (it->is_regular_file() && it->path().extension() == ".py") {
            files.push_back(it->path());
        }
    }
    if (ec) throw ConfigError("cannot walk " + root.string() + ": " + ec.message());
    std::sort(files.begin(), files.end());

    std::vector<FunctionSample> samples;
    for (const std::filesystem::path& file : files) {
        std::vector<std::string> lines = strip_comments(io::read_lines(file));
        std::vector<FunctionSample> found = extract_functions(lines, file.string());
        samples.insert(samples.end(), std::make_move_iterator(found.begin()),
                       std::make_move_iterator(found.end()));
    }
    return samples;
}

void write_samples(std::span<const FunctionSample> samples,
                   const std::filesystem::path& dir) {
    io::ensure_dir(dir);
    std::ostringstream index;
    for (const FunctionSample& sample : samples) {
        io::atomic_write_file(dir / (sample.id + ".txt"), io::join_lines(sample.lines));
        index << sample.id << '\t' << sample.origin_path << '\t' << sample.origin_line << '\n';
    }
    io::atomic_write_file(dir / "index.txt", index.str());
}

}  // namespace codehand::corpus
