#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace codehand::corpus {

// One function pulled out of a source file, flattened to lstripped
// lines (def line first). The id is stable across platforms and runs.
struct FunctionSample {
    std::string id;
    std::string origin_path;
    std::size_t origin_line = 0;  // 1-based line of the def
    std::vector<std::string> lines;
};

// FNV-1a, 64 bit. std::hash is not pinned across implementations, and
// sample ids have to be.
std::uint64_t fnv1a64(std::string_view text);

// Removes comments with awareness of string literals: lines whose
// first non-blank character is '#' vanish, trailing comments are cut
// and the remainder right-trimmed. '#' inside quotes stays.
std::vector<std::string> strip_comments(std::span<const std::string> lines);

// Finds every def (nested ones both inside the outer sample and as
// their own), takes the deeper-indented lines under it, drops blank
// lines, and lstrips what is left.
std::vector<FunctionSample> extract_functions(std::span<const std::string> lines,
                                              const std::string& origin_path);

struct FilterOptions {
    std::size_t min_lines = 9;
    std::size_t max_lines = 18;
    std::size_t max_line_length = 60;
    // Drop samples where more than assignment_share of the lines
    // classify as plain assignments (tables, constant blocks).
    bool drop_repetitive = false;
    double assignment_share = 0.8;
};

std::vector<FunctionSample> filter_eligible(std::span<const FunctionSample> samples,
                                            const FilterOptions& options);

// Uniform sample of n distinct functions, order randomized, identical
// for identical inputs and seed. Throws InsufficientCorpusError when
// fewer than n are available.
std::vector<FunctionSample> sample_functions(std::span<const FunctionSample> samples,
                                             std::size_t n, std::uint64_t seed);

// All functions from every .py file under root, files visited in
// sorted path order.
std::vector<FunctionSample> harvest_directory(const std::filesystem::path& root);

// One <id>.txt per sample plus an index.txt of id, origin and line.
void write_samples(std::span<const FunctionSample> samples,
                   const std::filesystem::path& dir);

}  // namespace codehand::corpus
