#pragma once

#include <cstddef>
#include <string_view>

namespace codehand::pipeline {

// Minimum number of single-character insertions, deletions and
// substitutions turning `a` into `b`.
std::size_t levenshtein(std::string_view a, std::string_view b);

// Normalized similarity in [0, 1]:
//   1 - levenshtein(a', b') / max(|a|, |b|)
// where a', b' are the inputs, case-folded when `case_insensitive` is set.
// Two empty strings compare as identical (similarity 1).
double similarity(std::string_view a, std::string_view b, bool case_insensitive = true);

}  // namespace codehand::pipeline
