#include "codehand/distance.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "codehand/chars.hpp"

namespace codehand::pipeline {

std::size_t levenshtein(std::string_view a, std::string_view b) {
    if (a.empty()) return b.size();
    if (b.empty()) return a.size();

    std::vector<std::size_t> prev(b.size() + 1);
    std::vector<std::size_t> cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;

    for (std::size_t i = 0; i < a.size(); ++i) {
        cur[0] = i + 1;
        for (std::size_t j = 0; j < b.size(); ++j) {
            std::size_t sub = prev[j] + (a[i] == b[j] ? 0 : 1);
            cur[j + 1] = std::min({prev[j + 1] + 1, cur[j] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

double similarity(std::string_view a, std::string_view b, bool case_insensitive) {
    if (a.empty() && b.empty()) return 1.0;

    std::size_t dist;
    if (case_insensitive) {
        std::string fa(a);
        std::string fb(b);
        for (char& c : fa) c = ascii_lower(c);
        for (char& c : fb) c = ascii_lower(c);
        dist = levenshtein(fa, fb);
    } else {
        dist = levenshtein(a, b);
    }
    double longest = static_cast<double>(std::max(a.size(), b.size()));
    return 1.0 - static_cast<double>(dist) / longest;
}

}  // namespace codehand::pipeline
