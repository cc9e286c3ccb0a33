#pragma once

#include <string_view>

// Locale-independent ASCII classification. The toolkit operates on byte
// strings; multi-byte sequences pass through untouched because none of the
// predicates below match bytes >= 0x80.

namespace codehand {

inline bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }

inline bool is_ascii_alpha(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

inline bool is_ascii_alnum(char c) { return is_ascii_digit(c) || is_ascii_alpha(c); }

inline bool is_space_char(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Identifier characters: alphanumerics plus underscore.
inline bool is_word_char(char c) { return is_ascii_alnum(c) || c == '_'; }

// Anything printable that is neither alphanumeric nor whitespace.
inline bool is_symbol_char(char c) { return !is_ascii_alnum(c) && !is_space_char(c); }

inline char ascii_lower(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline std::string_view trim_view(std::string_view s) {
    while (!s.empty() && is_space_char(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space_char(s.back())) s.remove_suffix(1);
    return s;
}

}  // namespace codehand
