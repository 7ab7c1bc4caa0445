#include "pcblint/glob.hpp"

namespace pcblint {

bool glob_match(std::string_view pattern, std::string_view text) {
    // Iterative matcher with single-star backtracking.
    size_t p = 0, t = 0;
    size_t star = std::string_view::npos;
    size_t star_t = 0;
    while (t < text.size()) {
        if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == text[t])) {
            ++p;
            ++t;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            star_t = t;
        } else if (star != std::string_view::npos) {
            p = star + 1;
            t = ++star_t;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*')
        ++p;
    return p == pattern.size();
}

bool glob_is_literal(std::string_view pattern) {
    return pattern.find_first_of("*?") == std::string_view::npos;
}

} // namespace pcblint
