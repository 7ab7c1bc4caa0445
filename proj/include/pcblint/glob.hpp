#pragma once

#include <string>
#include <string_view>

namespace pcblint {

// Case-sensitive glob match: `*` matches any run of characters (including an
// empty one), `?` matches exactly one character. Everything else is literal.
bool glob_match(std::string_view pattern, std::string_view text);

// True if the pattern contains no `*` or `?`, i.e. it only matches itself.
bool glob_is_literal(std::string_view pattern);

} // namespace pcblint
