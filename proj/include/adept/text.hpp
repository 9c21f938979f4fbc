#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace adept {

std::string trim(std::string_view text);

std::string join(const std::vector<std::string>& parts, std::string_view separator);

std::string to_lower(std::string_view text);

bool contains(std::string_view haystack, std::string_view needle);

/// Wraps each paragraph of `text` on whitespace at `width` columns. Words
/// longer than the width are emitted unbroken on their own line.
std::string wrap_text(std::string_view text, std::size_t width);

/// Lowercase letters and digits, every other run squashed to a single '-'.
std::string slugify(std::string_view text);

} // namespace adept
