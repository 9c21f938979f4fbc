#include "adept/text.hpp"

#include <cctype>
#include <sstream>

namespace adept {

std::string trim(std::string_view text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    return std::string(text.substr(begin, end - begin));
}

std::string join(const std::vector<std::string>& parts, std::string_view separator) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out.append(separator);
        out.append(parts[i]);
    }
    return out;
}

std::string to_lower(std::string_view text) {
    std::string out(text);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool contains(std::string_view haystack, std::string_view needle) {
    return haystack.find(needle) != std::string_view::npos;
}

std::string wrap_text(std::string_view text, std::size_t width) {
    std::string out;
    std::string line;
    std::istringstream stream{std::string(text)};
    std::string raw_line;
    bool first_line = true;
    while (std::getline(stream, raw_line)) {
        if (!first_line) out.push_back('\n');
        first_line = false;

        std::istringstream words(raw_line);
        std::string word;
        line.clear();
        while (words >> word) {
            if (line.empty()) {
                line = word;
            } else if (line.size() + 1 + word.size() <= width) {
                line.push_back(' ');
                line.append(word);
            } else {
                out.append(line);
                out.push_back('\n');
                line = word;
            }
        }
        out.append(line);
    }
    return out;
}

std::string slugify(std::string_view text) {
    std::string out;
    bool pending_dash = false;
    for (char c : text) {
        const auto uc = static_cast<unsigned char>(c);
        if (std::isalnum(uc)) {
            if (pending_dash && !out.empty()) out.push_back('-');
            pending_dash = false;
            out.push_back(static_cast<char>(std::tolower(uc)));
        } else {
            pending_dash = true;
        }
    }
    return out.empty() ? "scenario" : out;
}

} // namespace adept
