#include "vcass/common/sections.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace vcass::sections {

std::string trim(std::string_view s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

namespace {

void append_inline_items(std::vector<std::string>& items, std::string_view text) {
  size_t start = 0;
  while (start <= text.size()) {
    size_t sep = text.find(';', start);
    std::string_view piece =
        sep == std::string_view::npos ? text.substr(start) : text.substr(start, sep - start);
    std::string item = trim(piece);
    if (!item.empty()) items.push_back(std::move(item));
    if (sep == std::string_view::npos) break;
    start = sep + 1;
  }
}

}  // namespace

ParseResult parse(std::string_view text, const std::vector<std::string>& labels) {
  ParseResult result;
  for (const auto& l : labels) result.by_label[to_lower(l)];

  std::vector<std::string>* current = nullptr;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string stripped = trim(line);
    if (stripped.empty()) continue;

    // section header?
    size_t colon = stripped.find(':');
    if (colon != std::string::npos) {
      std::string head = to_lower(trim(stripped.substr(0, colon)));
      auto it = result.by_label.find(head);
      if (it != result.by_label.end()) {
        result.any_label_seen = true;
        current = &it->second;
        append_inline_items(*current, std::string_view(stripped).substr(colon + 1));
        continue;
      }
    }

    if (current && (stripped[0] == '-' || stripped[0] == '*')) {
      std::string item = trim(std::string_view(stripped).substr(1));
      if (!item.empty()) current->push_back(std::move(item));
      continue;
    }
    // free text outside a recognized section: part of raw only
    current = nullptr;
  }
  return result;
}

std::string render(const std::vector<std::pair<std::string, std::vector<std::string>>>& sections) {
  std::string out;
  for (const auto& [label, items] : sections) {
    out += label;
    out += ":\n";
    for (const auto& item : items) {
      out += "- ";
      out += item;
      out += "\n";
    }
  }
  return out;
}

}  // namespace vcass::sections
