// Labeled-section plain-text parsing. Both backend response contracts (the
// vision report and the CoT step outputs) answer in this shape:
//
//   label:
//   - first item
//   - second item
//   other_label: inline item; another item
//
// A section opens at a line `label:`; items follow as `-`/`*` bullets or
// inline after the colon separated by `;`. Lines outside recognized labels
// are ignored (they stay visible in the raw text only).
#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace vcass::sections {

struct ParseResult {
  // label -> items, labels restricted to the requested set
  std::map<std::string, std::vector<std::string>> by_label;
  // true when at least one requested label was seen (even if empty)
  bool any_label_seen = false;
};

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);

// `labels` are matched case-insensitively against `label:` lines.
ParseResult parse(std::string_view text, const std::vector<std::string>& labels);

// Canonical rendering: every label on its own line, one `- item` per line,
// in the order given. parse() recovers it exactly.
std::string render(const std::vector<std::pair<std::string, std::vector<std::string>>>& sections);

}  // namespace vcass::sections
