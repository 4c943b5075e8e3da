#pragma once

#include <string>

namespace vcass::instruct {

// The neutral commentary text. The pipeline never rewrites it; synthesis
// receives it byte-identical.
struct Transcript {
  std::string text;
  std::string language_tag = "en";  // BCP-47
  int word_count = 0;

  // Counts whitespace-separated tokens.
  static int count_words(const std::string& text);
  static Transcript make(std::string text, std::string language_tag = "en");

  // Throws ConfigError when empty or when word_count disagrees with text.
  void validate() const;

  bool operator==(const Transcript&) const = default;
};

// Loads a transcript file: entire contents = text (trailing newline
// stripped).
Transcript load_transcript(const std::string& path, const std::string& language_tag = "en");

}  // namespace vcass::instruct
