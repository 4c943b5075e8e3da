#include "vcass/instruct/transcript.hpp"

#include <cctype>

#include "vcass/common/errors.hpp"
#include "vcass/common/fsutil.hpp"

namespace vcass::instruct {

int Transcript::count_words(const std::string& text) {
  int words = 0;
  bool in_word = false;
  for (char c : text) {
    bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (!space && !in_word) ++words;
    in_word = !space;
  }
  return words;
}

Transcript Transcript::make(std::string text, std::string language_tag) {
  Transcript t;
  t.text = std::move(text);
  t.language_tag = std::move(language_tag);
  t.word_count = count_words(t.text);
  return t;
}

void Transcript::validate() const {
  if (text.empty()) throw ConfigError("transcript text is empty");
  if (word_count < 1) throw ConfigError("transcript has no words");
  if (word_count != count_words(text)) {
    throw ConfigError("transcript word_count " + std::to_string(word_count) +
                      " disagrees with text (" + std::to_string(count_words(text)) + " words)");
  }
  if (language_tag.empty()) throw ConfigError("transcript language_tag is empty");
}

Transcript load_transcript(const std::string& path, const std::string& language_tag) {
  std::string text = fsutil::read_text_file(path);
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
  Transcript t = Transcript::make(std::move(text), language_tag);
  t.validate();
  return t;
}

}  // namespace vcass::instruct
