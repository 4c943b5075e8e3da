#include "vcass/backends/mock.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "vcass/common/digest.hpp"
#include "vcass/common/sections.hpp"
#include "vcass/common/wav.hpp"

namespace vcass::backends::mock {

namespace {

std::mutex g_mutex;
std::map<std::string, std::string> g_vlm_overrides;
std::map<std::string, std::string> g_llm_overrides;
struct SubstringOverride {
  std::string needle;
  std::string raw;
  int remaining;
};
std::vector<SubstringOverride> g_llm_substring_overrides;

const std::vector<std::string> kVisualEffects = {
    "soft golden lighting", "harsh light and heavy shadow", "gentle bokeh glow",
    "soft light and slight shadow", "high-contrast spotlights", "dim ambient light"};
const std::vector<std::string> kColorComposition = {
    "warm golden tones", "cool blue palette", "saturated festive colors",
    "muted gray palette", "rich red accents", "bright pastel highlights"};
const std::vector<std::string> kEnvironment = {
    "crowded outdoor square", "quiet empty street", "open park ground",
    "cramped interior room", "busy market stalls", "wide open plaza"};
const std::vector<std::string> kEmotionalTone = {
    "warmth", "festivity", "energy", "calm serenity", "tension", "hopefulness"};

int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return 0;
}

uint8_t key_byte(const std::string& hex_key, size_t i) {
  size_t pos = (2 * i) % (hex_key.size() ? hex_key.size() - 1 : 1);
  return static_cast<uint8_t>(hex_nibble(hex_key[pos]) * 16 + hex_nibble(hex_key[pos + 1]));
}

std::vector<std::string> pick_two(const std::vector<std::string>& vocab,
                                  const std::string& key, size_t byte_off) {
  std::vector<std::string> out;
  size_t a = key_byte(key, byte_off) % vocab.size();
  size_t b = key_byte(key, byte_off + 1) % vocab.size();
  out.push_back(vocab[a]);
  if (b != a) out.push_back(vocab[b]);
  return out;
}

bool contains_ci(const std::string& haystack, const std::string& needle) {
  std::string h = sections::to_lower(haystack);
  return h.find(sections::to_lower(needle)) != std::string::npos;
}

// ---- prompt-block parsing (the llm mock reads its own inputs back out of
// the rendered prompt) --------------------------------------------------

std::vector<std::string> block_items(const std::string& prompt, const std::string& header) {
  std::vector<std::string> items;
  std::istringstream in(prompt);
  std::string line;
  bool inside = false;
  while (std::getline(in, line)) {
    std::string stripped = sections::trim(line);
    if (stripped == header) {
      inside = true;
      continue;
    }
    if (!inside) continue;
    if (stripped.empty() || stripped[0] != '-') break;
    items.push_back(sections::trim(stripped.substr(1)));
  }
  return items;
}

std::vector<std::string> split_pipes(const std::string& s) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= s.size()) {
    size_t bar = s.find('|', start);
    std::string piece =
        sections::trim(bar == std::string::npos ? s.substr(start) : s.substr(start, bar - start));
    out.push_back(piece);
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  return out;
}

struct RuleRow {
  std::string id;
  std::string category;
  std::vector<std::string> keywords;
  std::string state;
};

std::vector<RuleRow> parse_rule_table(const std::string& prompt) {
  std::vector<RuleRow> rows;
  for (const auto& item : block_items(prompt, "RULES:")) {
    RuleRow row;
    for (const auto& field : split_pipes(item)) {
      size_t eq = field.find('=');
      if (eq == std::string::npos) continue;
      std::string key = field.substr(0, eq);
      std::string val = field.substr(eq + 1);
      if (key == "id") {
        row.id = val;
      } else if (key == "category") {
        row.category = val;
      } else if (key == "keywords") {
        std::istringstream ks(val);
        std::string kw;
        while (std::getline(ks, kw, ',')) {
          kw = sections::trim(kw);
          if (!kw.empty()) row.keywords.push_back(kw);
        }
      } else if (key == "state") {
        row.state = val;
      }
    }
    if (!row.id.empty()) rows.push_back(std::move(row));
  }
  return rows;
}

const RuleRow* first_matching_rule(const std::vector<RuleRow>& rules, const std::string& cue) {
  for (const auto& r : rules) {
    for (const auto& kw : r.keywords) {
      if (contains_ci(cue, kw)) return &r;
    }
  }
  return nullptr;
}

std::string taxonomy_category(const std::string& field) {
  if (field == "visual_effects") return "lighting";
  if (field == "color_composition") return "color";
  if (field == "environment") return "layout";
  return "other";
}

std::string infer_state_from_words(const std::string& cue) {
  static const std::vector<std::pair<std::vector<std::string>, std::string>> kToneWords = {
      {{"warm", "festiv", "joy", "cheer", "energy", "bright"}, "warm and joyful"},
      {{"calm", "seren", "peace", "smooth"}, "calm and peaceful"},
      {{"fear", "harsh", "gloom", "dark"}, "fearful"},
      {{"nervous", "tense", "sharp", "straight"}, "nervous"},
      {{"hope", "soft"}, "hopeful"},
  };
  for (const auto& [words, state] : kToneWords) {
    for (const auto& w : words) {
      if (contains_ci(cue, w)) return state;
    }
  }
  return {};
}

struct StyleRow {
  std::string tone, pitch, rhythm, volume;
};

StyleRow style_for_state(const std::string& state) {
  if (contains_ci(state, "calm")) return {"calm", "low, gentle", "slow, steady", "soft"};
  if (contains_ci(state, "warm") || contains_ci(state, "joy")) {
    return {"warm", "high, bright", "moderate, lively", "normal"};
  }
  if (contains_ci(state, "fear")) return {"tense", "low, hushed", "slow, halting", "soft"};
  if (contains_ci(state, "nervous")) return {"uneasy", "mid, tight", "fast, clipped", "normal"};
  if (contains_ci(state, "hope")) return {"hopeful", "mid, warm", "moderate, even", "normal"};
  return {state, "mid", "moderate", "normal"};
}

std::string do_classify(const std::string& prompt) {
  auto rules = parse_rule_table(prompt);
  std::vector<std::string> out;
  for (const auto& item : block_items(prompt, "CUES:")) {
    // "- <cue> (field: <taxonomy>)"
    std::string cue = item;
    std::string field;
    size_t open = item.rfind("(field: ");
    if (open != std::string::npos && item.back() == ')') {
      cue = sections::trim(item.substr(0, open));
      field = item.substr(open + 8, item.size() - open - 9);
    }
    const RuleRow* rule = first_matching_rule(rules, cue);
    std::string category = rule ? rule->category : taxonomy_category(field);
    out.push_back(cue + " | " + category);
  }
  return sections::render({{"classified_cues", out}});
}

std::string do_map_emotion(const std::string& prompt) {
  auto rules = parse_rule_table(prompt);
  std::vector<std::string> out;
  std::vector<std::string> seen_states;
  for (const auto& item : block_items(prompt, "CLASSIFIED:")) {
    std::string cue = split_pipes(item)[0];
    const RuleRow* rule = first_matching_rule(rules, cue);
    std::string state;
    std::string ids;
    if (rule) {
      state = rule->state;
      ids = rule->id;
    } else {
      state = infer_state_from_words(cue);
      ids = "llm-inferred";
    }
    if (state.empty()) continue;
    if (std::find(seen_states.begin(), seen_states.end(), state) != seen_states.end()) continue;
    seen_states.push_back(state);
    out.push_back(state + " | rules=" + ids);
  }
  return sections::render({{"emotional_states", out}});
}

std::string do_compose(const std::string& prompt) {
  std::vector<std::string> states;
  for (const auto& item : block_items(prompt, "STATES:")) {
    states.push_back(split_pipes(item)[0]);
  }
  if (states.empty()) {
    return sections::render(
        {{"tone", {}}, {"pitch", {}}, {"rhythm_pace", {}}, {"volume", {}}, {"summary", {}}});
  }
  StyleRow style = style_for_state(states[0]);
  std::string summary = "The scene feels " + states[0];
  if (states.size() > 1) summary += " and " + states[1];
  summary += ".";
  return sections::render({{"tone", {style.tone}},
                           {"pitch", {style.pitch}},
                           {"rhythm_pace", {style.rhythm}},
                           {"volume", {style.volume}},
                           {"summary", {summary}}});
}

}  // namespace

std::string vlm_key(const std::string& prompt, std::vector<std::string> frame_hashes) {
  std::sort(frame_hashes.begin(), frame_hashes.end());
  std::string material = prompt;
  material.push_back('\0');
  for (size_t i = 0; i < frame_hashes.size(); ++i) {
    if (i) material.push_back(',');
    material += frame_hashes[i];
  }
  return digest::sha256_hex(material);
}

std::string vlm_analyze(const std::string& prompt, const std::vector<std::string>& frame_hashes) {
  std::string key = vlm_key(prompt, frame_hashes);
  {
    std::lock_guard<std::mutex> lock(g_mutex);
    auto it = g_vlm_overrides.find(key);
    if (it != g_vlm_overrides.end()) return it->second;
  }
  return sections::render({
      {"visual_effects", pick_two(kVisualEffects, key, 0)},
      {"color_composition", pick_two(kColorComposition, key, 2)},
      {"environment", pick_two(kEnvironment, key, 4)},
      {"emotional_tone", pick_two(kEmotionalTone, key, 6)},
  });
}

std::string llm_key(const std::string& prompt) { return digest::sha256_hex(prompt); }

std::string llm_complete(const std::string& prompt) {
  {
    std::lock_guard<std::mutex> lock(g_mutex);
    auto it = g_llm_overrides.find(llm_key(prompt));
    if (it != g_llm_overrides.end()) return it->second;
    for (auto& ovr : g_llm_substring_overrides) {
      if (ovr.remaining > 0 && prompt.find(ovr.needle) != std::string::npos) {
        --ovr.remaining;
        return ovr.raw;
      }
    }
  }
  if (prompt.find("TASK: single-shot") != std::string::npos) {
    std::string classified = do_classify(prompt);
    // re-feed classification into the map step through a synthetic block
    std::string synth = prompt + "\nCLASSIFIED:\n";
    for (const auto& item : block_items(classified, "classified_cues:")) synth += "- " + item + "\n";
    std::string states = do_map_emotion(synth);
    std::string synth2 = prompt + "\nSTATES:\n";
    for (const auto& item : block_items(states, "emotional_states:")) synth2 += "- " + item + "\n";
    return classified + states + do_compose(synth2);
  }
  if (prompt.find("TASK: classify-cues") != std::string::npos) return do_classify(prompt);
  if (prompt.find("TASK: map-emotional-states") != std::string::npos) return do_map_emotion(prompt);
  if (prompt.find("TASK: compose-vocal-style") != std::string::npos) return do_compose(prompt);
  // unrecognized prompt: echo an empty but schema-valid answer
  return sections::render({{"summary", {}}});
}

double tts_duration_s(const std::string& instruction) {
  std::string text = instruction;
  size_t marker = instruction.find("Say: \"");
  if (marker != std::string::npos && instruction.size() > marker + 6 &&
      instruction.back() == '"') {
    text = instruction.substr(marker + 6, instruction.size() - marker - 7);
  }
  int words = 0;
  bool in_word = false;
  for (char c : text) {
    bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (!space && !in_word) ++words;
    in_word = !space;
  }
  return std::max(1.0, 0.06 * words);
}

std::vector<uint8_t> tts_synthesize(const std::string& instruction) {
  double freq = 220.0 + static_cast<double>(digest::fnv1a64(instruction) % 660);
  audio::AudioClip clip = audio::make_sine_clip(freq, tts_duration_s(instruction));
  return audio::write_wav(clip);
}

std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) {
  constexpr size_t kDim = 256;
  std::vector<std::vector<double>> out;
  out.reserve(texts.size());
  for (const auto& text : texts) {
    std::vector<double> v(kDim, 0.0);
    std::string token;
    auto flush = [&] {
      if (!token.empty()) {
        v[digest::fnv1a64(token) % kDim] += 1.0;
        token.clear();
      }
    };
    for (char c : text) {
      if (std::isalnum(static_cast<unsigned char>(c))) {
        token.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
      } else {
        flush();
      }
    }
    flush();
    double norm = 0.0;
    for (double x : v) norm += x * x;
    if (norm > 0.0) {
      norm = std::sqrt(norm);
      for (double& x : v) x /= norm;
    }
    out.push_back(std::move(v));
  }
  return out;
}

void register_vlm_response(const std::string& key, const std::string& raw) {
  std::lock_guard<std::mutex> lock(g_mutex);
  g_vlm_overrides[key] = raw;
}

void register_llm_response(const std::string& key, const std::string& raw) {
  std::lock_guard<std::mutex> lock(g_mutex);
  g_llm_overrides[key] = raw;
}

void register_llm_substring_response(const std::string& needle, const std::string& raw,
                                     int times) {
  std::lock_guard<std::mutex> lock(g_mutex);
  g_llm_substring_overrides.push_back({needle, raw, times});
}

void clear_overrides() {
  std::lock_guard<std::mutex> lock(g_mutex);
  g_vlm_overrides.clear();
  g_llm_overrides.clear();
  g_llm_substring_overrides.clear();
}

const std::vector<std::string>& vlm_vocab(const std::string& section) {
  if (section == "visual_effects") return kVisualEffects;
  if (section == "color_composition") return kColorComposition;
  if (section == "environment") return kEnvironment;
  return kEmotionalTone;
}

}  // namespace vcass::backends::mock
