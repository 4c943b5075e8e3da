#include "vcass/instruct/builder.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "vcass/common/digest.hpp"
#include "vcass/common/errors.hpp"
#include "vcass/common/sections.hpp"

namespace vcass::instruct {

using nlohmann::json;

namespace {

const std::vector<std::string> kStepLabels = {"classified_cues", "emotional_states", "tone",
                                              "pitch", "rhythm_pace", "volume", "summary"};

std::string cues_block(const vision::VisualCueReport& report) {
  std::string out = "CUES:\n";
  auto add = [&](const std::vector<std::string>& cues, const char* field) {
    for (const auto& c : cues) out += "- " + c + " (field: " + std::string(field) + ")\n";
  };
  add(report.visual_effects, "visual_effects");
  add(report.color_composition, "color_composition");
  add(report.environment, "environment");
  add(report.emotional_tone, "emotional_tone");
  return out;
}

// Compact table of the distinct matched rules, in match order. This is the
// concrete form in which the expert knowledge reaches the model.
std::string rule_table_block(const std::vector<kb::MatchResult>& matches,
                             const kb::KnowledgeBase& knowledge) {
  std::string out = "RULES:\n";
  std::set<std::string> seen;
  for (const auto& m : matches) {
    if (!seen.insert(m.rule_id).second) continue;
    const kb::MappingRule* rule = knowledge.find(m.rule_id);
    if (!rule) continue;  // matches produced against another KB; skip quietly
    out += "- id=" + rule->id + " | category=" + kb::to_string(rule->cue_category) +
           " | keywords=";
    for (size_t i = 0; i < rule->cue_keywords.size(); ++i) {
      if (i) out += ",";
      out += rule->cue_keywords[i];
    }
    out += " | state=" + rule->emotional_state + "\n";
  }
  return out;
}

std::string classified_block(const std::vector<std::pair<std::string, std::string>>& classified) {
  std::string out = "CLASSIFIED:\n";
  for (const auto& [cue, category] : classified) out += "- " + cue + " | " + category + "\n";
  return out;
}

std::string states_block(const std::vector<EmotionalState>& states) {
  std::string out = "STATES:\n";
  for (const auto& s : states) {
    out += "- " + s.state + " | rules=";
    for (size_t i = 0; i < s.rule_ids.size(); ++i) {
      if (i) out += ",";
      out += s.rule_ids[i];
    }
    out += "\n";
  }
  return out;
}

std::string transcript_block(const Transcript& transcript) {
  return "TRANSCRIPT <<<\n" + transcript.text + "\n>>>";
}

std::vector<std::string> split_pipes(const std::string& s) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= s.size()) {
    size_t bar = s.find('|', start);
    out.push_back(sections::trim(bar == std::string::npos ? s.substr(start)
                                                          : s.substr(start, bar - start)));
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  return out;
}

// step-output interpretation; throws InstructionInvalid on shape violations
// so the caller can spend its repair retry

std::vector<std::pair<std::string, std::string>> interpret_classify(
    const sections::ParseResult& parsed) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& item : parsed.by_label.at("classified_cues")) {
    auto parts = split_pipes(item);
    if (parts.size() != 2 || parts[0].empty()) {
      throw InstructionInvalid("classify step: expected '<cue> | <category>', got '" + item + "'");
    }
    try {
      kb::cue_category_from_string(parts[1]);
    } catch (const ConfigError& e) {
      throw InstructionInvalid(std::string("classify step: ") + e.what());
    }
    out.emplace_back(parts[0], sections::to_lower(parts[1]));
  }
  return out;
}

std::vector<EmotionalState> interpret_map(const sections::ParseResult& parsed,
                                          const std::set<std::string>& known_rule_ids) {
  std::vector<EmotionalState> out;
  for (const auto& item : parsed.by_label.at("emotional_states")) {
    auto parts = split_pipes(item);
    if (parts.empty() || parts[0].empty()) {
      throw InstructionInvalid("map step: empty state in '" + item + "'");
    }
    EmotionalState st;
    st.state = parts[0];
    if (parts.size() > 1 && parts[1].rfind("rules=", 0) == 0) {
      std::istringstream ids(parts[1].substr(6));
      std::string id;
      while (std::getline(ids, id, ',')) {
        id = sections::trim(id);
        if (!id.empty()) st.rule_ids.push_back(id);
      }
    }
    if (st.rule_ids.empty()) st.rule_ids.push_back(kLlmInferredTag);
    for (const auto& id : st.rule_ids) {
      if (id != kLlmInferredTag && !known_rule_ids.count(id)) {
        throw InstructionInvalid("map step: unknown rule id '" + id + "'");
      }
    }
    out.push_back(std::move(st));
  }
  return out;
}

struct ComposeResult {
  kb::VocalStyle style;
  std::string summary;
};

ComposeResult interpret_compose(const sections::ParseResult& parsed) {
  ComposeResult out;
  auto first = [&](const char* label) -> std::string {
    const auto& items = parsed.by_label.at(label);
    return items.empty() ? std::string() : items.front();
  };
  out.style.tone = first("tone");
  try {
    out.style.set_pitch(first("pitch"));
    out.style.set_pace(first("rhythm_pace"));
    out.style.set_volume(first("volume"));
  } catch (const ConfigError& e) {
    throw InstructionInvalid(std::string("compose step: ") + e.what());
  }
  out.summary = first("summary");
  return out;
}

}  // namespace

std::string style_sentence(const kb::VocalStyle& style) {
  const kb::VocalStyle& s = style.any_set() ? style : kb::VocalStyle::neutral();
  std::vector<std::string> parts;
  parts.push_back(s.tone.empty() ? "Speak" : "Speak in a " + s.tone + " tone");
  if (s.pitch != kb::PitchLevel::kUnset) parts.push_back("with a " + s.pitch_text() + " pitch");
  if (s.rhythm_pace != kb::PaceLevel::kUnset) parts.push_back("at a " + s.pace_text() + " pace");
  if (s.volume != kb::VolumeLevel::kUnset) parts.push_back("at a " + s.volume_text() + " volume");
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ", ";
    out += parts[i];
  }
  return out;
}

std::string render_instruction(const kb::VocalStyle& style, const std::string& summary,
                               const Transcript& transcript) {
  std::string out = style_sentence(style) + ". ";
  if (!summary.empty()) out += summary + " ";
  out += "Say: \"" + transcript.text + "\"";
  return out;
}

SpeechInstruction neutral_instruction(const Transcript& transcript) {
  SpeechInstruction out;
  out.transcript = transcript;
  out.style_directives = kb::VocalStyle::neutral();
  out.rendered_instruction = render_instruction(out.style_directives, "", transcript);
  out.validate();
  return out;
}

void SpeechInstruction::validate() const {
  transcript.validate();
  if (!style_directives.any_set()) {
    throw InstructionInvalid("no style directive is set");
  }
  if (rendered_instruction.find(transcript.text) == std::string::npos) {
    throw InstructionInvalid("rendered instruction does not contain the transcript verbatim");
  }
}

std::string CotTrace::to_json() const {
  json step1 = json::array();
  for (const auto& [cue, category] : step1_classified_cues) {
    step1.push_back({{"cue", cue}, {"category", category}});
  }
  json step2 = json::array();
  for (const auto& s : step2_emotional_states) {
    step2.push_back({{"state", s.state}, {"rule_ids", s.rule_ids}});
  }
  json doc = {{"step1_classified_cues", step1},
              {"step2_emotional_states", step2},
              {"step3_raw", step3_raw},
              {"backend_calls", backend_calls}};
  return doc.dump(2);
}

CotTrace CotTrace::from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseFailure(std::string("trace JSON: ") + e.what());
  }
  CotTrace t;
  try {
    for (const auto& item : doc.at("step1_classified_cues")) {
      t.step1_classified_cues.emplace_back(item.at("cue").get<std::string>(),
                                           item.at("category").get<std::string>());
    }
    for (const auto& item : doc.at("step2_emotional_states")) {
      EmotionalState s;
      s.state = item.at("state").get<std::string>();
      s.rule_ids = item.at("rule_ids").get<std::vector<std::string>>();
      t.step2_emotional_states.push_back(std::move(s));
    }
    t.step3_raw = doc.at("step3_raw").get<std::string>();
    t.backend_calls = doc.at("backend_calls").get<int>();
  } catch (const json::exception& e) {
    throw ParseFailure(std::string("trace JSON missing field: ") + e.what());
  }
  return t;
}

std::string CotTrace::trace_id() const { return digest::sha256_hex16(to_json()); }

std::string SpeechInstruction::to_json() const {
  json doc = {
      {"transcript",
       {{"text", transcript.text},
        {"language_tag", transcript.language_tag},
        {"word_count", transcript.word_count}}},
      {"style_directives",
       {{"tone", style_directives.tone},
        {"pitch", style_directives.pitch_text()},
        {"rhythm_pace", style_directives.pace_text()},
        {"volume", style_directives.volume_text()}}},
      {"emotional_summary", emotional_summary},
      {"rendered_instruction", rendered_instruction},
      {"trace_ref", trace_ref},
  };
  return doc.dump(2);
}

SpeechInstruction SpeechInstruction::from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseFailure(std::string("instruction JSON: ") + e.what());
  }
  SpeechInstruction out;
  try {
    out.transcript.text = doc.at("transcript").at("text").get<std::string>();
    out.transcript.language_tag = doc.at("transcript").at("language_tag").get<std::string>();
    out.transcript.word_count = doc.at("transcript").at("word_count").get<int>();
    const auto& style = doc.at("style_directives");
    out.style_directives.tone = style.at("tone").get<std::string>();
    out.style_directives.set_pitch(style.at("pitch").get<std::string>());
    out.style_directives.set_pace(style.at("rhythm_pace").get<std::string>());
    out.style_directives.set_volume(style.at("volume").get<std::string>());
    out.emotional_summary = doc.at("emotional_summary").get<std::string>();
    out.rendered_instruction = doc.at("rendered_instruction").get<std::string>();
    out.trace_ref = doc.at("trace_ref").get<std::string>();
  } catch (const json::exception& e) {
    throw ParseFailure(std::string("instruction JSON missing field: ") + e.what());
  }
  return out;
}

std::pair<SpeechInstruction, CotTrace> build_instruction(
    const vision::VisualCueReport& report, const std::vector<kb::MatchResult>& matches,
    const kb::KnowledgeBase& knowledge, const Transcript& transcript, const CotPrompts& prompts,
    const backends::LlmClient& client, const BuildOptions& options) {
  transcript.validate();

  std::set<std::string> known_rule_ids;
  for (const auto& m : matches) known_rule_ids.insert(m.rule_id);

  const std::string cues = cues_block(report);
  const std::string rules = rule_table_block(matches, knowledge);
  const std::string transcript_b = transcript_block(transcript);

  CotTrace trace;
  int repair_budget = 1;

  // Runs one step; on an invalid answer, spends the shared repair retry by
  // re-prompting with the validation error appended.
  auto run_step = [&](const vision::PromptTemplate& tmpl,
                      const std::map<std::string, std::string>& bindings,
                      auto interpret) {
    std::string prompt = tmpl.render(bindings);
    std::string raw = client.complete(prompt);
    ++trace.backend_calls;
    try {
      return std::make_pair(interpret(sections::parse(raw, kStepLabels)), raw);
    } catch (const InstructionInvalid& first_error) {
      if (repair_budget <= 0) throw;
      --repair_budget;
      std::string repair_prompt = prompt +
                                  "\n\nYour previous answer was invalid: " + first_error.what() +
                                  "\nAnswer again in the required shape.";
      raw = client.complete(repair_prompt);
      ++trace.backend_calls;
      return std::make_pair(interpret(sections::parse(raw, kStepLabels)), raw);
    }
  };

  ComposeResult composed;
  if (options.single_shot) {
    if (!prompts.single_shot) throw ConfigError("single-shot mode requires its prompt template");
    auto [all, raw] = run_step(
        *prompts.single_shot,
        {{"cues", cues}, {"rule_table", rules}, {"transcript_block", transcript_b}},
        [&](const sections::ParseResult& parsed) {
          trace.step1_classified_cues = interpret_classify(parsed);
          trace.step2_emotional_states = interpret_map(parsed, known_rule_ids);
          return interpret_compose(parsed);
        });
    composed = all;
    trace.step3_raw = raw;
  } else {
    auto [classified, raw1] =
        run_step(prompts.classify, {{"cues", cues}, {"rule_table", rules}}, interpret_classify);
    trace.step1_classified_cues = classified;

    auto [states, raw2] = run_step(
        prompts.map_emotion,
        {{"classified", classified_block(classified)}, {"rule_table", rules}},
        [&](const sections::ParseResult& parsed) { return interpret_map(parsed, known_rule_ids); });
    trace.step2_emotional_states = states;

    auto [style_summary, raw3] = run_step(
        prompts.compose,
        {{"states", states_block(states)}, {"transcript_block", transcript_b}},
        interpret_compose);
    composed = style_summary;
    trace.step3_raw = raw3;
  }

  // zero-evidence fallback: never invent affect the steps did not surface
  if (!composed.style.any_set()) {
    composed.style = kb::VocalStyle::neutral();
    composed.summary.clear();
  }

  SpeechInstruction instruction;
  instruction.transcript = transcript;
  instruction.style_directives = composed.style;
  instruction.emotional_summary = composed.summary;
  instruction.rendered_instruction =
      render_instruction(composed.style, composed.summary, transcript);
  instruction.trace_ref = trace.trace_id();
  instruction.validate();
  return {instruction, trace};
}

}  // namespace vcass::instruct
