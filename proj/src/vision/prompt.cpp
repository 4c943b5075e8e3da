#include "vcass/vision/prompt.hpp"

#include "vcass/common/errors.hpp"
#include "vcass/common/fsutil.hpp"
#include "vcass/common/subprocess.hpp"

namespace vcass::vision {

std::string cot_step_name(CotStep step) {
  switch (step) {
    case CotStep::kClassify:
      return "classify";
    case CotStep::kMapEmotion:
      return "map_emotion";
    case CotStep::kCompose:
      return "compose";
    case CotStep::kSingleShot:
      return "single_shot";
  }
  return "unknown";
}

std::string PromptTemplate::render(const std::map<std::string, std::string>& bindings) const {
  // reuse the argv renderer's strict placeholder semantics on a single token
  auto rendered = subprocess::render_argv({text}, bindings);
  return rendered[0];
}

PromptTemplate load_prompt(const std::filesystem::path& dir, const std::string& template_id) {
  auto vpos = template_id.rfind(".v");
  if (vpos == std::string::npos) {
    throw ConfigError("prompt template id '" + template_id + "' lacks a .v<N> version suffix");
  }
  int version = 0;
  try {
    version = std::stoi(template_id.substr(vpos + 2));
  } catch (const std::exception&) {
    throw ConfigError("prompt template id '" + template_id + "' has a non-numeric version");
  }

  std::filesystem::path file = dir / (template_id + ".txt");
  if (!std::filesystem::exists(file)) {
    throw ConfigError("prompt template file missing: " + file.string());
  }
  PromptTemplate t;
  t.template_id = template_id;
  t.text = fsutil::read_text_file(file);
  t.version = version;
  if (t.text.empty()) throw ConfigError("prompt template is empty: " + file.string());
  return t;
}

}  // namespace vcass::vision
