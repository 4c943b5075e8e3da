#include "vcass/media/probe.hpp"

#include <unistd.h>

#include <cmath>
#include <sstream>

#include "vcass/common/errors.hpp"
#include "vcass/common/subprocess.hpp"

namespace fs = std::filesystem;

namespace vcass::media {

namespace {

// The bundled reference tool normally sits next to whichever vcass binary is
// running; fall back to PATH otherwise.
std::string locate_sibling_tool(const std::string& name) {
  char buf[4096];
  ssize_t n = ::readlink("/proc/self/exe", buf, sizeof(buf) - 1);
  if (n > 0) {
    buf[n] = '\0';
    fs::path sibling = fs::path(buf).parent_path() / name;
    std::error_code ec;
    if (fs::exists(sibling, ec)) return sibling.string();
  }
  return name;
}

std::map<std::string, std::string> parse_kv(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    size_t eq = line.find('=');
    if (eq != std::string::npos) {
      kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
  }
  return kv;
}

}  // namespace

MediaToolConfig MediaToolConfig::reference_defaults() {
  std::string tool = locate_sibling_tool("vcass-mediatool");
  MediaToolConfig cfg;
  cfg.probe_argv = {tool, "probe", "{input}"};
  cfg.frame_argv = {tool, "frame", "--input", "{input}", "--out-dir", "{out_dir}",
                    "--index", "{frame_index}"};
  cfg.mux_argv = {tool, "mux", "--video", "{video}", "--audio", "{audio}", "--out", "{out}",
                  "--pad-video-frames", "{video_pad_frames}"};
  return cfg;
}

void VideoRef::validate() const {
  if (frame_count < 1) throw ConfigError("VideoRef: frame_count must be >= 1");
  if (fps <= 0.0) throw ConfigError("VideoRef: fps must be positive");
  if (duration_s < 0.0) throw ConfigError("VideoRef: negative duration");
  if (std::abs(duration_s * fps - static_cast<double>(frame_count)) > 1.0 + 1e-6) {
    throw ConfigError("VideoRef: duration*fps disagrees with frame_count by more than one frame");
  }
}

VideoRef probe(const fs::path& path, const MediaToolConfig& tool) {
  if (!fs::exists(path)) throw FileNotFound(path.string());
  if (tool.probe_argv.empty()) throw ConfigError("probe argv template is empty");

  auto argv = subprocess::render_argv(tool.probe_argv, {{"input", path.string()}});
  auto result = subprocess::run(argv);
  if (result.exit_code != 0) {
    throw CorruptMedia("probe of " + path.string() + " failed (exit " +
                       std::to_string(result.exit_code) + "): " + result.err);
  }

  auto kv = parse_kv(result.out);
  VideoRef ref;
  ref.path = path;
  try {
    ref.duration_s = std::stod(kv.at("duration_s"));
    ref.frame_count = std::stoll(kv.at("frame_count"));
    ref.fps = std::stod(kv.at("fps"));
  } catch (const std::exception&) {
    throw CorruptMedia("unparseable probe output for " + path.string() + ": " + result.out);
  }
  ref.validate();
  return ref;
}

}  // namespace vcass::media
