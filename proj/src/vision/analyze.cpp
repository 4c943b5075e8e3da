#include "vcass/vision/analyze.hpp"

#include "vcass/common/errors.hpp"
#include "vcass/common/fsutil.hpp"

namespace vcass::vision {

VisualCueReport analyze(const media::KeyframeSet& keyframes, const PromptTemplate& prompt,
                        const backends::VlmClient& client) {
  if (keyframes.frames.empty()) {
    throw ConfigError("analyze requires at least one keyframe");
  }

  std::string rendered =
      prompt.render({{"frame_count", std::to_string(keyframes.frames.size())}});

  std::vector<backends::FramePayload> frames;
  frames.reserve(keyframes.frames.size());
  for (const auto& kf : keyframes.frames) {
    backends::FramePayload p;
    p.hash = kf.content_hash;
    if (!client.endpoint().is_mock()) {
      p.png_bytes = fsutil::read_binary_file(kf.image_path);
    }
    frames.push_back(std::move(p));
  }

  std::string raw = client.analyze(rendered, frames);
  VisualCueReport report = parse_report(raw);
  report.source_hashes = keyframes.content_hashes();
  return report;
}

}  // namespace vcass::vision
