// Stage I: keyframes + prompt -> structured cue report, one backend call.
#pragma once

#include "vcass/backends/clients.hpp"
#include "vcass/media/keyframes.hpp"
#include "vcass/vision/prompt.hpp"
#include "vcass/vision/report.hpp"

namespace vcass::vision {

// Sends all keyframe stills plus the rendered prompt in a single request and
// parses the labeled-section response. source_hashes of the result equal the
// keyframe hashes in input order.
VisualCueReport analyze(const media::KeyframeSet& keyframes, const PromptTemplate& prompt,
                        const backends::VlmClient& client);

}  // namespace vcass::vision
