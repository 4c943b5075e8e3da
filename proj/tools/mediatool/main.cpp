// vcass-mediatool: reference implementation of the external decoder/muxer
// contract used by the vcass pipeline. Operates on YUV4MPEG2 video, PCM WAV
// audio, and the VCAV1 composed container.
//
// Contract surface (see README for the argv templates):
//   probe <input>                           key=value stream facts on stdout
//   frame --input F --out-dir D --index N   writes D/frame_%06d.png
//   mux --video F --audio F.wav --out F [--pad-video-frames N]
//   demux --input F --video-out F --audio-out F
//   gen --pattern P --frames N --fps F --width W --height H --out F
//
// Exit codes: 0 ok, 2 bad arguments, 3 unreadable/corrupt media.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vcass/common/errors.hpp"
#include "vcass/common/fsutil.hpp"
#include "vcass/common/png_io.hpp"
#include "vcass/common/wav.hpp"
#include "vcass/media/avcontainer.hpp"
#include "vcass/media/y4m.hpp"

namespace fs = std::filesystem;
using namespace vcass;

namespace {

int cmd_probe(const std::string& input) {
  auto info = media::y4m::probe_file(input);
  if (info.frame_count() == 0) throw CorruptMedia("no frames in " + input);
  std::printf("format=y4m\n");
  std::printf("duration_s=%.6f\n", info.duration_s());
  std::printf("frame_count=%d\n", info.frame_count());
  std::printf("fps=%.6f\n", info.fps());
  std::printf("width=%d\n", info.width);
  std::printf("height=%d\n", info.height);
  return 0;
}

int cmd_frame(const std::string& input, const std::string& out_dir, int index) {
  auto info = media::y4m::probe_file(input);
  auto luma = media::y4m::read_luma(input, info, index);
  png_io::GrayImage img{info.width, info.height, std::move(luma)};
  char name[32];
  std::snprintf(name, sizeof(name), "frame_%06d.png", index);
  fs::create_directories(out_dir);
  png_io::write_gray_png(fs::path(out_dir) / name, img);
  return 0;
}

int cmd_mux(const std::string& video, const std::string& audio, const std::string& out,
            int pad_video_frames) {
  auto video_bytes = fsutil::read_binary_file(video);
  if (pad_video_frames > 0) {
    video_bytes = media::y4m::append_black_frames(video_bytes, pad_video_frames);
  }
  // write padded stream to a temp file so the generic prober sees the result
  auto audio_bytes = fsutil::read_binary_file(audio);
  audio::AudioClip clip = audio::validate_wav(audio_bytes);

  media::avc::Container c;
  c.video_format = "y4m";
  c.audio_format = "wav";
  {
    fsutil::ScratchDir scratch("vcass-mux");
    fs::path probe_path = scratch.path() / "padded.y4m";
    fsutil::atomic_write(probe_path, video_bytes);
    c.video_duration_s = media::y4m::probe_file(probe_path).duration_s();
  }
  c.audio_duration_s = clip.duration_s;
  c.video = std::move(video_bytes);
  c.audio = std::move(audio_bytes);
  fsutil::atomic_write(out, media::avc::write(c));
  return 0;
}

int cmd_demux(const std::string& input, const std::string& video_out,
              const std::string& audio_out) {
  auto c = media::avc::read_file(input);
  if (!video_out.empty()) fsutil::atomic_write(video_out, c.video);
  if (!audio_out.empty()) fsutil::atomic_write(audio_out, c.audio);
  std::printf("video_duration_s=%.6f\naudio_duration_s=%.6f\n", c.video_duration_s,
              c.audio_duration_s);
  return 0;
}

// Deterministic synthetic clips for tests and demos.
int cmd_gen(const std::string& pattern, int frames, int fps, int width, int height,
            const std::string& out) {
  media::y4m::Writer w;
  w.width = width;
  w.height = height;
  w.fps_num = fps;
  w.fps_den = 1;
  w.mono = true;

  std::string buf = w.header();
  std::vector<uint8_t> luma(static_cast<size_t>(width) * height);
  for (int f = 0; f < frames; ++f) {
    if (pattern == "alternating") {
      std::fill(luma.begin(), luma.end(), static_cast<uint8_t>(f % 2 ? 255 : 0));
    } else if (pattern == "gradient") {
      for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
          luma[static_cast<size_t>(y) * width + x] =
              static_cast<uint8_t>((x + y + f * 3) & 0xff);
        }
      }
    } else if (pattern == "blocks") {
      std::fill(luma.begin(), luma.end(), static_cast<uint8_t>(40 + 50 * ((f / 10) % 4)));
    } else {
      throw ConfigError("unknown pattern '" + pattern + "'");
    }
    buf += w.frame_payload(luma);
  }
  fsutil::atomic_write(out, buf);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vcass reference media tool (Y4M/WAV/VCAV1)"};
  app.require_subcommand(1);

  std::string input, out_dir, video, audio, out, video_out, audio_out, pattern = "gradient";
  int index = 0, pad_video_frames = 0, frames = 50, fps = 5, width = 64, height = 48;

  auto* probe = app.add_subcommand("probe", "print stream facts");
  probe->add_option("input", input)->required();

  auto* frame = app.add_subcommand("frame", "extract one frame as lossless PNG");
  frame->add_option("--input", input)->required();
  frame->add_option("--out-dir", out_dir)->required();
  frame->add_option("--index", index)->required();

  auto* mux = app.add_subcommand("mux", "combine video + audio into a VCAV1 file");
  mux->add_option("--video", video)->required();
  mux->add_option("--audio", audio)->required();
  mux->add_option("--out", out)->required();
  mux->add_option("--pad-video-frames", pad_video_frames);

  auto* demux = app.add_subcommand("demux", "split a VCAV1 file back into streams");
  demux->add_option("--input", input)->required();
  demux->add_option("--video-out", video_out);
  demux->add_option("--audio-out", audio_out);

  auto* gen = app.add_subcommand("gen", "generate a synthetic Y4M clip");
  gen->add_option("--pattern", pattern)->check(CLI::IsMember({"gradient", "alternating", "blocks"}));
  gen->add_option("--frames", frames);
  gen->add_option("--fps", fps);
  gen->add_option("--width", width);
  gen->add_option("--height", height);
  gen->add_option("--out", out)->required();

  try {
    app.parse(argc, argv);
    if (probe->parsed()) return cmd_probe(input);
    if (frame->parsed()) return cmd_frame(input, out_dir, index);
    if (mux->parsed()) return cmd_mux(video, audio, out, pad_video_frames);
    if (demux->parsed()) return cmd_demux(input, video_out, audio_out);
    if (gen->parsed()) return cmd_gen(pattern, frames, fps, width, height, out);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "vcass-mediatool: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "vcass-mediatool: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
