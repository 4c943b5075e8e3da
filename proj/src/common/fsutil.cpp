#include "vcass/common/fsutil.hpp"

#include <unistd.h>

#include <atomic>
#include <fstream>
#include <random>

#include "vcass/common/errors.hpp"

namespace fs = std::filesystem;

namespace vcass::fsutil {

namespace {
std::atomic<uint64_t> g_temp_seq{0};
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound("cannot open " + path.string());
  std::string out((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return out;
}

std::vector<uint8_t> read_binary_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound("cannot open " + path.string());
  std::vector<uint8_t> out((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return out;
}

fs::path sibling_temp_path(const fs::path& target) {
  uint64_t seq = g_temp_seq.fetch_add(1);
  fs::path dir = target.parent_path();
  if (dir.empty()) dir = ".";
  return dir / (target.filename().string() + ".tmp." + std::to_string(::getpid()) + "." +
                std::to_string(seq));
}

void atomic_write(const fs::path& path, const void* data, size_t len) {
  fs::path tmp = sibling_temp_path(path);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot create " + tmp.string());
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(len));
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("short write to " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

void atomic_write(const fs::path& path, const std::string& text) {
  atomic_write(path, text.data(), text.size());
}

void atomic_write(const fs::path& path, const std::vector<uint8_t>& bytes) {
  atomic_write(path, bytes.data(), bytes.size());
}

ScratchDir::ScratchDir(const std::string& prefix) {
  std::random_device rd;
  for (int attempt = 0; attempt < 64; ++attempt) {
    fs::path cand = fs::temp_directory_path() /
                    (prefix + "-" + std::to_string(::getpid()) + "-" + std::to_string(rd()));
    std::error_code ec;
    if (fs::create_directories(cand, ec) && !ec) {
      path_ = cand;
      return;
    }
  }
  throw std::runtime_error("ScratchDir: cannot create temp directory");
}

ScratchDir::~ScratchDir() {
  if (!keep_ && !path_.empty()) {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
}

}  // namespace vcass::fsutil
