// Filesystem helpers: whole-file IO, atomic writes (temp + rename), and a
// scratch-directory guard. Atomic rename is the backbone of cache and
// compose output integrity.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace vcass::fsutil {

std::string read_text_file(const std::filesystem::path& path);
std::vector<uint8_t> read_binary_file(const std::filesystem::path& path);

// Writes to `<path>.tmp.<pid>.<seq>` in the same directory, then renames.
void atomic_write(const std::filesystem::path& path, const void* data, size_t len);
void atomic_write(const std::filesystem::path& path, const std::string& text);
void atomic_write(const std::filesystem::path& path, const std::vector<uint8_t>& bytes);

// Unique temp path in the same directory as `target` (rename stays on one
// filesystem).
std::filesystem::path sibling_temp_path(const std::filesystem::path& target);

// Creates a unique directory under the system temp dir, removed on
// destruction unless `keep()` was called.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& prefix = "vcass");
  ~ScratchDir();
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  void keep() { keep_ = true; }

 private:
  std::filesystem::path path_;
  bool keep_ = false;
};

}  // namespace vcass::fsutil
