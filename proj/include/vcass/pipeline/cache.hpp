// Content-addressed artifact cache. Objects live under <root>/objects/ keyed
// by digest; run directories materialize them as hard links (copy fallback)
// at <root>/<run_id>/<stage>/<key>.<ext>. All writes are temp-file plus
// atomic rename, so a crashed run never leaves a torn object.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace vcass::pipeline {

class Cache {
 public:
  explicit Cache(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path object_path(const std::string& key, const std::string& ext) const;

  std::optional<std::filesystem::path> lookup(const std::string& key,
                                              const std::string& ext) const;

  std::filesystem::path put_bytes(const std::string& key, const std::string& ext,
                                  const std::vector<uint8_t>& bytes);
  std::filesystem::path put_text(const std::string& key, const std::string& ext,
                                 const std::string& text);
  // Copies a produced file into the store (source may sit on another fs).
  std::filesystem::path put_file(const std::string& key, const std::string& ext,
                                 const std::filesystem::path& src);

  // <root>/<run_id>/<stage>/<key>.<ext> hard-linked to the object.
  std::filesystem::path link_into_run(const std::string& run_id, const std::string& stage,
                                      const std::string& key, const std::string& ext);

 private:
  std::filesystem::path root_;
};

struct GcResult {
  uint64_t bytes_before = 0;
  uint64_t bytes_after = 0;
  int runs_removed = 0;
  int objects_removed = 0;
};

// Deletes oldest run directories, then oldest orphaned objects, until the
// cache fits in max_bytes.
GcResult gc_cache(const std::filesystem::path& root, uint64_t max_bytes);

}  // namespace vcass::pipeline
