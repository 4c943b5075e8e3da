#include "vcass/pipeline/cache.hpp"

#include <algorithm>
#include <system_error>

#include "vcass/common/errors.hpp"
#include "vcass/common/fsutil.hpp"

namespace fs = std::filesystem;

namespace vcass::pipeline {

Cache::Cache(fs::path root) : root_(std::move(root)) {
  fs::create_directories(root_ / "objects");
}

fs::path Cache::object_path(const std::string& key, const std::string& ext) const {
  return root_ / "objects" / (key + "." + ext);
}

std::optional<fs::path> Cache::lookup(const std::string& key, const std::string& ext) const {
  fs::path p = object_path(key, ext);
  std::error_code ec;
  if (fs::exists(p, ec)) return p;
  return std::nullopt;
}

fs::path Cache::put_bytes(const std::string& key, const std::string& ext,
                          const std::vector<uint8_t>& bytes) {
  fs::path p = object_path(key, ext);
  fsutil::atomic_write(p, bytes);
  return p;
}

fs::path Cache::put_text(const std::string& key, const std::string& ext,
                         const std::string& text) {
  fs::path p = object_path(key, ext);
  fsutil::atomic_write(p, text);
  return p;
}

fs::path Cache::put_file(const std::string& key, const std::string& ext, const fs::path& src) {
  return put_bytes(key, ext, fsutil::read_binary_file(src));
}

fs::path Cache::link_into_run(const std::string& run_id, const std::string& stage,
                              const std::string& key, const std::string& ext) {
  fs::path obj = object_path(key, ext);
  if (!fs::exists(obj)) throw UnknownRun("cache object missing: " + obj.string());
  fs::path dst = root_ / run_id / stage / (key + "." + ext);
  fs::create_directories(dst.parent_path());
  if (fs::exists(dst)) return dst;

  std::error_code ec;
  fs::create_hard_link(obj, dst, ec);
  if (ec) {
    fs::path tmp = fsutil::sibling_temp_path(dst);
    fs::copy_file(obj, tmp, fs::copy_options::overwrite_existing);
    fs::rename(tmp, dst);
  }
  return dst;
}

namespace {

struct Entry {
  fs::path path;
  fs::file_time_type mtime;
  uint64_t bytes;
};

uint64_t tree_size(const fs::path& p) {
  uint64_t total = 0;
  std::error_code ec;
  if (fs::is_directory(p, ec)) {
    for (const auto& e : fs::recursive_directory_iterator(p, ec)) {
      if (e.is_regular_file(ec)) total += e.file_size(ec);
    }
  } else if (fs::is_regular_file(p, ec)) {
    total = fs::file_size(p, ec);
  }
  return total;
}

}  // namespace

GcResult gc_cache(const fs::path& root, uint64_t max_bytes) {
  GcResult result;
  if (!fs::exists(root)) return result;
  result.bytes_before = tree_size(root);
  uint64_t current = result.bytes_before;

  if (current > max_bytes) {
    // oldest runs first
    std::vector<Entry> runs;
    std::error_code ec;
    for (const auto& e : fs::directory_iterator(root, ec)) {
      if (e.is_directory() && e.path().filename() != "objects") {
        runs.push_back({e.path(), fs::last_write_time(e.path(), ec), tree_size(e.path())});
      }
    }
    std::sort(runs.begin(), runs.end(), [](const Entry& a, const Entry& b) {
      return a.mtime < b.mtime;
    });
    for (const auto& run : runs) {
      if (current <= max_bytes) break;
      std::error_code rm_ec;
      fs::remove_all(run.path, rm_ec);
      if (!rm_ec) {
        current -= std::min(current, run.bytes);
        ++result.runs_removed;
      }
    }
  }

  if (current > max_bytes) {
    // then orphaned objects (no surviving run links them: hard_link_count 1)
    std::vector<Entry> objects;
    std::error_code ec;
    for (const auto& e : fs::directory_iterator(root / "objects", ec)) {
      if (!e.is_regular_file()) continue;
      if (fs::hard_link_count(e.path(), ec) > 1) continue;
      objects.push_back({e.path(), fs::last_write_time(e.path(), ec), e.file_size(ec)});
    }
    std::sort(objects.begin(), objects.end(), [](const Entry& a, const Entry& b) {
      return a.mtime < b.mtime;
    });
    for (const auto& obj : objects) {
      if (current <= max_bytes) break;
      std::error_code rm_ec;
      if (fs::remove(obj.path, rm_ec)) {
        current -= std::min(current, obj.bytes);
        ++result.objects_removed;
      }
    }
  }

  result.bytes_after = tree_size(root);
  return result;
}

}  // namespace vcass::pipeline
