// Content hashing helpers. SHA-256 backs all artifact identity and cache
// keys; FNV-1a is used where a cheap stable token hash is enough (mock
// embedder buckets). std::hash is not stable across implementations, so it
// is never used for anything persisted.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace vcass::digest {

std::string sha256_hex(const void* data, size_t len);
std::string sha256_hex(std::string_view text);
std::string sha256_hex(const std::vector<uint8_t>& bytes);
std::string sha256_hex_file(const std::filesystem::path& path);

// First 16 hex chars; used for run ids and cache keys where a shorter
// stable token is preferred in paths.
std::string sha256_hex16(std::string_view text);

constexpr uint64_t kFnvOffset = 1469598103934665603ull;
constexpr uint64_t kFnvPrime = 1099511628211ull;

constexpr uint64_t fnv1a64(std::string_view s) {
  uint64_t h = kFnvOffset;
  for (unsigned char c : s) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

}  // namespace vcass::digest
