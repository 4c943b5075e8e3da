#include "vcass/common/digest.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <stdexcept>

#include "vcass/common/errors.hpp"

namespace vcass::digest {

namespace {

std::string to_hex(const unsigned char* buf, unsigned int len) {
  static const char* kHex = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[buf[i] >> 4]);
    out.push_back(kHex[buf[i] & 0xf]);
  }
  return out;
}

struct EvpCtx {
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  ~EvpCtx() { EVP_MD_CTX_free(ctx); }
};

}  // namespace

std::string sha256_hex(const void* data, size_t len) {
  EvpCtx c;
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int md_len = 0;
  if (!c.ctx || EVP_DigestInit_ex(c.ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(c.ctx, data, len) != 1 ||
      EVP_DigestFinal_ex(c.ctx, md, &md_len) != 1) {
    throw std::runtime_error("sha256: EVP digest failed");
  }
  return to_hex(md, md_len);
}

std::string sha256_hex(std::string_view text) {
  return sha256_hex(text.data(), text.size());
}

std::string sha256_hex(const std::vector<uint8_t>& bytes) {
  return sha256_hex(bytes.data(), bytes.size());
}

std::string sha256_hex_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound("cannot open " + path.string());
  EvpCtx c;
  if (!c.ctx || EVP_DigestInit_ex(c.ctx, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256: EVP init failed");
  }
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    std::streamsize got = in.gcount();
    if (got > 0 && EVP_DigestUpdate(c.ctx, buf.data(), static_cast<size_t>(got)) != 1) {
      throw std::runtime_error("sha256: EVP update failed");
    }
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int md_len = 0;
  if (EVP_DigestFinal_ex(c.ctx, md, &md_len) != 1) {
    throw std::runtime_error("sha256: EVP final failed");
  }
  return to_hex(md, md_len);
}

std::string sha256_hex16(std::string_view text) {
  return sha256_hex(text).substr(0, 16);
}

}  // namespace vcass::digest
