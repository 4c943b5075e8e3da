#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace vcass::base64 {

std::string encode(const uint8_t* data, size_t len);
std::string encode(const std::vector<uint8_t>& bytes);
std::vector<uint8_t> decode(std::string_view text);

}  // namespace vcass::base64
