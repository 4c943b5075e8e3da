// Minimal lossless still-image IO over libpng. The decoder contract writes
// 8-bit grayscale PNGs of the luma plane; readers accept gray or RGB(A)
// inputs and reduce to 8-bit gray, which is the frame-difference domain.
#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace vcass::png_io {

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> pixels;  // row-major, width*height
};

std::vector<uint8_t> encode_gray_png(const GrayImage& img);
void write_gray_png(const std::filesystem::path& path, const GrayImage& img);

GrayImage decode_gray_png(const std::vector<uint8_t>& bytes);
GrayImage read_gray_png(const std::filesystem::path& path);

}  // namespace vcass::png_io
