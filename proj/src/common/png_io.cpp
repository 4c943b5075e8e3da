#include "vcass/common/png_io.hpp"

#include <png.h>

#include <csetjmp>
#include <cstring>
#include <stdexcept>

#include "vcass/common/errors.hpp"
#include "vcass/common/fsutil.hpp"

namespace vcass::png_io {

namespace {

struct MemWriter {
  std::vector<uint8_t>* out;
};

void mem_write(png_structp png, png_bytep data, png_size_t len) {
  auto* w = static_cast<MemWriter*>(png_get_io_ptr(png));
  w->out->insert(w->out->end(), data, data + len);
}

void mem_flush(png_structp) {}

struct MemReader {
  const uint8_t* data;
  size_t size;
  size_t pos;
};

void mem_read(png_structp png, png_bytep out, png_size_t len) {
  auto* r = static_cast<MemReader*>(png_get_io_ptr(png));
  if (r->pos + len > r->size) {
    png_error(png, "read past end");
  }
  std::memcpy(out, r->data + r->pos, len);
  r->pos += len;
}

}  // namespace

std::vector<uint8_t> encode_gray_png(const GrayImage& img) {
  if (img.width <= 0 || img.height <= 0 ||
      img.pixels.size() != static_cast<size_t>(img.width) * img.height) {
    throw std::invalid_argument("encode_gray_png: bad dimensions");
  }

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw std::runtime_error("png_create_info_struct failed");
  }

  std::vector<uint8_t> out;
  MemWriter writer{&out};

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("libpng write error");
  }

  png_set_write_fn(png, &writer, mem_write, mem_flush);
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width),
               static_cast<png_uint_32>(img.height), 8, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < img.height; ++y) {
    png_write_row(png, const_cast<png_bytep>(img.pixels.data() +
                                             static_cast<size_t>(y) * img.width));
  }
  png_write_end(png, info);
  png_destroy_write_struct(&png, &info);
  return out;
}

void write_gray_png(const std::filesystem::path& path, const GrayImage& img) {
  fsutil::atomic_write(path, encode_gray_png(img));
}

GrayImage decode_gray_png(const std::vector<uint8_t>& bytes) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
    throw CorruptMedia("not a PNG file");
  }

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw std::runtime_error("png_create_info_struct failed");
  }

  MemReader reader{bytes.data(), bytes.size(), 0};
  GrayImage img;
  std::vector<png_bytep> rows;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw CorruptMedia("libpng read error");
  }

  png_set_read_fn(png, &reader, mem_read);
  png_read_info(png, info);

  // normalize everything to 8-bit gray
  png_byte color = png_get_color_type(png, info);
  png_byte depth = png_get_bit_depth(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (depth == 16) png_set_strip_16(png);
  if (depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (color == PNG_COLOR_TYPE_RGB || color == PNG_COLOR_TYPE_RGB_ALPHA ||
      color == PNG_COLOR_TYPE_PALETTE) {
    png_set_rgb_to_gray_fixed(png, 1, -1, -1);  // rec709-ish default weights
  }
  png_read_update_info(png, info);

  img.width = static_cast<int>(png_get_image_width(png, info));
  img.height = static_cast<int>(png_get_image_height(png, info));
  img.pixels.resize(static_cast<size_t>(img.width) * img.height);
  rows.resize(static_cast<size_t>(img.height));
  for (int y = 0; y < img.height; ++y) {
    rows[static_cast<size_t>(y)] = img.pixels.data() + static_cast<size_t>(y) * img.width;
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

GrayImage read_gray_png(const std::filesystem::path& path) {
  return decode_gray_png(fsutil::read_binary_file(path));
}

}  // namespace vcass::png_io
