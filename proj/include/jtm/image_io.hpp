#pragma once

// PNG (via libpng's simplified API) and binary PPM output for JtmImage.

#include <png.h>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "jtm/raster.hpp"

namespace jtm {

class ImageIoError : public Error {
 public:
  using Error::Error;
};

/// Canonical output name: `<sample_id>_<plane>_<level>.png`.
inline std::string jtm_file_name(std::string_view sample_id, Plane plane, EncodingLevel level,
                                 std::string_view extension = ".png") {
  std::string out(sample_id);
  out += '_';
  out += plane_name(plane);
  out += '_';
  out += level_name(level);
  out += extension;
  return out;
}

namespace detail {
inline png_image make_rgb_png_image(const JtmImage& img) {
  png_image desc;
  std::memset(&desc, 0, sizeof desc);
  desc.version = PNG_IMAGE_VERSION;
  desc.width = static_cast<png_uint_32>(img.width());
  desc.height = static_cast<png_uint_32>(img.height());
  desc.format = PNG_FORMAT_RGB;
  return desc;
}
}  // namespace detail

inline std::vector<std::uint8_t> encode_png(const JtmImage& img) {
  png_image desc = detail::make_rgb_png_image(img);
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&desc, nullptr, &size, 0, img.pixels().data(), 0, nullptr))
    throw ImageIoError(std::string("png size query failed: ") + desc.message);
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&desc, out.data(), &size, 0, img.pixels().data(), 0, nullptr))
    throw ImageIoError(std::string("png encode failed: ") + desc.message);
  out.resize(size);
  return out;
}

inline void write_png(const std::filesystem::path& path, const JtmImage& img) {
  auto bytes = encode_png(img);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ImageIoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ImageIoError("write failed: " + path.string());
}

/// Decoded 8-bit RGB pixels, row-major.
struct RgbRaster {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};

inline RgbRaster read_png(const std::filesystem::path& path) {
  png_image desc;
  std::memset(&desc, 0, sizeof desc);
  desc.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&desc, path.string().c_str()))
    throw ImageIoError("cannot read " + path.string() + ": " + desc.message);
  desc.format = PNG_FORMAT_RGB;
  RgbRaster out;
  out.width = static_cast<int>(desc.width);
  out.height = static_cast<int>(desc.height);
  out.pixels.resize(PNG_IMAGE_SIZE(desc));
  if (!png_image_finish_read(&desc, nullptr, out.pixels.data(), 0, nullptr)) {
    png_image_free(&desc);
    throw ImageIoError("decode failed for " + path.string() + ": " + desc.message);
  }
  return out;
}

inline std::string encode_ppm(const JtmImage& img) {
  std::string out = "P6\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  out.append(reinterpret_cast<const char*>(img.pixels().data()), img.pixels().size());
  return out;
}

inline void write_ppm(const std::filesystem::path& path, const JtmImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ImageIoError("cannot open " + path.string() + " for writing");
  const auto bytes = encode_ppm(img);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ImageIoError("write failed: " + path.string());
}

}  // namespace jtm
