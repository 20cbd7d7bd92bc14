#pragma once

#include <cctype>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "tubal/error.hpp"
#include "tubal/io.hpp"
#include "tubal/tensor3.hpp"

namespace tubal {

// Binary netpbm images with maxval 255. A P5 (grey) image of height H and
// width W becomes an H x W x 1 tensor, a P6 (RGB) image an H x W x 3 tensor;
// entries are the raw byte values as doubles.

namespace detail {

inline std::size_t parse_pnm_field(const std::string &b, std::size_t &pos) {
  while (pos < b.size()) {
    if (b[pos] == '#') {
      while (pos < b.size() && b[pos] != '\n')
        ++pos;
    } else if (std::isspace(static_cast<unsigned char>(b[pos]))) {
      ++pos;
    } else {
      break;
    }
  }
  std::size_t start = pos;
  std::size_t v = 0;
  while (pos < b.size() && std::isdigit(static_cast<unsigned char>(b[pos]))) {
    v = v * 10 + static_cast<std::size_t>(b[pos] - '0');
    if (v > (1u << 24))
      throw FormatError("image header value too large");
    ++pos;
  }
  if (pos == start)
    throw FormatError("malformed image header");
  return v;
}

inline unsigned char quantize(double v) {
  if (!(v > 0.0))
    return 0; // also maps NaN to 0
  if (v >= 255.0)
    return 255;
  return static_cast<unsigned char>(std::round(v)); // half away from zero
}

} // namespace detail

inline Tensor3 decode_pnm(const std::string &b) {
  if (b.size() < 2 || b[0] != 'P' || (b[1] != '5' && b[1] != '6'))
    throw FormatError("unsupported image format (expected binary P5 or P6)");
  const std::size_t channels = b[1] == '6' ? 3 : 1;
  std::size_t pos = 2;
  const std::size_t width = detail::parse_pnm_field(b, pos);
  const std::size_t height = detail::parse_pnm_field(b, pos);
  const std::size_t maxval = detail::parse_pnm_field(b, pos);
  if (width == 0 || height == 0)
    throw FormatError("image has zero size");
  if (maxval != 255)
    throw FormatError("unsupported maxval " + std::to_string(maxval) +
                      " (only 8-bit 255 is supported)");
  if (pos >= b.size() || !std::isspace(static_cast<unsigned char>(b[pos])))
    throw FormatError("malformed image header");
  ++pos;
  const std::size_t count = width * height * channels;
  if (b.size() - pos < count)
    throw FormatError("image pixel data truncated");
  std::vector<double> v(count);
  for (std::size_t p = 0; p < count; ++p)
    v[p] = static_cast<unsigned char>(b[pos + p]);
  // Pixel order (row, column, channel) matches the tube-fastest layout.
  return Tensor3({height, width, channels}, std::move(v));
}

/// Clamps to [0, 255] and rounds half away from zero.
inline std::string encode_pnm(const Tensor3 &x) {
  if (x.n3() != 1 && x.n3() != 3)
    throw FormatError("images need 1 or 3 channels, got " +
                      std::to_string(x.n3()));
  std::string out = std::string(x.n3() == 3 ? "P6" : "P5") + "\n" +
                    std::to_string(x.n2()) + " " + std::to_string(x.n1()) +
                    "\n255\n";
  out.reserve(out.size() + x.size());
  for (double v : x.data())
    out.push_back(static_cast<char>(detail::quantize(v)));
  return out;
}

inline Tensor3 image_read(const std::filesystem::path &path) {
  return decode_pnm(read_file_bytes(path));
}

inline void image_write(const Tensor3 &x, const std::filesystem::path &path) {
  const auto bytes = encode_pnm(x);
  write_file_atomic(path, [&](std::ostream &os) {
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  });
}

} // namespace tubal
