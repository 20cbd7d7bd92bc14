#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "tubal/error.hpp"
#include "tubal/tensor3.hpp"

namespace tubal {

// T3D1 layout: "T3D1", then n1, n2, n3 as little-endian uint64, then the
// n1*n2*n3 entries as little-endian IEEE doubles in tube-fastest order.
inline constexpr std::array<char, 4> kT3dMagic{'T', '3', 'D', '1'};
inline constexpr std::size_t kT3dHeaderBytes = 4 + 3 * 8;

namespace detail {

inline std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little)
    return v;
  std::uint64_t r = 0;
  for (int b = 0; b < 8; ++b)
    r |= ((v >> (8 * b)) & 0xffu) << (8 * (7 - b));
  return r;
}

inline void put_u64(std::string &buf, std::uint64_t v) {
  v = to_little_endian(v);
  char bytes[8];
  std::memcpy(bytes, &v, 8);
  buf.append(bytes, 8);
}

inline std::uint64_t get_u64(const char *p) {
  std::uint64_t v;
  std::memcpy(&v, p, 8);
  return to_little_endian(v);
}

inline double get_f64(const char *p) {
  return std::bit_cast<double>(get_u64(p));
}

} // namespace detail

/// Writes through a temporary file in the same directory and renames it into
/// place, so readers never observe a partial file.
inline void write_file_atomic(const std::filesystem::path &path,
                              const std::function<void(std::ostream &)> &body) {
  namespace fs = std::filesystem;
  const fs::path tmp = path.string() + ".partial";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os)
      throw IoError("cannot open " + tmp.string() + " for writing");
    body(os);
    os.flush();
    if (!os) {
      os.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("write to " + tmp.string() + " failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move " + tmp.string() + " to " + path.string());
  }
}

inline std::string encode_t3d(const Tensor3 &x) {
  std::string buf(kT3dMagic.begin(), kT3dMagic.end());
  buf.reserve(kT3dHeaderBytes + 8 * x.size());
  detail::put_u64(buf, x.n1());
  detail::put_u64(buf, x.n2());
  detail::put_u64(buf, x.n3());
  for (double v : x.data())
    detail::put_u64(buf, std::bit_cast<std::uint64_t>(v));
  return buf;
}

/// Parses a T3D1 byte string. Rejects bad magic, truncated payloads,
/// trailing bytes and non-finite entries.
inline Tensor3 decode_t3d(const std::string &bytes) {
  if (bytes.size() < kT3dHeaderBytes ||
      std::memcmp(bytes.data(), kT3dMagic.data(), 4) != 0)
    throw FormatError("not a T3D1 tensor (bad magic or short header)");
  const Dims d{detail::get_u64(bytes.data() + 4),
               detail::get_u64(bytes.data() + 12),
               detail::get_u64(bytes.data() + 20)};
  if (d.n1 == 0 || d.n2 == 0 || d.n3 == 0)
    throw FormatError("T3D1 dims must be positive, got " + to_string(d));
  const std::size_t count = d.n1 * d.n2 * d.n3;
  if (count / d.n1 / d.n2 != d.n3 ||
      bytes.size() != kT3dHeaderBytes + 8 * count)
    throw FormatError("T3D1 payload length does not match dims " +
                      to_string(d));
  std::vector<double> v(count);
  for (std::size_t p = 0; p < count; ++p)
    v[p] = detail::get_f64(bytes.data() + kT3dHeaderBytes + 8 * p);
  Tensor3 x(d, std::move(v));
  if (!x.all_finite())
    throw FormatError("T3D1 tensor contains NaN or Inf");
  return x;
}

inline std::string read_file_bytes(const std::filesystem::path &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  if (is.bad())
    throw IoError("read of " + path.string() + " failed");
  return ss.str();
}

inline Tensor3 read_t3d(const std::filesystem::path &path) {
  return decode_t3d(read_file_bytes(path));
}

inline void write_t3d(const std::filesystem::path &path, const Tensor3 &x) {
  const auto bytes = encode_t3d(x);
  write_file_atomic(path, [&](std::ostream &os) {
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  });
}

/// Slice source reading individual slices straight from a T3D1 file.
/// A horizontal slice is one contiguous block; a lateral slice is n1 reads
/// of one tube each.
class T3dFileSlices {
public:
  explicit T3dFileSlices(const std::filesystem::path &path)
      : path_(path), is_(path, std::ios::binary) {
    if (!is_)
      throw IoError("cannot open " + path.string());
    char header[kT3dHeaderBytes];
    is_.read(header, kT3dHeaderBytes);
    if (!is_ || std::memcmp(header, kT3dMagic.data(), 4) != 0)
      throw FormatError(path.string() + " is not a T3D1 tensor");
    dims_ = {detail::get_u64(header + 4), detail::get_u64(header + 12),
             detail::get_u64(header + 20)};
    if (dims_.n1 == 0 || dims_.n2 == 0 || dims_.n3 == 0)
      throw FormatError("T3D1 dims must be positive");
    is_.seekg(0, std::ios::end);
    const auto size = static_cast<std::uint64_t>(is_.tellg());
    if (size != kT3dHeaderBytes + 8 * dims_.size())
      throw FormatError(path.string() + ": payload length does not match dims");
  }

  Dims dims() const { return dims_; }

  Matrix lateral_slice(std::size_t j) const {
    detail::check_index(j, dims_.n2, "lateral slice");
    Matrix m(dims_.n1, dims_.n3);
    std::lock_guard lock(mutex_);
    std::vector<char> buf(8 * dims_.n3);
    for (std::size_t i = 0; i < dims_.n1; ++i) {
      read_at((i * dims_.n2 + j) * dims_.n3, buf);
      for (std::size_t k = 0; k < dims_.n3; ++k)
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
            checked(detail::get_f64(buf.data() + 8 * k));
    }
    return m;
  }

  Matrix horizontal_slice(std::size_t i) const {
    detail::check_index(i, dims_.n1, "horizontal slice");
    Matrix m(dims_.n2, dims_.n3);
    std::lock_guard lock(mutex_);
    std::vector<char> buf(8 * dims_.n2 * dims_.n3);
    read_at(i * dims_.n2 * dims_.n3, buf);
    for (std::size_t j = 0; j < dims_.n2; ++j)
      for (std::size_t k = 0; k < dims_.n3; ++k)
        m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
            checked(detail::get_f64(buf.data() + 8 * (j * dims_.n3 + k)));
    return m;
  }

private:
  void read_at(std::size_t entry, std::vector<char> &buf) const {
    is_.clear();
    is_.seekg(static_cast<std::streamoff>(kT3dHeaderBytes + 8 * entry));
    is_.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!is_)
      throw IoError("short read from " + path_.string());
  }

  double checked(double v) const {
    if (!std::isfinite(v))
      throw FormatError(path_.string() + " contains NaN or Inf");
    return v;
  }

  std::filesystem::path path_;
  mutable std::ifstream is_;
  mutable std::mutex mutex_;
  Dims dims_;
};

} // namespace tubal
