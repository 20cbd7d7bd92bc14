#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tubal/error.hpp"

namespace tubal {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;

/// Extents of a third-order tensor: n1 x n2 x n3 (rows, columns, tube length).
struct Dims {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::size_t n3 = 0;

  std::size_t size() const { return n1 * n2 * n3; }
  bool operator==(const Dims &) const = default;
};

inline std::string to_string(const Dims &d) {
  return std::to_string(d.n1) + "x" + std::to_string(d.n2) + "x" +
         std::to_string(d.n3);
}

/// A 1 x 1 x n3 fiber; the scalar of the tubal algebra.
class Tube {
public:
  Tube() = default;
  explicit Tube(std::vector<double> values) : values_(std::move(values)) {}

  /// (1, 0, ..., 0): the multiplicative identity.
  static Tube identity(std::size_t n3) {
    std::vector<double> v(n3, 0.0);
    if (n3 > 0)
      v[0] = 1.0;
    return Tube(std::move(v));
  }

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }
  std::span<const double> values() const { return values_; }

  bool operator==(const Tube &) const = default;

private:
  std::vector<double> values_;
};

/// Dense real third-order tensor.
///
/// Entries are stored tube-fastest: element (i, j, k) lives at
/// (i * n2 + j) * n3 + k, so every tube X(i, j, :) is contiguous and every
/// horizontal slice X(i, :, :) is one contiguous block. Values are immutable
/// once constructed.
class Tensor3 {
public:
  Tensor3() = default;

  /// Zero tensor.
  explicit Tensor3(Dims dims) : dims_(dims), data_(dims.size(), 0.0) {
    check_dims(dims);
  }

  Tensor3(Dims dims, std::vector<double> data)
      : dims_(dims), data_(std::move(data)) {
    check_dims(dims);
    if (data_.size() != dims_.size())
      throw DimensionMismatch("tensor data length " +
                              std::to_string(data_.size()) +
                              " does not match dims " + to_string(dims_));
  }

  /// Builds a tensor entry by entry from f(i, j, k) (zero-based indices).
  template <class F> static Tensor3 generate(Dims dims, F &&f) {
    std::vector<double> v(dims.size());
    std::size_t p = 0;
    for (std::size_t i = 0; i < dims.n1; ++i)
      for (std::size_t j = 0; j < dims.n2; ++j)
        for (std::size_t k = 0; k < dims.n3; ++k)
          v[p++] = f(i, j, k);
    return Tensor3(dims, std::move(v));
  }

  static Tensor3 filled(Dims dims, double value) {
    return Tensor3(dims, std::vector<double>(dims.size(), value));
  }

  /// n x n x n3 tensor whose first frontal slice is the identity matrix.
  static Tensor3 identity(std::size_t n, std::size_t n3) {
    std::vector<double> v(n * n * n3, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      v[(i * n + i) * n3] = 1.0;
    return Tensor3({n, n, n3}, std::move(v));
  }

  const Dims &dims() const { return dims_; }
  std::size_t n1() const { return dims_.n1; }
  std::size_t n2() const { return dims_.n2; }
  std::size_t n3() const { return dims_.n3; }
  std::size_t size() const { return data_.size(); }

  std::size_t offset(std::size_t i, std::size_t j, std::size_t k) const {
    return (i * dims_.n2 + j) * dims_.n3 + k;
  }

  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[offset(i, j, k)];
  }

  double at(std::size_t i, std::size_t j, std::size_t k) const {
    if (i >= dims_.n1 || j >= dims_.n2 || k >= dims_.n3)
      throw IndexOutOfRange("entry (" + std::to_string(i) + "," +
                            std::to_string(j) + "," + std::to_string(k) +
                            ") outside " + to_string(dims_));
    return (*this)(i, j, k);
  }

  std::span<const double> data() const { return data_; }

  /// Contiguous view of tube X(i, j, :).
  std::span<const double> tube_values(std::size_t i, std::size_t j) const {
    return std::span<const double>(data_).subspan(offset(i, j, 0), dims_.n3);
  }

  /// Moves the storage out, leaving an empty tensor.
  std::vector<double> release() && {
    dims_ = {};
    return std::move(data_);
  }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](double v) { return std::isfinite(v); });
  }

  bool operator==(const Tensor3 &) const = default;

private:
  static void check_dims(const Dims &d) {
    if (d.n1 == 0 || d.n2 == 0 || d.n3 == 0)
      throw InvalidArgument("tensor dims must be positive, got " +
                            to_string(d));
  }

  Dims dims_;
  std::vector<double> data_;
};

enum class SliceKind { frontal, lateral, horizontal };

/// A slice copied out of a tensor. Payload shapes: frontal n1 x n2,
/// lateral n1 x n3, horizontal n2 x n3.
struct SliceView {
  SliceKind kind;
  std::size_t index;
  Matrix payload;
};

namespace detail {
inline void check_index(std::size_t idx, std::size_t bound, const char *what) {
  if (idx >= bound)
    throw IndexOutOfRange(std::string(what) + " index " + std::to_string(idx) +
                          " out of range [0, " + std::to_string(bound) + ")");
}

inline void check_same_dims(const Tensor3 &a, const Tensor3 &b,
                            const char *op) {
  if (a.dims() != b.dims())
    throw DimensionMismatch(std::string(op) + ": " + to_string(a.dims()) +
                            " vs " + to_string(b.dims()));
}
} // namespace detail

/// X(:, :, k) as an n1 x n2 matrix.
inline Matrix frontal_slice(const Tensor3 &x, std::size_t k) {
  detail::check_index(k, x.n3(), "frontal slice");
  Matrix m(x.n1(), x.n2());
  for (std::size_t i = 0; i < x.n1(); ++i)
    for (std::size_t j = 0; j < x.n2(); ++j)
      m(i, j) = x(i, j, k);
  return m;
}

/// X(:, j, :) as an n1 x n3 matrix (row i holds tube (i, j)).
inline Matrix lateral_slice(const Tensor3 &x, std::size_t j) {
  detail::check_index(j, x.n2(), "lateral slice");
  Matrix m(x.n1(), x.n3());
  for (std::size_t i = 0; i < x.n1(); ++i) {
    const auto t = x.tube_values(i, j);
    for (std::size_t k = 0; k < x.n3(); ++k)
      m(i, k) = t[k];
  }
  return m;
}

/// X(i, :, :) as an n2 x n3 matrix (row j holds tube (i, j)).
inline Matrix horizontal_slice(const Tensor3 &x, std::size_t i) {
  detail::check_index(i, x.n1(), "horizontal slice");
  Matrix m(x.n2(), x.n3());
  for (std::size_t j = 0; j < x.n2(); ++j) {
    const auto t = x.tube_values(i, j);
    for (std::size_t k = 0; k < x.n3(); ++k)
      m(j, k) = t[k];
  }
  return m;
}

inline Tube tube_at(const Tensor3 &x, std::size_t i, std::size_t j) {
  detail::check_index(i, x.n1(), "tube row");
  detail::check_index(j, x.n2(), "tube column");
  const auto t = x.tube_values(i, j);
  return Tube(std::vector<double>(t.begin(), t.end()));
}

inline SliceView slice(const Tensor3 &x, SliceKind kind, std::size_t index) {
  switch (kind) {
  case SliceKind::frontal:
    return {kind, index, frontal_slice(x, index)};
  case SliceKind::lateral:
    return {kind, index, lateral_slice(x, index)};
  case SliceKind::horizontal:
    break;
  }
  return {kind, index, horizontal_slice(x, index)};
}

/// Embeds an n1 x n3 matrix as an n1 x 1 x n3 lateral-slice tensor.
inline Tensor3 lateral_tensor(const Matrix &m) {
  const auto n1 = static_cast<std::size_t>(m.rows());
  const auto n3 = static_cast<std::size_t>(m.cols());
  return Tensor3::generate({n1, 1, n3}, [&](std::size_t i, std::size_t,
                                            std::size_t k) { return m(i, k); });
}

/// Embeds an n2 x n3 matrix as a 1 x n2 x n3 horizontal-slice tensor.
inline Tensor3 horizontal_tensor(const Matrix &m) {
  const auto n2 = static_cast<std::size_t>(m.rows());
  const auto n3 = static_cast<std::size_t>(m.cols());
  return Tensor3::generate({1, n2, n3}, [&](std::size_t, std::size_t j,
                                            std::size_t k) { return m(j, k); });
}

/// Embeds a tube as a 1 x 1 x n3 tensor.
inline Tensor3 tube_tensor(const Tube &t) {
  return Tensor3({1, 1, t.size()},
                 std::vector<double>(t.values().begin(), t.values().end()));
}

inline double frobenius_norm(const Tensor3 &x) {
  double s = 0.0;
  for (double v : x.data())
    s += v * v;
  return std::sqrt(s);
}

inline Tensor3 hadamard(const Tensor3 &x, const Tensor3 &y) {
  detail::check_same_dims(x, y, "hadamard");
  std::vector<double> v(x.size());
  for (std::size_t p = 0; p < v.size(); ++p)
    v[p] = x.data()[p] * y.data()[p];
  return Tensor3(x.dims(), std::move(v));
}

inline Tensor3 operator+(const Tensor3 &x, const Tensor3 &y) {
  detail::check_same_dims(x, y, "add");
  std::vector<double> v(x.size());
  for (std::size_t p = 0; p < v.size(); ++p)
    v[p] = x.data()[p] + y.data()[p];
  return Tensor3(x.dims(), std::move(v));
}

inline Tensor3 operator-(const Tensor3 &x, const Tensor3 &y) {
  detail::check_same_dims(x, y, "subtract");
  std::vector<double> v(x.size());
  for (std::size_t p = 0; p < v.size(); ++p)
    v[p] = x.data()[p] - y.data()[p];
  return Tensor3(x.dims(), std::move(v));
}

inline Tensor3 operator*(double a, const Tensor3 &x) {
  std::vector<double> v(x.data().begin(), x.data().end());
  for (double &e : v)
    e *= a;
  return Tensor3(x.dims(), std::move(v));
}

/// Stacks n1 x 1 x n3 lateral slices along the second mode.
inline Tensor3 concat_lateral(std::span<const Tensor3> slices) {
  if (slices.empty())
    throw InvalidArgument("concat_lateral: empty slice list");
  const auto n1 = slices.front().n1();
  const auto n3 = slices.front().n3();
  std::size_t n2 = 0;
  for (const auto &s : slices) {
    if (s.n1() != n1 || s.n3() != n3)
      throw DimensionMismatch("concat_lateral: slice " + to_string(s.dims()) +
                              " does not match n1=" + std::to_string(n1) +
                              ", n3=" + std::to_string(n3));
    n2 += s.n2();
  }
  std::vector<double> v;
  v.reserve(n1 * n2 * n3);
  for (std::size_t i = 0; i < n1; ++i)
    for (const auto &s : slices)
      for (std::size_t j = 0; j < s.n2(); ++j) {
        const auto t = s.tube_values(i, j);
        v.insert(v.end(), t.begin(), t.end());
      }
  return Tensor3({n1, n2, n3}, std::move(v));
}

/// Stacks 1 x n2 x n3 horizontal slices along the first mode.
inline Tensor3 concat_horizontal(std::span<const Tensor3> slices) {
  if (slices.empty())
    throw InvalidArgument("concat_horizontal: empty slice list");
  const auto n2 = slices.front().n2();
  const auto n3 = slices.front().n3();
  std::size_t n1 = 0;
  for (const auto &s : slices) {
    if (s.n2() != n2 || s.n3() != n3)
      throw DimensionMismatch("concat_horizontal: slice " +
                              to_string(s.dims()) + " does not match n2=" +
                              std::to_string(n2) +
                              ", n3=" + std::to_string(n3));
    n1 += s.n1();
  }
  std::vector<double> v;
  v.reserve(n1 * n2 * n3);
  for (const auto &s : slices)
    v.insert(v.end(), s.data().begin(), s.data().end());
  return Tensor3({n1, n2, n3}, std::move(v));
}

/// Largest absolute entrywise difference.
inline double max_abs_diff(const Tensor3 &x, const Tensor3 &y) {
  detail::check_same_dims(x, y, "max_abs_diff");
  double m = 0.0;
  for (std::size_t p = 0; p < x.size(); ++p)
    m = std::max(m, std::abs(x.data()[p] - y.data()[p]));
  return m;
}

} // namespace tubal
