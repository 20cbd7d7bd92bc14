#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tubal/error.hpp"
#include "tubal/fft.hpp"
#include "tubal/parallel.hpp"
#include "tubal/tensor3.hpp"

namespace tubal {

/// Number of leading Fourier frontal slices that determine the rest by
/// conjugate symmetry when the source tensor is real: ceil((n3 + 1) / 2).
constexpr std::size_t half_spectrum(std::size_t n3) { return n3 / 2 + 1; }

/// Index of the slice conjugate to slice f of a length-n3 spectrum.
constexpr std::size_t conjugate_index(std::size_t f, std::size_t n3) {
  return f == 0 ? 0 : n3 - f;
}

/// A slice equal to its own conjugate partner (f = 0, and f = n3/2 for even
/// n3). For real data these slices are real matrices.
constexpr bool self_conjugate(std::size_t f, std::size_t n3) {
  return conjugate_index(f, n3) == f;
}

/// Mode-3 spectrum of a tensor, stored tube-fastest like Tensor3.
///
/// origin_real marks spectra of real tensors; for those, slice 0 is real and
/// slice f is the conjugate of slice n3 - f.
class FourierTensor3 {
public:
  FourierTensor3() = default;
  FourierTensor3(Dims dims, bool origin_real)
      : dims_(dims), data_(dims.size()), origin_real_(origin_real) {}
  FourierTensor3(Dims dims, std::vector<Complex> data, bool origin_real)
      : dims_(dims), data_(std::move(data)), origin_real_(origin_real) {
    if (data_.size() != dims_.size())
      throw DimensionMismatch("spectrum data length does not match dims " +
                              to_string(dims_));
  }

  const Dims &dims() const { return dims_; }
  std::size_t n1() const { return dims_.n1; }
  std::size_t n2() const { return dims_.n2; }
  std::size_t n3() const { return dims_.n3; }
  bool origin_real() const { return origin_real_; }
  void set_origin_real(bool v) { origin_real_ = v; }

  Complex &operator()(std::size_t i, std::size_t j, std::size_t f) {
    return data_[(i * dims_.n2 + j) * dims_.n3 + f];
  }
  const Complex &operator()(std::size_t i, std::size_t j,
                            std::size_t f) const {
    return data_[(i * dims_.n2 + j) * dims_.n3 + f];
  }

  std::span<const Complex> data() const { return data_; }
  std::span<Complex> data() { return data_; }

  std::span<Complex> tube(std::size_t i, std::size_t j) {
    return std::span<Complex>(data_).subspan((i * dims_.n2 + j) * dims_.n3,
                                             dims_.n3);
  }
  std::span<const Complex> tube(std::size_t i, std::size_t j) const {
    return std::span<const Complex>(data_).subspan(
        (i * dims_.n2 + j) * dims_.n3, dims_.n3);
  }

  /// Frontal slice f as an n1 x n2 complex matrix.
  CMatrix frontal(std::size_t f) const {
    detail::check_index(f, dims_.n3, "Fourier slice");
    CMatrix m(dims_.n1, dims_.n2);
    for (std::size_t i = 0; i < dims_.n1; ++i)
      for (std::size_t j = 0; j < dims_.n2; ++j)
        m(i, j) = (*this)(i, j, f);
    return m;
  }

  void set_frontal(std::size_t f, const CMatrix &m) {
    detail::check_index(f, dims_.n3, "Fourier slice");
    if (static_cast<std::size_t>(m.rows()) != dims_.n1 ||
        static_cast<std::size_t>(m.cols()) != dims_.n2)
      throw DimensionMismatch("frontal slice shape does not match spectrum");
    for (std::size_t i = 0; i < dims_.n1; ++i)
      for (std::size_t j = 0; j < dims_.n2; ++j)
        (*this)(i, j, f) = m(i, j);
  }

private:
  Dims dims_;
  std::vector<Complex> data_;
  bool origin_real_ = false;
};

inline double frobenius_norm(const FourierTensor3 &x) {
  double s = 0.0;
  for (const auto &v : x.data())
    s += std::norm(v);
  return std::sqrt(s);
}

/// DFT of every tube X(i, j, :).
inline FourierTensor3 fft_mode3(const Tensor3 &x) {
  FourierTensor3 out(x.dims(), true);
  const auto &plan = fft_plan(x.n3());
  const std::size_t tubes = x.n1() * x.n2();
  parallel_for(tubes, [&](std::size_t t) {
    thread_local std::vector<Complex> buf;
    const auto src = x.data().subspan(t * x.n3(), x.n3());
    buf.assign(src.begin(), src.end());
    plan.forward(buf, out.data().subspan(t * x.n3(), x.n3()));
  });
  return out;
}

/// Inverse DFT of every tube, keeping the real part.
///
/// The largest discarded imaginary magnitude is written to imag_residue when
/// given. A residue above 1e-6 * ||result|| means the spectrum was not
/// conjugate symmetric and raises SymmetryViolation.
inline Tensor3 ifft_mode3(const FourierTensor3 &xhat,
                          double *imag_residue = nullptr) {
  const std::size_t n3 = xhat.n3();
  const auto &plan = fft_plan(n3);
  const std::size_t tubes = xhat.n1() * xhat.n2();
  std::vector<Complex> full(xhat.dims().size());
  parallel_for(tubes, [&](std::size_t t) {
    plan.inverse(xhat.data().subspan(t * n3, n3),
                 std::span<Complex>(full).subspan(t * n3, n3));
  });
  std::vector<double> re(full.size());
  double residue = 0.0;
  double norm2 = 0.0;
  for (std::size_t p = 0; p < full.size(); ++p) {
    re[p] = full[p].real();
    residue = std::max(residue, std::abs(full[p].imag()));
    norm2 += std::norm(full[p]);
  }
  if (imag_residue)
    *imag_residue = residue;
  if (residue > 1e-6 * std::sqrt(norm2))
    throw SymmetryViolation(
        "inverse transform has imaginary residue " + std::to_string(residue) +
        " relative to norm " + std::to_string(std::sqrt(norm2)));
  return Tensor3(xhat.dims(), std::move(re));
}

/// Fills slices [computed_up_to, n3) as conjugates of their partners.
/// Requires computed_up_to >= half_spectrum(n3).
inline FourierTensor3 fill_conjugate_symmetric(FourierTensor3 xhat,
                                               std::size_t computed_up_to) {
  const std::size_t n3 = xhat.n3();
  if (computed_up_to < half_spectrum(n3))
    throw InvalidArgument("conjugate fill needs the first " +
                          std::to_string(half_spectrum(n3)) + " slices");
  for (std::size_t i = 0; i < xhat.n1(); ++i)
    for (std::size_t j = 0; j < xhat.n2(); ++j) {
      auto t = xhat.tube(i, j);
      for (std::size_t f = computed_up_to; f < n3; ++f)
        t[f] = std::conj(t[n3 - f]);
    }
  return xhat;
}

/// Largest violation of the real-origin symmetry relations, relative to
/// ||xhat||: imaginary parts of self-conjugate slices and mismatches between
/// conjugate partners.
inline double conjugate_symmetry_defect(const FourierTensor3 &xhat) {
  const std::size_t n3 = xhat.n3();
  double worst = 0.0;
  for (std::size_t i = 0; i < xhat.n1(); ++i)
    for (std::size_t j = 0; j < xhat.n2(); ++j) {
      const auto t = xhat.tube(i, j);
      for (std::size_t f = 0; f < n3; ++f)
        worst = std::max(worst,
                         std::abs(std::conj(t[f]) - t[conjugate_index(f, n3)]));
    }
  const double norm = frobenius_norm(xhat);
  return norm > 0.0 ? worst / norm : worst;
}

/// DFT of each row of an n x n3 real matrix (each row is a tube).
inline CMatrix fft_rows(const Matrix &m) {
  const auto n3 = static_cast<std::size_t>(m.cols());
  const auto &plan = fft_plan(n3);
  CMatrix out(m.rows(), m.cols());
  std::vector<Complex> in(n3), res(n3);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (std::size_t k = 0; k < n3; ++k)
      in[k] = m(r, static_cast<Eigen::Index>(k));
    plan.forward(in, res);
    for (std::size_t k = 0; k < n3; ++k)
      out(r, static_cast<Eigen::Index>(k)) = res[k];
  }
  return out;
}

/// Inverse DFT of each row, keeping the real part.
inline Matrix ifft_rows(const CMatrix &m) {
  const auto n3 = static_cast<std::size_t>(m.cols());
  const auto &plan = fft_plan(n3);
  Matrix out(m.rows(), m.cols());
  std::vector<Complex> in(n3), res(n3);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (std::size_t k = 0; k < n3; ++k)
      in[k] = m(r, static_cast<Eigen::Index>(k));
    plan.inverse(in, res);
    for (std::size_t k = 0; k < n3; ++k)
      out(r, static_cast<Eigen::Index>(k)) = res[k].real();
  }
  return out;
}

} // namespace tubal
