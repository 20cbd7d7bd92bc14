#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/LU>

#include "tubal/error.hpp"
#include "tubal/fourier.hpp"
#include "tubal/linalg.hpp"
#include "tubal/parallel.hpp"
#include "tubal/tensor3.hpp"

namespace tubal {

/// Default relative threshold below which a tube's Fourier coefficient
/// counts as zero.
inline constexpr double kTubeInverseTol = 1e-12;

/// Builds a real tensor from its spectrum, computing only the leading
/// half_spectrum(n3) frontal slices with slice_fn(f) -> CMatrix and filling
/// the rest by conjugation.
template <class SliceFn>
Tensor3 from_half_spectrum(Dims out_dims, SliceFn &&slice_fn) {
  FourierTensor3 spec(out_dims, true);
  const std::size_t half = half_spectrum(out_dims.n3);
  std::vector<CMatrix> slices(half);
  parallel_for(half, [&](std::size_t f) { slices[f] = slice_fn(f); });
  for (std::size_t f = 0; f < half; ++f)
    spec.set_frontal(f, slices[f]);
  return ifft_mode3(fill_conjugate_symmetric(std::move(spec), half));
}

/// t-product x * y, computed slice-wise in the Fourier domain.
inline Tensor3 tprod(const Tensor3 &x, const Tensor3 &y) {
  if (x.n2() != y.n1() || x.n3() != y.n3())
    throw DimensionMismatch("tprod: " + to_string(x.dims()) + " * " +
                            to_string(y.dims()));
  const auto xh = fft_mode3(x);
  const auto yh = fft_mode3(y);
  return from_half_spectrum({x.n1(), y.n2(), x.n3()}, [&](std::size_t f) {
    return CMatrix(xh.frontal(f) * yh.frontal(f));
  });
}

/// Tensor transpose: every frontal slice transposed, slices 2..n3 reversed.
inline Tensor3 ttranspose(const Tensor3 &x) {
  const std::size_t n3 = x.n3();
  return Tensor3::generate({x.n2(), x.n1(), n3}, [&](std::size_t i,
                                                     std::size_t j,
                                                     std::size_t k) {
    return x(j, i, k == 0 ? 0 : n3 - k);
  });
}

inline Tensor3 identity_tensor(std::size_t n, std::size_t n3) {
  return Tensor3::identity(n, n3);
}

/// Checks that every Fourier coefficient of a tube spectrum exceeds
/// tol * (largest modulus).
inline bool tube_spectrum_invertible(std::span<const Complex> spectrum,
                                     double tol = kTubeInverseTol) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto &c : spectrum) {
    lo = std::min(lo, std::abs(c));
    hi = std::max(hi, std::abs(c));
  }
  return hi > 0.0 && lo > tol * hi;
}

/// Inverse in the tubal algebra: the tube whose spectrum is the elementwise
/// reciprocal. Throws NearSingularTube when some coefficient is not above
/// tol * max modulus.
inline Tube tube_inverse(const Tube &t, double tol = kTubeInverseTol) {
  const std::size_t n3 = t.size();
  if (n3 == 0)
    throw InvalidArgument("tube_inverse: empty tube");
  const auto &plan = fft_plan(n3);
  std::vector<Complex> in(t.values().begin(), t.values().end());
  std::vector<Complex> spec(n3);
  plan.forward(in, spec);
  if (!tube_spectrum_invertible(spec, tol))
    throw NearSingularTube("tube has a Fourier coefficient below " +
                           std::to_string(tol) + " x its largest modulus");
  for (auto &c : spec)
    c = 1.0 / c;
  plan.inverse(spec, in);
  std::vector<double> out(n3);
  for (std::size_t k = 0; k < n3; ++k)
    out[k] = in[k].real();
  return Tube(std::move(out));
}

/// Inverse of a square tensor: x * tinv(x) = tinv(x) * x = I.
/// Throws SingularSlice for a numerically singular Fourier slice.
inline Tensor3 tinv(const Tensor3 &x) {
  if (x.n1() != x.n2())
    throw DimensionMismatch("tinv: tensor must have square frontal slices, got " +
                            to_string(x.dims()));
  const std::size_t n = x.n1();
  const std::size_t n3 = x.n3();
  const auto xh = fft_mode3(x);
  const double eps = std::numeric_limits<double>::epsilon();
  return from_half_spectrum({n, n, n3}, [&](std::size_t f) -> CMatrix {
    const CMatrix a = xh.frontal(f);
    if (self_conjugate(f, n3)) {
      Eigen::PartialPivLU<Matrix> lu(a.real());
      if (!(lu.rcond() > static_cast<double>(n) * eps))
        throw SingularSlice(f, "tinv: Fourier slice " + std::to_string(f) +
                                   " is numerically singular");
      return lu.inverse().cast<Complex>();
    }
    Eigen::PartialPivLU<CMatrix> lu(a);
    if (!(lu.rcond() > static_cast<double>(n) * eps))
      throw SingularSlice(f, "tinv: Fourier slice " + std::to_string(f) +
                                 " is numerically singular");
    return lu.inverse();
  });
}

/// Moore-Penrose pseudoinverse, slice-wise in the Fourier domain.
inline Tensor3 tpinv(const Tensor3 &x) {
  const auto xh = fft_mode3(x);
  const std::size_t n3 = x.n3();
  return from_half_spectrum({x.n2(), x.n1(), n3}, [&](std::size_t f) {
    return pseudo_inverse(xh.frontal(f), self_conjugate(f, n3));
  });
}

/// True when every off-diagonal entry of every frontal slice is within tol
/// of zero.
inline bool is_f_diagonal(const Tensor3 &x, double tol) {
  for (std::size_t i = 0; i < x.n1(); ++i)
    for (std::size_t j = 0; j < x.n2(); ++j) {
      if (i == j)
        continue;
      for (double v : x.tube_values(i, j))
        if (std::abs(v) > tol)
          return false;
    }
  return true;
}

/// x^T * x = I within tol (entrywise). Holds for the column factors of a
/// t-SVD even when they are not square.
inline bool has_orthonormal_columns(const Tensor3 &x, double tol) {
  const auto g = tprod(ttranspose(x), x);
  return max_abs_diff(g, Tensor3::identity(x.n2(), x.n3())) <= tol;
}

/// x^T * x = x * x^T = I within tol, for square x.
inline bool is_orthogonal(const Tensor3 &x, double tol) {
  if (x.n1() != x.n2())
    return false;
  const auto xt = ttranspose(x);
  const auto id = Tensor3::identity(x.n1(), x.n3());
  return max_abs_diff(tprod(xt, x), id) <= tol &&
         max_abs_diff(tprod(x, xt), id) <= tol;
}

} // namespace tubal
