#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <type_traits>
#include <string>
#include <vector>

#include "tubal/algebra.hpp"
#include "tubal/fourier.hpp"
#include "tubal/linalg.hpp"
#include "tubal/parallel.hpp"
#include "tubal/random.hpp"
#include "tubal/tensor3.hpp"

namespace tubal {

/// Rank-R t-SVD factors: x ~ u * s * v^T with u (n1 x R x n3) and
/// v (n2 x R x n3) having orthonormal lateral slices and s (R x R x n3)
/// f-diagonal.
struct TsvdFactors {
  Tensor3 u;
  Tensor3 s;
  Tensor3 v;
  std::size_t rank = 0;
};

inline Tensor3 reconstruct(const TsvdFactors &f) {
  return tprod(tprod(f.u, f.s), ttranspose(f.v));
}

namespace detail {

inline void check_target_rank(const Tensor3 &x, std::size_t rank,
                              std::size_t extra, const char *who) {
  const std::size_t limit = std::min(x.n1(), x.n2());
  if (rank == 0 || rank + extra > limit)
    throw InvalidArgument(std::string(who) + ": rank " + std::to_string(rank) +
                          (extra ? " + oversampling " + std::to_string(extra)
                                 : std::string()) +
                          " must lie in [1, " + std::to_string(limit) + "]");
}

/// Assembles t-SVD factors from per-slice SVDs of the leading half spectrum.
inline TsvdFactors assemble_tsvd(const Tensor3 &x,
                                 const std::vector<SliceSvd> &slices,
                                 std::size_t rank) {
  const std::size_t n3 = x.n3();
  const auto r = static_cast<Eigen::Index>(rank);
  TsvdFactors out;
  out.rank = rank;
  out.u = from_half_spectrum({x.n1(), rank, n3}, [&](std::size_t f) {
    return CMatrix(slices[f].u.leftCols(r));
  });
  out.s = from_half_spectrum({rank, rank, n3}, [&](std::size_t f) {
    CMatrix d = CMatrix::Zero(r, r);
    d.diagonal() = slices[f].s.head(r).cast<Complex>();
    return d;
  });
  out.v = from_half_spectrum({x.n2(), rank, n3}, [&](std::size_t f) {
    return CMatrix(slices[f].v.leftCols(r));
  });
  return out;
}

template <class Mat> Mat gaussian_matrix(Rng &rng, Eigen::Index rows,
                                         Eigen::Index cols) {
  Mat m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) {
      if constexpr (std::is_same_v<typename Mat::Scalar, Complex>)
        m(r, c) = Complex(rng.normal(), rng.normal()) * (1.0 / std::numbers::sqrt2);
      else
        m(r, c) = rng.normal();
    }
  return m;
}

/// Randomized range finder with power iterations followed by an SVD of the
/// projected matrix.
template <class Mat>
SliceSvd randomized_slice_svd(const Mat &a, std::size_t rank,
                              std::size_t oversample, std::size_t power_iters,
                              Rng &rng) {
  const auto l = static_cast<Eigen::Index>(rank + oversample);
  const Mat omega = gaussian_matrix<Mat>(rng, a.cols(), l);
  Mat q = orthonormal_columns<Mat>(a * omega);
  for (std::size_t it = 0; it < power_iters; ++it) {
    const Mat z = orthonormal_columns<Mat>(a.adjoint() * q);
    q = orthonormal_columns<Mat>(a * z);
  }
  const Mat b = q.adjoint() * a;
  Eigen::BDCSVD<Mat> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Mat u = q * svd.matrixU();
  return {u.template cast<Complex>(), svd.singularValues(),
          svd.matrixV().template cast<Complex>()};
}

} // namespace detail

/// Truncated t-SVD: rank-R SVD of each of the leading half_spectrum(n3)
/// Fourier slices, remaining slices by conjugate symmetry.
inline TsvdFactors tsvd_truncated(const Tensor3 &x, std::size_t rank) {
  detail::check_target_rank(x, rank, 0, "tsvd_truncated");
  const auto xh = fft_mode3(x);
  const std::size_t n3 = x.n3();
  std::vector<SliceSvd> slices(half_spectrum(n3));
  parallel_for(slices.size(), [&](std::size_t f) {
    slices[f] = thin_svd(xh.frontal(f), self_conjugate(f, n3));
  });
  return detail::assemble_tsvd(x, slices, rank);
}

struct RandomizedOptions {
  std::size_t oversample = 10;
  std::size_t power_iters = 1;
  std::uint64_t seed = 0;
};

/// Randomized t-SVD. Each Fourier slice uses its own Gaussian test matrix
/// drawn from a stream derived from (seed, slice index), so results do not
/// depend on the thread count.
inline TsvdFactors tsvd_randomized(const Tensor3 &x, std::size_t rank,
                                   const RandomizedOptions &opt = {}) {
  detail::check_target_rank(x, rank, opt.oversample, "tsvd_randomized");
  const auto xh = fft_mode3(x);
  const std::size_t n3 = x.n3();
  std::vector<SliceSvd> slices(half_spectrum(n3));
  parallel_for(slices.size(), [&](std::size_t f) {
    Rng rng(derive_seed(opt.seed, f));
    const CMatrix a = xh.frontal(f);
    if (self_conjugate(f, n3))
      slices[f] = detail::randomized_slice_svd<Matrix>(
          a.real(), rank, opt.oversample, opt.power_iters, rng);
    else
      slices[f] = detail::randomized_slice_svd<CMatrix>(
          a, rank, opt.oversample, opt.power_iters, rng);
  });
  return detail::assemble_tsvd(x, slices, rank);
}

/// Frobenius norms of the diagonal tubes s(r, r, :).
inline std::vector<double> diagonal_tube_norms(const Tensor3 &s) {
  const std::size_t r = std::min(s.n1(), s.n2());
  std::vector<double> norms(r);
  for (std::size_t d = 0; d < r; ++d) {
    double acc = 0.0;
    for (double v : s.tube_values(d, d))
      acc += v * v;
    norms[d] = std::sqrt(acc);
  }
  return norms;
}

/// Number of diagonal tubes of an f-diagonal s whose norm exceeds
/// tol * (largest diagonal tube norm).
inline std::size_t numerical_tubal_rank(const Tensor3 &s, double tol) {
  const auto norms = diagonal_tube_norms(s);
  const double top =
      norms.empty() ? 0.0 : *std::max_element(norms.begin(), norms.end());
  if (top == 0.0)
    return 0;
  return static_cast<std::size_t>(
      std::count_if(norms.begin(), norms.end(),
                    [&](double v) { return v > tol * top; }));
}

/// Numerical tubal rank of x from its full t-SVD.
inline std::size_t numerical_tubal_rank_of(const Tensor3 &x, double tol) {
  return numerical_tubal_rank(
      tsvd_truncated(x, std::min(x.n1(), x.n2())).s, tol);
}

} // namespace tubal
