#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "tubal/tensor3.hpp"

namespace tubal {

/// Thin SVD of one Fourier frontal slice: a = u * diag(s) * v^H, with s in
/// non-increasing order.
struct SliceSvd {
  CMatrix u;
  Eigen::VectorXd s;
  CMatrix v;
};

/// Thin SVD of a slice. Slices that are real by conjugate symmetry
/// (real_slice) are factored in real arithmetic, which keeps their factors
/// real; a complex routine would return arbitrary phases and the factor
/// tensors would not come back real from the inverse transform.
inline SliceSvd thin_svd(const CMatrix &a, bool real_slice) {
  if (real_slice) {
    const Matrix re = a.real();
    Eigen::BDCSVD<Matrix> svd(re, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return {svd.matrixU().cast<Complex>(), svd.singularValues(),
            svd.matrixV().cast<Complex>()};
  }
  Eigen::BDCSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

/// Number of singular values above rel_tol * sigma_max.
inline std::size_t numerical_rank(const CMatrix &a, double rel_tol) {
  if (a.size() == 0)
    return 0;
  Eigen::BDCSVD<CMatrix> svd(a);
  const auto &s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0)
    return 0;
  std::size_t r = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > rel_tol * s(0))
      ++r;
  return r;
}

/// Orthonormal basis of range(y) from a thin Householder QR.
template <class Mat> Mat orthonormal_columns(const Mat &y) {
  Eigen::HouseholderQR<Mat> qr(y);
  return qr.householderQ() * Mat::Identity(y.rows(), y.cols());
}

/// Moore-Penrose inverse with cutoff max(rows, cols) * eps * sigma_max.
inline CMatrix pseudo_inverse(const CMatrix &a, bool real_slice) {
  const auto svd = thin_svd(a, real_slice);
  const double eps = std::numeric_limits<double>::epsilon();
  const double cutoff =
      svd.s.size() == 0
          ? 0.0
          : static_cast<double>(std::max(a.rows(), a.cols())) * eps * svd.s(0);
  Eigen::VectorXd inv_s(svd.s.size());
  for (Eigen::Index k = 0; k < svd.s.size(); ++k)
    inv_s(k) = svd.s(k) > cutoff ? 1.0 / svd.s(k) : 0.0;
  return svd.v * inv_s.asDiagonal() * svd.u.adjoint();
}

} // namespace tubal
