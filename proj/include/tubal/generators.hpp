#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tubal/algebra.hpp"
#include "tubal/error.hpp"
#include "tubal/fourier.hpp"
#include "tubal/linalg.hpp"
#include "tubal/random.hpp"
#include "tubal/tensor3.hpp"

namespace tubal {

inline Tensor3 gaussian_tensor(Dims dims, Rng &rng) {
  std::vector<double> v(dims.size());
  for (double &e : v)
    e = rng.normal();
  return Tensor3(dims, std::move(v));
}

/// Tensor with orthonormal lateral slices (q^T * q = I) spanning the same
/// t-range as g, from a thin QR of every Fourier slice.
inline Tensor3 orthonormalize(const Tensor3 &g) {
  if (g.n2() > g.n1())
    throw InvalidArgument("orthonormalize: needs n2 <= n1, got " +
                          to_string(g.dims()));
  const auto gh = fft_mode3(g);
  const std::size_t n3 = g.n3();
  return from_half_spectrum(g.dims(), [&](std::size_t f) -> CMatrix {
    const CMatrix a = gh.frontal(f);
    if (self_conjugate(f, n3))
      return orthonormal_columns<Matrix>(a.real()).cast<Complex>();
    return orthonormal_columns<CMatrix>(a);
  });
}

/// x = u * s * v^T with orthonormal u, v (n1 x R x n3, n2 x R x n3) from
/// orthonormalized Gaussian tensors and an f-diagonal s whose R diagonal
/// tubes are standard Gaussian.
inline Tensor3 synthetic_exact_rank(Dims dims, std::size_t rank,
                                    std::uint64_t seed) {
  if (rank == 0 || rank > std::min(dims.n1, dims.n2))
    throw InvalidArgument("synthetic_exact_rank: rank must lie in [1, min(n1, n2)]");
  Rng ru(derive_seed(seed, 0)), rv(derive_seed(seed, 1)), rs(derive_seed(seed, 2));
  const auto u = orthonormalize(gaussian_tensor({dims.n1, rank, dims.n3}, ru));
  const auto v = orthonormalize(gaussian_tensor({dims.n2, rank, dims.n3}, rv));
  std::vector<double> sd(rank * rank * dims.n3, 0.0);
  for (std::size_t d = 0; d < rank; ++d)
    for (std::size_t k = 0; k < dims.n3; ++k)
      sd[(d * rank + d) * dims.n3 + k] = rs.normal();
  const Tensor3 s({rank, rank, dims.n3}, std::move(sd));
  return tprod(tprod(u, s), ttranspose(v));
}

/// n x n x n exact tubal-rank tensor.
inline Tensor3 synthetic_exact_rank(std::size_t n, std::size_t rank,
                                    std::uint64_t seed) {
  return synthetic_exact_rank(Dims{n, n, n}, rank, seed);
}

/// Closed-form test tensors on the grid 1 <= i, j, k <= n:
///   case 1: 1 / sqrt(i^2 + j^2 + k^2)
///   case 2: sin(i + j + k) + tanh(i + j + k)
///   case 3: 1 / (i^5 + j^5 + k^5)^(1/5)
/// Slices are evaluated on demand, so the cube never has to exist in memory.
class FunctionTensor {
public:
  FunctionTensor(int which, std::size_t n) : case_(which), n_(n) {
    if (which < 1 || which > 3)
      throw InvalidArgument("function tensor case must be 1, 2 or 3");
    if (n == 0)
      throw InvalidArgument("function tensor size must be positive");
  }

  Dims dims() const { return {n_, n_, n_}; }
  int which() const { return case_; }

  /// Entry at zero-based (i, j, k); the formulas use one-based indices.
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    const double a = static_cast<double>(i + 1);
    const double b = static_cast<double>(j + 1);
    const double c = static_cast<double>(k + 1);
    switch (case_) {
    case 1:
      return 1.0 / std::sqrt(a * a + b * b + c * c);
    case 2:
      return std::sin(a + b + c) + std::tanh(a + b + c);
    default:
      return 1.0 / std::pow(std::pow(a, 5) + std::pow(b, 5) + std::pow(c, 5),
                            0.2);
    }
  }

  Matrix lateral_slice(std::size_t j) const {
    detail::check_index(j, n_, "lateral slice");
    Matrix m(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t k = 0; k < n_; ++k)
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
            (*this)(i, j, k);
    return m;
  }

  Matrix horizontal_slice(std::size_t i) const {
    detail::check_index(i, n_, "horizontal slice");
    Matrix m(n_, n_);
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t k = 0; k < n_; ++k)
        m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
            (*this)(i, j, k);
    return m;
  }

  Tensor3 materialize() const {
    return Tensor3::generate(dims(), [&](std::size_t i, std::size_t j,
                                         std::size_t k) {
      return (*this)(i, j, k);
    });
  }

private:
  int case_;
  std::size_t n_;
};

enum class GeneratorKind { synthetic_rank, case1, case2, case3 };

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::synthetic_rank;
  std::size_t n = 0;
  std::size_t rank = 0; ///< synthetic_rank only
  std::uint64_t seed = 0;
};

inline GeneratorKind parse_generator_kind(const std::string &s) {
  if (s == "synthetic" || s == "synthetic_rank")
    return GeneratorKind::synthetic_rank;
  if (s == "case1")
    return GeneratorKind::case1;
  if (s == "case2")
    return GeneratorKind::case2;
  if (s == "case3")
    return GeneratorKind::case3;
  throw InvalidArgument("unknown generator '" + s + "'");
}

inline Tensor3 generate(const GeneratorSpec &spec) {
  if (spec.n == 0)
    throw InvalidArgument("generator size must be positive");
  switch (spec.kind) {
  case GeneratorKind::synthetic_rank:
    return synthetic_exact_rank(spec.n, spec.rank, spec.seed);
  case GeneratorKind::case1:
    return FunctionTensor(1, spec.n).materialize();
  case GeneratorKind::case2:
    return FunctionTensor(2, spec.n).materialize();
  case GeneratorKind::case3:
    break;
  }
  return FunctionTensor(3, spec.n).materialize();
}

} // namespace tubal
