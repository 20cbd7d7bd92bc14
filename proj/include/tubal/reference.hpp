#pragma once

#include <cstddef>

#include "tubal/error.hpp"
#include "tubal/tensor3.hpp"

namespace tubal::reference {

// Direct-definition kernels for checking the fast paths. Quadratic or worse
// in n3; only meant for small inputs.

/// Block-circulant t-product: fold(circ(x) * unfold(y)).
inline Tensor3 tprod_circulant(const Tensor3 &x, const Tensor3 &y) {
  if (x.n2() != y.n1() || x.n3() != y.n3())
    throw DimensionMismatch("tprod_circulant: " + to_string(x.dims()) + " * " +
                            to_string(y.dims()));
  const std::size_t n1 = x.n1(), n2 = x.n2(), n4 = y.n2(), n3 = x.n3();
  // circ(x) has block (a, b) = x slice (a - b) mod n3.
  Matrix circ(n1 * n3, n2 * n3);
  for (std::size_t a = 0; a < n3; ++a)
    for (std::size_t b = 0; b < n3; ++b) {
      const std::size_t k = (a + n3 - b) % n3;
      circ.block(a * n1, b * n2, n1, n2) = frontal_slice(x, k);
    }
  Matrix unfold(n2 * n3, n4);
  for (std::size_t b = 0; b < n3; ++b)
    unfold.block(b * n2, 0, n2, n4) = frontal_slice(y, b);
  const Matrix prod = circ * unfold;
  return Tensor3::generate({n1, n4, n3}, [&](std::size_t i, std::size_t j,
                                             std::size_t k) {
    return prod(k * n1 + i, j);
  });
}

} // namespace tubal::reference
