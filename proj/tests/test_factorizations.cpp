#include <gtest/gtest.h>

#include <vector>

#include "oracles.hpp"
#include "tubal/algebra.hpp"
#include "tubal/cross.hpp"
#include "tubal/factorizations.hpp"
#include "tubal/generators.hpp"

using namespace tubal;

namespace {

double rel_err(const Tensor3 &x, const Tensor3 &approx) {
  return frobenius_norm(x - approx) / frobenius_norm(x);
}

void expect_invariants(const TsvdFactors &f, std::size_t rank) {
  const std::size_t n3 = f.u.n3();
  ASSERT_EQ(f.u.n2(), rank);
  ASSERT_EQ(f.s.dims(), (Dims{rank, rank, n3}));
  ASSERT_EQ(f.v.n2(), rank);
  const auto id = identity_tensor(rank, n3);
  EXPECT_LE(max_abs_diff(tprod(ttranspose(f.u), f.u), id), 1e-8);
  EXPECT_LE(max_abs_diff(tprod(ttranspose(f.v), f.v), id), 1e-8);
  EXPECT_TRUE(is_f_diagonal(f.s, 1e-12 * (1.0 + frobenius_norm(f.s))));
  const auto norms = diagonal_tube_norms(f.s);
  for (std::size_t d = 1; d < norms.size(); ++d)
    EXPECT_LE(norms[d], norms[d - 1] * (1.0 + 1e-12)) << "d=" << d;
}

} // namespace

TEST(TsvdTruncated, IdentityTensor) {
  const auto id = identity_tensor(4, 3);
  const auto f = tsvd_truncated(id, 4);
  expect_invariants(f, 4);
  EXPECT_LE(max_abs_diff(reconstruct(f), id), 1e-12);
  EXPECT_LE(max_abs_diff(f.s, id), 1e-12);
}

TEST(TsvdTruncated, ExactRankFive) {
  const auto x = synthetic_exact_rank(Dims{30, 25, 8}, 5, 3);
  const auto f = tsvd_truncated(x, 5);
  expect_invariants(f, 5);
  EXPECT_LE(rel_err(x, reconstruct(f)), 1e-10);
}

TEST(TsvdTruncated, FullRankReconstruction) {
  Rng rng(50);
  for (Dims d : {Dims{6, 4, 5}, Dims{4, 6, 4}, Dims{5, 5, 1}, Dims{7, 3, 2}}) {
    const auto x = oracle::random_tensor(d, rng);
    const std::size_t r = std::min(d.n1, d.n2);
    const auto f = tsvd_truncated(x, r);
    expect_invariants(f, r);
    EXPECT_LE(rel_err(x, reconstruct(f)), 1e-10) << to_string(d);
  }
}

TEST(TsvdTruncated, ErrorNonIncreasingInRank) {
  Rng rng(51);
  const auto x = oracle::random_tensor({10, 8, 6}, rng);
  double prev = 2.0;
  for (std::size_t r = 1; r <= 8; ++r) {
    const double e = rel_err(x, reconstruct(tsvd_truncated(x, r)));
    EXPECT_LE(e, prev + 1e-12) << "r=" << r;
    prev = e;
  }
  EXPECT_LE(prev, 1e-10);
}

TEST(TsvdTruncated, ErrorMatchesDiscardedSpectrum) {
  // Per Fourier slice the truncation error is the tail of the singular
  // values; summed with Parseval this gives the tensor error.
  Rng rng(52);
  const auto x = oracle::random_tensor({7, 6, 5}, rng);
  const std::size_t r = 3;
  double tail = 0.0;
  for (std::size_t f = 0; f < 5; ++f) {
    Eigen::JacobiSVD<CMatrix> svd(oracle::fourier_slice(x, f));
    const auto &s = svd.singularValues();
    for (Eigen::Index q = r; q < s.size(); ++q)
      tail += s(q) * s(q);
  }
  const double expected = std::sqrt(tail / 5.0);
  const double got = frobenius_norm(x - reconstruct(tsvd_truncated(x, r)));
  EXPECT_NEAR(got, expected, 1e-10 * frobenius_norm(x));
}

TEST(TsvdTruncated, InvalidRank) {
  const Tensor3 x({4, 3, 2});
  EXPECT_THROW(tsvd_truncated(x, 0), InvalidArgument);
  EXPECT_THROW(tsvd_truncated(x, 4), InvalidArgument);
}

TEST(TsvdTruncated, CaseTwoAtRankFive) {
  const auto x = FunctionTensor(2, 100).materialize();
  EXPECT_LE(rel_err(x, reconstruct(tsvd_truncated(x, 5))), 1e-13);
}

TEST(TsvdRandomized, ExactRank) {
  const auto x = synthetic_exact_rank(Dims{40, 30, 6}, 4, 9);
  RandomizedOptions opt;
  opt.seed = 5;
  const auto f = tsvd_randomized(x, 4, opt);
  expect_invariants(f, 4);
  EXPECT_LE(rel_err(x, reconstruct(f)), 1e-8);
}

TEST(TsvdRandomized, IdentityFullRank) {
  const auto id = identity_tensor(12, 3);
  RandomizedOptions opt;
  opt.oversample = 0;
  EXPECT_LE(rel_err(id, reconstruct(tsvd_randomized(id, 12, opt))), 1e-10);
}

TEST(TsvdRandomized, Deterministic) {
  Rng rng(53);
  const auto x = oracle::random_tensor({20, 18, 5}, rng);
  RandomizedOptions opt;
  opt.seed = 77;
  const auto a = tsvd_randomized(x, 4, opt);
  const auto b = tsvd_randomized(x, 4, opt);
  EXPECT_EQ(a.u, b.u);
  EXPECT_EQ(a.s, b.s);
  EXPECT_EQ(a.v, b.v);
}

TEST(TsvdRandomized, NeverBeatsTruncated) {
  Rng rng(54);
  const auto x = oracle::random_tensor({20, 18, 5}, rng);
  const double et = rel_err(x, reconstruct(tsvd_truncated(x, 5)));
  const double er = rel_err(x, reconstruct(tsvd_randomized(x, 5)));
  EXPECT_GE(er, et - 1e-12);
  EXPECT_LE(er, 1.5 * et);
}

TEST(TsvdRandomized, CaseOneWithinTenfoldOfTruncated) {
  const auto x = FunctionTensor(1, 100).materialize();
  const double et = rel_err(x, reconstruct(tsvd_truncated(x, 25)));
  const double er = rel_err(x, reconstruct(tsvd_randomized(x, 25)));
  EXPECT_LE(er, 10.0 * et) << "truncated " << et << " randomized " << er;
}

TEST(TsvdRandomized, InvalidRank) {
  const Tensor3 x({12, 12, 2});
  EXPECT_THROW(tsvd_randomized(x, 3), InvalidArgument); // 3 + 10 > 12
  EXPECT_THROW(tsvd_randomized(x, 0), InvalidArgument);
}

TEST(NumericalTubalRank, Examples) {
  EXPECT_EQ(numerical_tubal_rank(Tensor3({3, 3, 4}), 1e-8), 0u);
  const auto x = synthetic_exact_rank(20, 5, 1);
  EXPECT_EQ(numerical_tubal_rank_of(x, 1e-8), 5u);
  EXPECT_EQ(numerical_tubal_rank_of(synthetic_exact_rank(20, 3, 2), 1e-8), 3u);
}

TEST(NumericalTubalRank, CountsAgainstLargestTube) {
  std::vector<double> d(3 * 3 * 2, 0.0);
  auto set = [&](std::size_t r, double a, double b) {
    d[(r * 3 + r) * 2] = a;
    d[(r * 3 + r) * 2 + 1] = b;
  };
  set(0, 3.0, 4.0); // norm 5
  set(1, 0.0, 1e-3);
  set(2, 1e-9, 0.0);
  const Tensor3 s({3, 3, 2}, d);
  EXPECT_EQ(numerical_tubal_rank(s, 1e-2), 1u);
  EXPECT_EQ(numerical_tubal_rank(s, 1e-6), 2u);
  EXPECT_EQ(numerical_tubal_rank(s, 1e-12), 3u);
}

TEST(NumericalTubalRank, FunctionTensors) {
  // The tube-norm rule at 1e-8 gives 4 for case 2; the published
  // 25 / 5 / 43 are reproduced by the same rule at 1e-14.
  const auto c2 = FunctionTensor(2, 100).materialize();
  EXPECT_EQ(numerical_tubal_rank_of(c2, 1e-8), 4u);
  EXPECT_EQ(numerical_tubal_rank_of(c2, 1e-14), 5u);
  EXPECT_EQ(numerical_tubal_rank_of(FunctionTensor(1, 100).materialize(), 1e-14),
            25u);
  EXPECT_EQ(numerical_tubal_rank_of(FunctionTensor(3, 100).materialize(), 1e-14),
            43u);
}

TEST(EckartYoung, TruncatedBeatsCross) {
  Rng rng(55);
  for (int trial = 0; trial < 5; ++trial) {
    const auto x = oracle::random_tensor({12, 12, 5}, rng);
    for (std::size_t r = 1; r <= 6; ++r) {
      CrossOptions opt;
      opt.eps = 0.0;
      opt.max_rank = r;
      opt.seed = static_cast<std::uint64_t>(trial);
      const auto cf = acta(x, opt);
      const double ec = rel_err(x, reconstruct(cf));
      const double et =
          rel_err(x, reconstruct(tsvd_truncated(x, cf.rank())));
      EXPECT_LE(et, ec + 1e-10) << "trial " << trial << " r=" << r;
    }
  }
}
