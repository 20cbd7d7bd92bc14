#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "oracles.hpp"
#include "tubal/fft.hpp"
#include "tubal/fourier.hpp"
#include "tubal/parallel.hpp"

using namespace tubal;

namespace {

std::vector<Complex> random_signal(std::size_t n, Rng &rng) {
  std::vector<Complex> x(n);
  for (auto &v : x)
    v = Complex(rng.normal(), rng.normal());
  return x;
}

double max_err(const std::vector<Complex> &a, const std::vector<Complex> &b) {
  double m = 0.0, s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    m = std::max(m, std::abs(a[k] - b[k]));
    s = std::max(s, std::abs(b[k]));
  }
  return s > 0.0 ? m / s : m;
}

} // namespace

class FftLength : public ::testing::TestWithParam<std::size_t> {};

TEST_P(FftLength, MatchesNaiveDft) {
  const std::size_t n = GetParam();
  Rng rng(100 + n);
  const auto x = random_signal(n, rng);
  std::vector<Complex> y(n);
  fft_plan(n).forward(x, y);
  EXPECT_LT(max_err(y, oracle::dft(x)), 1e-12) << "n=" << n;
}

TEST_P(FftLength, RoundTrip) {
  const std::size_t n = GetParam();
  Rng rng(200 + n);
  const auto x = random_signal(n, rng);
  std::vector<Complex> y(n), z(n);
  const auto &plan = fft_plan(n);
  plan.forward(x, y);
  plan.inverse(y, z);
  EXPECT_LT(max_err(z, x), 1e-12) << "n=" << n;
}

INSTANTIATE_TEST_SUITE_P(Lengths, FftLength,
                         ::testing::Values(1, 2, 3, 4, 5, 6, 7, 8, 9, 11, 12,
                                           13, 15, 16, 17, 19, 23, 25, 27, 30,
                                           31, 32, 49, 60, 64, 97, 100, 101,
                                           120, 127, 128, 200, 243, 256, 257));

TEST(FftPlan, BluesteinOnlyForLargePrimes) {
  EXPECT_FALSE(FftPlan(100).uses_bluestein());
  EXPECT_FALSE(FftPlan(13 * 13).uses_bluestein());
  EXPECT_TRUE(FftPlan(17).uses_bluestein());
  EXPECT_TRUE(FftPlan(2 * 97).uses_bluestein());
  EXPECT_THROW(FftPlan(0), InvalidArgument);
}

TEST(FftPlan, Impulse) {
  std::vector<Complex> x(6, 0.0), y(6);
  x[0] = 1.0;
  fft_plan(6).forward(x, y);
  for (const auto &v : y)
    EXPECT_NEAR(std::abs(v - Complex(1.0)), 0.0, 1e-15);
}

TEST(FourierIndexing, HalfSpectrum) {
  EXPECT_EQ(half_spectrum(1), 1u);
  EXPECT_EQ(half_spectrum(4), 3u);
  EXPECT_EQ(half_spectrum(5), 3u);
  EXPECT_EQ(conjugate_index(0, 4), 0u);
  EXPECT_EQ(conjugate_index(1, 4), 3u);
  EXPECT_EQ(conjugate_index(2, 4), 2u);
  EXPECT_TRUE(self_conjugate(0, 4));
  EXPECT_TRUE(self_conjugate(2, 4));
  EXPECT_FALSE(self_conjugate(1, 4));
  EXPECT_FALSE(self_conjugate(2, 5));
}

TEST(FftMode3, ZeroTensor) {
  const auto xh = fft_mode3(Tensor3({2, 3, 4}));
  EXPECT_EQ(frobenius_norm(xh), 0.0);
  EXPECT_TRUE(xh.origin_real());
}

TEST(FftMode3, IdentityGivesIdentitySlices) {
  const auto xh = fft_mode3(Tensor3::identity(3, 5));
  for (std::size_t f = 0; f < 5; ++f)
    EXPECT_TRUE(xh.frontal(f).isApprox(CMatrix::Identity(3, 3), 1e-15));
}

TEST(FftMode3, MatchesNaiveDftPerTube) {
  Rng rng(21);
  const auto x = oracle::random_tensor({3, 4, 5}, rng);
  const auto xh = fft_mode3(x);
  for (std::size_t f = 0; f < 5; ++f) {
    const CMatrix ref = oracle::fourier_slice(x, f);
    EXPECT_LT((xh.frontal(f) - ref).norm(), 1e-12 * ref.norm());
  }
}

TEST(FftMode3, Parseval) {
  Rng rng(22);
  for (std::size_t n3 : {1, 2, 7, 8, 17}) {
    const auto x = oracle::random_tensor({3, 4, n3}, rng);
    const double lhs = std::pow(frobenius_norm(fft_mode3(x)), 2);
    const double rhs = static_cast<double>(n3) * std::pow(frobenius_norm(x), 2);
    EXPECT_NEAR(lhs, rhs, 1e-12 * rhs) << "n3=" << n3;
  }
}

TEST(FftMode3, ConjugateSymmetryOfRealInput) {
  Rng rng(23);
  for (std::size_t n3 : {1, 4, 5, 16}) {
    const auto x = oracle::random_tensor({3, 3, n3}, rng);
    EXPECT_LT(conjugate_symmetry_defect(fft_mode3(x)), 1e-12) << "n3=" << n3;
  }
}

TEST(IfftMode3, RoundTrip) {
  Rng rng(24);
  for (std::size_t n3 : {1, 3, 6, 10, 19, 64}) {
    const auto x = oracle::random_tensor({4, 3, n3}, rng);
    double residue = -1.0;
    const auto y = ifft_mode3(fft_mode3(x), &residue);
    EXPECT_LT(oracle::rel_diff(y, x), 1e-12) << "n3=" << n3;
    EXPECT_GE(residue, 0.0);
    EXPECT_LT(residue, 1e-10 * frobenius_norm(x));
  }
}

TEST(IfftMode3, ZeroStaysZero) {
  const auto y = ifft_mode3(FourierTensor3({2, 2, 3}, true));
  EXPECT_EQ(frobenius_norm(y), 0.0);
}

TEST(IfftMode3, SymmetryViolationDetected) {
  Rng rng(25);
  const auto x = oracle::random_tensor({3, 3, 6}, rng);
  auto xh = fft_mode3(x);
  CMatrix s1 = xh.frontal(1);
  s1(0, 0) += Complex(0.0, 5.0);
  xh.set_frontal(1, s1);
  EXPECT_THROW(ifft_mode3(xh), SymmetryViolation);
}

TEST(FillConjugateSymmetric, SingleSliceIsNoOp) {
  Rng rng(26);
  const auto xh = fft_mode3(oracle::random_tensor({2, 2, 1}, rng));
  const auto filled = fill_conjugate_symmetric(xh, 1);
  EXPECT_EQ(filled.frontal(0), xh.frontal(0));
}

TEST(FillConjugateSymmetric, EvenDepth) {
  Rng rng(27);
  auto xh = fft_mode3(oracle::random_tensor({2, 3, 4}, rng));
  const CMatrix s1 = xh.frontal(1);
  xh.set_frontal(3, CMatrix::Zero(2, 3));
  const auto filled = fill_conjugate_symmetric(xh, 3);
  EXPECT_EQ(filled.frontal(3), CMatrix(s1.conjugate()));
  // The Nyquist slice of real input is real.
  EXPECT_LT(filled.frontal(2).imag().norm(), 1e-12 * filled.frontal(2).norm());
  EXPECT_THROW(fill_conjugate_symmetric(xh, 2), InvalidArgument);
}

TEST(FillConjugateSymmetric, HalfProductEqualsFullProduct) {
  Rng rng(28);
  const std::size_t n3 = 7;
  const auto a = oracle::random_tensor({3, 4, n3}, rng);
  const auto b = oracle::random_tensor({4, 2, n3}, rng);
  const auto ah = fft_mode3(a), bh = fft_mode3(b);
  FourierTensor3 full({3, 2, n3}, true), half({3, 2, n3}, true);
  for (std::size_t f = 0; f < n3; ++f) {
    const CMatrix p = ah.frontal(f) * bh.frontal(f);
    full.set_frontal(f, p);
    if (f < half_spectrum(n3))
      half.set_frontal(f, p);
  }
  const auto filled = fill_conjugate_symmetric(half, half_spectrum(n3));
  for (std::size_t f = 0; f < n3; ++f)
    EXPECT_LT((filled.frontal(f) - full.frontal(f)).norm(),
              1e-12 * full.frontal(f).norm());
}

TEST(FourierTensor3, DataLengthChecked) {
  EXPECT_THROW(FourierTensor3({2, 2, 2}, std::vector<Complex>(3), true),
               DimensionMismatch);
}

TEST(FftRows, RoundTrip) {
  Rng rng(29);
  Matrix m(5, 9);
  for (Eigen::Index r = 0; r < 5; ++r)
    for (Eigen::Index c = 0; c < 9; ++c)
      m(r, c) = rng.normal();
  EXPECT_LT((ifft_rows(fft_rows(m)) - m).norm(), 1e-12 * m.norm());
}

TEST(Parallel, ResultsIndependentOfThreadCount) {
  Rng rng(30);
  const auto x = oracle::random_tensor({9, 7, 12}, rng);
  const unsigned before = num_threads();
  set_num_threads(1);
  const auto one = fft_mode3(x);
  set_num_threads(4);
  const auto four = fft_mode3(x);
  set_num_threads(before);
  for (std::size_t p = 0; p < one.data().size(); ++p)
    ASSERT_EQ(one.data()[p], four.data()[p]);
}

TEST(Parallel, PropagatesExceptions) {
  const unsigned before = num_threads();
  set_num_threads(3);
  EXPECT_THROW(parallel_for(50,
                            [](std::size_t i) {
                              if (i == 17)
                                throw InvalidArgument("boom");
                            }),
               InvalidArgument);
  set_num_threads(before);
}
