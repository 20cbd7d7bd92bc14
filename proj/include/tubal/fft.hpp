#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "tubal/error.hpp"

namespace tubal {

/// Complex DFT of one fixed length.
///
/// Lengths whose prime factors are all <= 13 use a recursive mixed-radix
/// Cooley-Tukey decomposition (specialized radix-2/4 butterflies, a generic
/// butterfly for 3, 5, 7, 11, 13). Other lengths go through Bluestein's chirp
/// transform on a power-of-two grid. The forward transform is unnormalized;
/// the inverse carries the 1/n factor.
///
/// A plan is immutable after construction and may be shared across threads.
class FftPlan {
public:
  explicit FftPlan(std::size_t n) : n_(n) {
    if (n == 0)
      throw InvalidArgument("FFT length must be positive");
    twiddles_.resize(n);
    for (std::size_t k = 0; k < n; ++k)
      twiddles_[k] = root(k, n);

    std::size_t rest = n;
    std::vector<std::size_t> radices;
    while (rest % 4 == 0) {
      radices.push_back(4);
      rest /= 4;
    }
    while (rest % 2 == 0) {
      radices.push_back(2);
      rest /= 2;
    }
    for (std::size_t p = 3; p * p <= rest; p += 2)
      while (rest % p == 0) {
        radices.push_back(p);
        rest /= p;
      }
    if (rest > 1)
      radices.push_back(rest);

    for (std::size_t p : radices)
      if (p > kMaxDirectRadix) {
        init_bluestein();
        return;
      }

    std::size_t m = n;
    for (std::size_t p : radices) {
      m /= p;
      stages_.emplace_back(p, m);
    }
  }

  std::size_t size() const { return n_; }
  bool uses_bluestein() const { return inner_ != nullptr; }

  /// out[k] = sum_t in[t] exp(-2 pi i k t / n). in and out must not overlap.
  void forward(std::span<const std::complex<double>> in,
               std::span<std::complex<double>> out) const {
    check(in, out);
    if (n_ == 1) {
      out[0] = in[0];
      return;
    }
    if (inner_) {
      bluestein(in.data(), out.data());
      return;
    }
    work(out.data(), in.data(), 1, 0);
  }

  /// out[t] = (1/n) sum_k in[k] exp(2 pi i k t / n). in and out must not
  /// overlap.
  void inverse(std::span<const std::complex<double>> in,
               std::span<std::complex<double>> out) const {
    check(in, out);
    thread_local std::vector<std::complex<double>> tmp;
    tmp.resize(n_);
    for (std::size_t k = 0; k < n_; ++k)
      tmp[k] = std::conj(in[k]);
    forward(tmp, out);
    const double scale = 1.0 / static_cast<double>(n_);
    for (std::size_t k = 0; k < n_; ++k)
      out[k] = std::conj(out[k]) * scale;
  }

private:
  static constexpr std::size_t kMaxDirectRadix = 13;

  static std::complex<double> root(std::size_t k, std::size_t n) {
    const double phase = -2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(n);
    return {std::cos(phase), std::sin(phase)};
  }

  void check(std::span<const std::complex<double>> in,
             std::span<std::complex<double>> out) const {
    if (in.size() != n_ || out.size() != n_)
      throw DimensionMismatch("FFT buffer length does not match plan length " +
                              std::to_string(n_));
  }

  // Decimation in time: the sub-transforms of the p interleaved
  // subsequences are written contiguously, then combined in place.
  void work(std::complex<double> *out, const std::complex<double> *in,
            std::size_t stride, std::size_t stage) const {
    const auto [p, m] = stages_[stage];
    if (m == 1) {
      for (std::size_t q = 0; q < p; ++q)
        out[q] = in[q * stride];
    } else {
      for (std::size_t q = 0; q < p; ++q)
        work(out + q * m, in + q * stride, stride * p, stage + 1);
    }
    switch (p) {
    case 2:
      butterfly2(out, stride, m);
      break;
    case 4:
      butterfly4(out, stride, m);
      break;
    default:
      butterfly_generic(out, stride, p, m);
    }
  }

  void butterfly2(std::complex<double> *out, std::size_t stride,
                  std::size_t m) const {
    for (std::size_t k = 0; k < m; ++k) {
      const auto t = out[k + m] * twiddles_[k * stride];
      out[k + m] = out[k] - t;
      out[k] += t;
    }
  }

  void butterfly4(std::complex<double> *out, std::size_t stride,
                  std::size_t m) const {
    for (std::size_t k = 0; k < m; ++k) {
      const auto s0 = out[k + m] * twiddles_[k * stride];
      const auto s1 = out[k + 2 * m] * twiddles_[2 * k * stride];
      const auto s2 = out[k + 3 * m] * twiddles_[3 * k * stride];
      const auto s5 = out[k] - s1;
      const auto s6 = out[k] + s1;
      const auto s3 = s0 + s2;
      const auto s4 = s0 - s2;
      const std::complex<double> minus_i_s4(s4.imag(), -s4.real());
      out[k] = s6 + s3;
      out[k + 2 * m] = s6 - s3;
      out[k + m] = s5 + minus_i_s4;
      out[k + 3 * m] = s5 - minus_i_s4;
    }
  }

  void butterfly_generic(std::complex<double> *out, std::size_t stride,
                         std::size_t p, std::size_t m) const {
    std::complex<double> scratch[kMaxDirectRadix];
    for (std::size_t u = 0; u < m; ++u) {
      for (std::size_t q = 0; q < p; ++q)
        scratch[q] = out[u + q * m];
      for (std::size_t q1 = 0; q1 < p; ++q1) {
        const std::size_t k = u + q1 * m;
        auto sum = scratch[0];
        std::size_t idx = 0;
        const std::size_t step = (stride * k) % n_;
        for (std::size_t q = 1; q < p; ++q) {
          idx += step;
          if (idx >= n_)
            idx -= n_;
          sum += scratch[q] * twiddles_[idx];
        }
        out[k] = sum;
      }
    }
  }

  void init_bluestein() {
    std::size_t m = 1;
    while (m < 2 * n_ - 1)
      m <<= 1;
    chirp_.resize(n_);
    const std::uint64_t two_n = 2 * static_cast<std::uint64_t>(n_);
    for (std::size_t k = 0; k < n_; ++k) {
      // exp(-i pi k^2 / n), with k^2 reduced mod 2n to keep the phase exact.
      const auto kk = (static_cast<std::uint64_t>(k) * k) % two_n;
      const double phase = -std::numbers::pi * static_cast<double>(kk) /
                           static_cast<double>(n_);
      chirp_[k] = {std::cos(phase), std::sin(phase)};
    }
    inner_ = std::make_unique<FftPlan>(m);
    std::vector<std::complex<double>> b(m, 0.0);
    b[0] = std::conj(chirp_[0]);
    for (std::size_t k = 1; k < n_; ++k) {
      b[k] = std::conj(chirp_[k]);
      b[m - k] = std::conj(chirp_[k]);
    }
    kernel_.resize(m);
    inner_->forward(b, kernel_);
  }

  void bluestein(const std::complex<double> *in,
                 std::complex<double> *out) const {
    const std::size_t m = inner_->size();
    thread_local std::vector<std::complex<double>> a, fa;
    a.assign(m, 0.0);
    fa.resize(m);
    for (std::size_t k = 0; k < n_; ++k)
      a[k] = in[k] * chirp_[k];
    inner_->forward(a, fa);
    for (std::size_t k = 0; k < m; ++k)
      fa[k] *= kernel_[k];
    // inverse of length m via conjugation
    for (std::size_t k = 0; k < m; ++k)
      fa[k] = std::conj(fa[k]);
    inner_->forward(fa, a);
    const double scale = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < n_; ++k)
      out[k] = std::conj(a[k]) * scale * chirp_[k];
  }

  std::size_t n_;
  std::vector<std::complex<double>> twiddles_;
  std::vector<std::pair<std::size_t, std::size_t>> stages_;
  std::vector<std::complex<double>> chirp_;
  std::vector<std::complex<double>> kernel_;
  std::unique_ptr<FftPlan> inner_;
};

/// Shared, lazily built plan for length n.
inline const FftPlan &fft_plan(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<FftPlan>> cache;
  std::lock_guard lock(mutex);
  auto &slot = cache[n];
  if (!slot)
    slot = std::make_unique<FftPlan>(n);
  return *slot;
}

} // namespace tubal
