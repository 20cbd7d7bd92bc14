#pragma once

#include <cmath>
#include <cstddef>
#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tubal/cross.hpp"
#include "tubal/error.hpp"
#include "tubal/factorizations.hpp"
#include "tubal/random.hpp"
#include "tubal/tensor3.hpp"

namespace tubal {

/// Observation pattern; true marks a known entry. Stored in the same
/// tube-fastest order as Tensor3.
class Mask {
public:
  Mask(Dims dims, std::vector<bool> observed)
      : dims_(dims), observed_(std::move(observed)) {
    if (observed_.size() != dims_.size())
      throw DimensionMismatch("mask length does not match dims " +
                              to_string(dims_));
    count_ = 0;
    for (bool b : observed_)
      count_ += b ? 1 : 0;
    if (count_ == 0)
      throw MaskError("mask has no observed entries");
  }

  static Mask all(Dims dims) { return Mask(dims, std::vector<bool>(dims.size(), true)); }

  /// Each entry missing independently with probability missing_fraction.
  static Mask random(Dims dims, double missing_fraction, std::uint64_t seed) {
    if (!(missing_fraction >= 0.0 && missing_fraction < 1.0))
      throw InvalidArgument("missing fraction must lie in [0, 1)");
    Rng rng(seed);
    std::vector<bool> obs(dims.size());
    for (std::size_t p = 0; p < obs.size(); ++p)
      obs[p] = rng.uniform() >= missing_fraction;
    return Mask(dims, std::move(obs));
  }

  const Dims &dims() const { return dims_; }
  bool operator[](std::size_t p) const { return observed_[p]; }
  bool observed(std::size_t i, std::size_t j, std::size_t k) const {
    return observed_[(i * dims_.n2 + j) * dims_.n3 + k];
  }
  std::size_t observed_count() const { return count_; }

  /// 1 on observed entries, 0 elsewhere.
  Tensor3 indicator() const {
    std::vector<double> v(observed_.size());
    for (std::size_t p = 0; p < v.size(); ++p)
      v[p] = observed_[p] ? 1.0 : 0.0;
    return Tensor3(dims_, std::move(v));
  }

private:
  Dims dims_;
  std::vector<bool> observed_;
  std::size_t count_ = 0;
};

/// Keeps observed entries and zeroes the rest.
inline Tensor3 project(const Tensor3 &x, const Mask &m) {
  if (x.dims() != m.dims())
    throw DimensionMismatch("project: tensor " + to_string(x.dims()) +
                            " vs mask " + to_string(m.dims()));
  std::vector<double> v(x.size());
  for (std::size_t p = 0; p < v.size(); ++p)
    v[p] = m[p] ? x.data()[p] : 0.0;
  return Tensor3(x.dims(), std::move(v));
}

/// 10 log10(255^2 / MSE); +infinity when the tensors agree exactly.
inline double psnr(const Tensor3 &x, const Tensor3 &ref) {
  detail::check_same_dims(x, ref, "psnr");
  double se = 0.0;
  for (std::size_t p = 0; p < x.size(); ++p) {
    const double d = x.data()[p] - ref.data()[p];
    se += d * d;
  }
  const double mse = se / static_cast<double>(x.size());
  if (mse == 0.0)
    return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

/// ||x - xhat||_F / ||x||_F.
inline double relative_error(const Tensor3 &x, const Tensor3 &xhat) {
  detail::check_same_dims(x, xhat, "relative_error");
  const double ref = frobenius_norm(x);
  if (ref == 0.0)
    throw InvalidArgument("relative_error: reference tensor has zero norm");
  double se = 0.0;
  for (std::size_t p = 0; p < x.size(); ++p) {
    const double d = x.data()[p] - xhat.data()[p];
    se += d * d;
  }
  return std::sqrt(se) / ref;
}

enum class CompletionEngine { acta_cur, tsvd, randomized };

inline CompletionEngine parse_engine(const std::string &s) {
  if (s == "acta" || s == "acta_cur")
    return CompletionEngine::acta_cur;
  if (s == "tsvd")
    return CompletionEngine::tsvd;
  if (s == "rtsvd" || s == "randomized")
    return CompletionEngine::randomized;
  throw InvalidArgument("unknown completion engine '" + s + "'");
}

inline const char *to_string(CompletionEngine e) {
  switch (e) {
  case CompletionEngine::acta_cur:
    return "acta";
  case CompletionEngine::tsvd:
    return "tsvd";
  case CompletionEngine::randomized:
    break;
  }
  return "rtsvd";
}

/// Starting value of the missing entries.
enum class InitialFill { zeros, observed_mean };

struct CompletionOptions {
  CompletionEngine engine = CompletionEngine::acta_cur;
  std::size_t rank = 70;
  InitialFill initial_fill = InitialFill::zeros;
  /// When positive, the rank grows linearly from 1 to `rank` over this many
  /// iterations; the early exit is only checked once the full rank is
  /// reached.
  std::size_t rank_ramp = 0;
  std::size_t max_iters = 50;
  /// Stop once ||X_{n+1} - X_n|| / ||X_n|| falls below this.
  double min_relative_change = 1e-4;
  std::uint64_t seed = 0;
  /// Oversampling for the randomized engine.
  std::size_t oversample = 10;
};

struct CompletionStep {
  /// Against the ground truth when one was supplied, NaN otherwise.
  double psnr_db;
  /// ||P_obs(Y_n) - P_obs(M)|| / ||P_obs(M)||: misfit of the low-rank
  /// estimate on the known entries.
  double observed_residual;
  /// ||X_{n+1} - X_n|| / ||X_n||.
  double relative_change;
  /// Largest |X_{n+1} - M| over observed entries (zero by construction).
  double observed_mismatch;
};

struct CompletionReport {
  std::size_t iterations = 0;
  std::vector<CompletionStep> history;
  Tensor3 result;
};

/// Target rank at a given iteration under the ramp schedule.
inline std::size_t scheduled_rank(const CompletionOptions &opt,
                                  std::size_t iteration) {
  if (opt.rank_ramp == 0 || iteration >= opt.rank_ramp)
    return opt.rank;
  return std::min(opt.rank, 1 + (opt.rank - 1) * iteration / opt.rank_ramp);
}

/// Rank-R approximation used as the low-rank step.
inline Tensor3 low_rank_step(const Tensor3 &x, const CompletionOptions &opt,
                             std::size_t iteration) {
  const std::size_t rank = scheduled_rank(opt, iteration);
  switch (opt.engine) {
  case CompletionEngine::acta_cur: {
    CrossOptions co;
    co.eps = 0.0;
    co.max_rank = rank;
    co.seed = derive_seed(opt.seed, iteration);
    const auto cf = acta(x, co);
    if (cf.rank() == 0)
      return Tensor3(x.dims());
    return cur_approximation(x, cf.rows, cf.cols);
  }
  case CompletionEngine::tsvd:
    return reconstruct(tsvd_truncated(x, rank));
  case CompletionEngine::randomized:
    break;
  }
  RandomizedOptions ro;
  ro.oversample = opt.oversample;
  ro.seed = derive_seed(opt.seed, iteration);
  return reconstruct(tsvd_randomized(x, rank, ro));
}

/// Observed entries kept, missing ones set to the mean of the observed
/// entries of the same frontal slice (or of all observed entries when the
/// slice has none).
inline Tensor3 mean_filled(const Tensor3 &observed, const Mask &mask) {
  const Dims d = observed.dims();
  std::vector<double> sum(d.n3, 0.0), cnt(d.n3, 0.0);
  double all = 0.0;
  for (std::size_t p = 0; p < observed.size(); ++p)
    if (mask[p]) {
      sum[p % d.n3] += observed.data()[p];
      cnt[p % d.n3] += 1.0;
      all += observed.data()[p];
    }
  all /= static_cast<double>(mask.observed_count());
  std::vector<double> v(observed.size());
  for (std::size_t p = 0; p < v.size(); ++p) {
    const std::size_t k = p % d.n3;
    v[p] = mask[p] ? observed.data()[p]
                   : (cnt[k] > 0.0 ? sum[k] / cnt[k] : all);
  }
  return Tensor3(d, std::move(v));
}

/// Iterative low-tubal-rank completion.
///
/// X_0 holds the observed entries and zeros (or the observed mean)
/// elsewhere. Each iteration forms
/// Y_n = L(X_n) with the chosen engine and then restores the known entries:
/// X_{n+1} = P_obs(M) + P_missing(Y_n).
inline CompletionReport complete(const Tensor3 &observed, const Mask &mask,
                                 const CompletionOptions &opt,
                                 const std::optional<Tensor3> &truth = {}) {
  if (observed.dims() != mask.dims())
    throw DimensionMismatch("complete: data " + to_string(observed.dims()) +
                            " vs mask " + to_string(mask.dims()));
  if (opt.max_iters == 0)
    throw InvalidArgument("complete: need at least one iteration");
  if (opt.rank == 0)
    throw InvalidArgument("complete: rank must be positive");
  if (truth && truth->dims() != observed.dims())
    throw DimensionMismatch("complete: ground truth dims differ");

  const Tensor3 known = project(observed, mask);
  const double known_norm = frobenius_norm(known);
  CompletionReport report;
  Tensor3 x = opt.initial_fill == InitialFill::observed_mean
                  ? mean_filled(observed, mask)
                  : known;
  for (std::size_t it = 0; it < opt.max_iters; ++it) {
    const Tensor3 y = low_rank_step(x, opt, it);
    std::vector<double> next(x.size());
    double fit2 = 0.0, change2 = 0.0, mismatch = 0.0;
    for (std::size_t p = 0; p < next.size(); ++p) {
      if (mask[p]) {
        next[p] = known.data()[p];
        const double r = y.data()[p] - known.data()[p];
        fit2 += r * r;
        mismatch = std::max(mismatch, std::abs(next[p] - observed.data()[p]));
      } else {
        next[p] = y.data()[p];
      }
      const double c = next[p] - x.data()[p];
      change2 += c * c;
    }
    const double xn = frobenius_norm(x);
    Tensor3 xnext(x.dims(), std::move(next));
    CompletionStep step;
    step.psnr_db = truth ? psnr(xnext, *truth)
                         : std::numeric_limits<double>::quiet_NaN();
    step.observed_residual =
        known_norm > 0.0 ? std::sqrt(fit2) / known_norm : std::sqrt(fit2);
    step.relative_change = xn > 0.0 ? std::sqrt(change2) / xn : std::sqrt(change2);
    step.observed_mismatch = mismatch;
    report.history.push_back(step);
    report.iterations = it + 1;
    x = std::move(xnext);
    if (it + 1 >= opt.rank_ramp &&
        step.relative_change < opt.min_relative_change)
      break;
  }
  report.result = std::move(x);
  return report;
}

} // namespace tubal
