#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tubal/algebra.hpp"
#include "tubal/error.hpp"
#include "tubal/fourier.hpp"
#include "tubal/linalg.hpp"
#include "tubal/random.hpp"
#include "tubal/tensor3.hpp"

namespace tubal {

// ---------------------------------------------------------------------------
// Slice sources
// ---------------------------------------------------------------------------

/// Anything that can hand out individual lateral slices (n1 x n3, row i is
/// tube (i, j)) and horizontal slices (n2 x n3, row j is tube (i, j)) of a
/// tensor without exposing the whole tensor. Implementations must tolerate
/// concurrent calls.
template <class S>
concept SliceSource = requires(const S &s, std::size_t idx) {
  { s.dims() } -> std::convertible_to<Dims>;
  { s.lateral_slice(idx) } -> std::convertible_to<Matrix>;
  { s.horizontal_slice(idx) } -> std::convertible_to<Matrix>;
};

/// Slice source over an in-memory tensor.
class TensorSlices {
public:
  explicit TensorSlices(const Tensor3 &x) : x_(&x) {}
  Dims dims() const { return x_->dims(); }
  Matrix lateral_slice(std::size_t j) const { return tubal::lateral_slice(*x_, j); }
  Matrix horizontal_slice(std::size_t i) const {
    return tubal::horizontal_slice(*x_, i);
  }

private:
  const Tensor3 *x_;
};

struct SliceRequest {
  SliceKind kind;
  std::size_t index;
};

/// Wraps a slice source and records every request made through it.
template <SliceSource S> class AuditedSlices {
public:
  explicit AuditedSlices(const S &inner) : inner_(&inner) {}

  Dims dims() const { return inner_->dims(); }

  Matrix lateral_slice(std::size_t j) const {
    log(SliceKind::lateral, j);
    return inner_->lateral_slice(j);
  }
  Matrix horizontal_slice(std::size_t i) const {
    log(SliceKind::horizontal, i);
    return inner_->horizontal_slice(i);
  }

  std::vector<SliceRequest> requests() const {
    std::lock_guard lock(mutex_);
    return requests_;
  }
  std::size_t count(SliceKind kind) const {
    std::lock_guard lock(mutex_);
    return static_cast<std::size_t>(
        std::count_if(requests_.begin(), requests_.end(),
                      [&](const SliceRequest &r) { return r.kind == kind; }));
  }

private:
  void log(SliceKind kind, std::size_t idx) const {
    std::lock_guard lock(mutex_);
    requests_.push_back({kind, idx});
  }

  const S *inner_;
  mutable std::mutex mutex_;
  mutable std::vector<SliceRequest> requests_;
};

// ---------------------------------------------------------------------------
// Result types
// ---------------------------------------------------------------------------

/// One pass of the cross loop. rho is the norm estimate of the new rank-1
/// term, mu the running estimate of ||U * V||_F including that term.
/// Rejected passes (the one that met the tolerance) are kept for the record.
struct IterationRecord {
  double rho = 0.0;
  double mu = 0.0;
  std::size_t row = 0;
  std::size_t col = 0;
  bool accepted = false;
};

enum class StopReason {
  tolerance,     ///< rho < eps * mu
  rank_budget,   ///< max_rank terms accepted
  exhausted,     ///< no unused column index left
  zero_residual, ///< the residual lateral slice vanished on unused rows
};

inline const char *to_string(StopReason r) {
  switch (r) {
  case StopReason::tolerance:
    return "tolerance";
  case StopReason::rank_budget:
    return "rank_budget";
  case StopReason::exhausted:
    return "exhausted";
  case StopReason::zero_residual:
    break;
  }
  return "zero_residual";
}

/// Matrix cross approximation x ~ u * v with u (n1 x r), v (r x n2).
struct AcaFactors {
  Matrix u;
  Matrix v;
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  std::vector<IterationRecord> history;
  StopReason stop = StopReason::tolerance;

  std::size_t rank() const { return rows.size(); }
};

/// Tubal cross approximation x ~ u * v (t-product) with u (n1 x r x n3) a
/// stack of tube-normalized lateral slices and v (r x n2 x n3) a stack of
/// horizontal residual slices. For r = 0 both factors are empty.
struct CrossFactors {
  Dims dims;
  Tensor3 u;
  Tensor3 v;
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  std::vector<IterationRecord> history;
  StopReason stop = StopReason::tolerance;

  std::size_t rank() const { return rows.size(); }
};

/// Raised when no unused row offers an invertible pivot tube; carries the
/// factors accumulated so far.
class Breakdown : public Error {
public:
  Breakdown(const std::string &what, CrossFactors partial)
      : Error(what), partial_(std::move(partial)) {}
  const CrossFactors &partial() const noexcept { return partial_; }

private:
  CrossFactors partial_;
};

/// u * v, or the zero tensor when the approximation is empty.
inline Tensor3 reconstruct(const CrossFactors &f) {
  if (f.rank() == 0)
    return Tensor3(f.dims);
  return tprod(f.u, f.v);
}

struct CrossOptions {
  /// Relative tolerance: stop once rho < eps * mu. eps = 0 runs exactly
  /// max_rank passes (unless the residual vanishes).
  double eps = 1e-8;
  /// Defaults to min(n1, n2).
  std::optional<std::size_t> max_rank;
  /// Seeds the choice of the first column index.
  std::uint64_t seed = 0;
  /// Pivot tubes need min |coef| > pivot_tol * max |coef| in the Fourier
  /// domain.
  double pivot_tol = kTubeInverseTol;
};

namespace detail {

/// Relative size below which a frequency of a residual column (or, for
/// matrices, the whole residual column) counts as exhausted.
inline constexpr double kInactiveFrequencyTol = 1e-11;

inline void check_cross_options(const CrossOptions &opt, const Dims &d) {
  if (!(opt.eps >= 0.0) || !std::isfinite(opt.eps))
    throw InvalidArgument("cross approximation: eps must be a finite value >= 0");
  if (opt.max_rank && *opt.max_rank > std::min(d.n1, d.n2))
    throw InvalidArgument("cross approximation: max_rank exceeds min(n1, n2)");
}

/// Unused indices ordered by decreasing score, lowest index first on ties.
inline std::vector<std::size_t>
ranked_unused(const std::vector<double> &score, const std::vector<bool> &used) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < score.size(); ++i)
    if (!used[i])
      order.push_back(i);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a,
                                                   std::size_t b) {
    return score[a] > score[b];
  });
  return order;
}

/// Highest-scoring unused index (lowest index on ties), if any.
inline std::optional<std::size_t> argmax_unused(const std::vector<double> &score,
                                                const std::vector<bool> &used) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < score.size(); ++i)
    if (!used[i] && (!best || score[i] > score[*best]))
      best = i;
  return best;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Matrix adaptive cross approximation
// ---------------------------------------------------------------------------

/// Adaptive cross approximation of a matrix with partial pivoting.
///
/// Each pass takes the residual of the current column, pivots on its largest
/// unused entry, scales the column by that entry, takes the residual of the
/// pivot row and chooses the next column at the row's largest unused entry.
/// The first column is drawn from the seeded generator.
inline AcaFactors aca_matrix(const Matrix &x, const CrossOptions &opt = {}) {
  const auto n1 = static_cast<std::size_t>(x.rows());
  const auto n2 = static_cast<std::size_t>(x.cols());
  if (n1 == 0 || n2 == 0)
    throw InvalidArgument("aca_matrix: empty matrix");
  detail::check_cross_options(opt, {n1, n2, 1});
  const std::size_t budget = opt.max_rank.value_or(std::min(n1, n2));

  AcaFactors out;
  std::vector<Eigen::VectorXd> us;
  std::vector<Eigen::VectorXd> vs;
  std::vector<bool> used_rows(n1, false), used_cols(n2, false);
  Rng rng(opt.seed);
  std::size_t j = rng.index(n2);
  double mu2 = 0.0;

  auto finish = [&](StopReason why) {
    const auto r = static_cast<Eigen::Index>(us.size());
    out.u.resize(static_cast<Eigen::Index>(n1), r);
    out.v.resize(r, static_cast<Eigen::Index>(n2));
    for (Eigen::Index l = 0; l < r; ++l) {
      out.u.col(l) = us[static_cast<std::size_t>(l)];
      out.v.row(l) = vs[static_cast<std::size_t>(l)].transpose();
    }
    out.stop = why;
    return out;
  };

  if (budget == 0)
    return finish(StopReason::rank_budget);

  while (true) {
    Eigen::VectorXd col = x.col(static_cast<Eigen::Index>(j));
    for (std::size_t l = 0; l < us.size(); ++l)
      col -= us[l] * vs[l](static_cast<Eigen::Index>(j));

    std::vector<double> score(n1);
    for (std::size_t i = 0; i < n1; ++i)
      score[i] = col(static_cast<Eigen::Index>(i)) *
                 col(static_cast<Eigen::Index>(i));
    double unused2 = 0.0;
    for (std::size_t r = 0; r < n1; ++r)
      if (!used_rows[r])
        unused2 += score[r];
    const double scale = x.col(static_cast<Eigen::Index>(j)).norm();
    const auto pivot = detail::argmax_unused(score, used_rows);
    if (!pivot || score[*pivot] == 0.0 ||
        !(std::sqrt(unused2) > detail::kInactiveFrequencyTol * scale))
      return finish(StopReason::zero_residual);
    const std::size_t i = *pivot;

    Eigen::VectorXd u = col / col(static_cast<Eigen::Index>(i));
    u(static_cast<Eigen::Index>(i)) = 1.0;
    Eigen::VectorXd v = x.row(static_cast<Eigen::Index>(i)).transpose();
    for (std::size_t l = 0; l < us.size(); ++l)
      v -= vs[l] * us[l](static_cast<Eigen::Index>(i));

    const double u2 = u.squaredNorm();
    const double v2 = v.squaredNorm();
    const double rho = std::sqrt(u2 * v2);
    double cross = 0.0;
    for (std::size_t l = 0; l < us.size(); ++l)
      cross += us[l].dot(u) * vs[l].dot(v);
    const double mu2_next = std::max(0.0, mu2 + u2 * v2 + 2.0 * cross);
    const double mu = std::sqrt(mu2_next);

    if (rho < opt.eps * mu) {
      out.history.push_back({rho, mu, i, j, false});
      return finish(StopReason::tolerance);
    }
    mu2 = mu2_next;
    us.push_back(std::move(u));
    vs.push_back(v);
    used_rows[i] = true;
    used_cols[j] = true;
    out.rows.push_back(i);
    out.cols.push_back(j);
    out.history.push_back({rho, mu, i, j, true});
    if (us.size() >= budget)
      return finish(StopReason::rank_budget);

    std::vector<double> vscore(n2);
    for (std::size_t c = 0; c < n2; ++c)
      vscore[c] = v(static_cast<Eigen::Index>(c)) * v(static_cast<Eigen::Index>(c));
    const auto next = detail::argmax_unused(vscore, used_cols);
    if (!next)
      return finish(StopReason::exhausted);
    j = *next;
  }
}

// ---------------------------------------------------------------------------
// Tubal rank-1 deflation
// ---------------------------------------------------------------------------

struct Deflation {
  Tensor3 residual;
  /// x(:, j, :) * x(i, j, :)^{-1}, an n1 x 1 x n3 lateral slice.
  Tensor3 u;
  /// x(i, :, :), a 1 x n2 x n3 horizontal slice.
  Tensor3 v;
};

/// residual = x - x(:, j, :) * x(i, j, :)^{-1} * x(i, :, :).
///
/// The residual vanishes on lateral slice j and horizontal slice i, and each
/// Fourier frontal slice loses exactly one rank. Throws NearSingularTube when
/// the intersection tube fails the tol test.
inline Deflation deflate_tubal(const Tensor3 &x, std::size_t i, std::size_t j,
                               double tol = kTubeInverseTol) {
  detail::check_index(i, x.n1(), "deflation row");
  detail::check_index(j, x.n2(), "deflation column");
  const auto xh = fft_mode3(x);
  const auto pivot = xh.tube(i, j);
  if (!tube_spectrum_invertible(pivot, tol))
    throw NearSingularTube("intersection tube (" + std::to_string(i) + ", " +
                           std::to_string(j) + ") is not invertible");
  const std::size_t n3 = x.n3();
  const auto ii = static_cast<Eigen::Index>(i);
  const auto jj = static_cast<Eigen::Index>(j);

  Deflation out;
  out.residual = from_half_spectrum(x.dims(), [&](std::size_t f) {
    const CMatrix a = xh.frontal(f);
    return CMatrix(a - a.col(jj) * a.row(ii) / pivot[f]);
  });
  out.u = from_half_spectrum({x.n1(), 1, n3}, [&](std::size_t f) {
    const CMatrix a = xh.frontal(f);
    return CMatrix(a.col(jj) / pivot[f]);
  });
  out.v = horizontal_tensor(horizontal_slice(x, i));
  return out;
}

// ---------------------------------------------------------------------------
// Adaptive cross tubal approximation
// ---------------------------------------------------------------------------

namespace detail {

/// Parseval weights for a half spectrum: conjugate partners are counted
/// twice, self-conjugate slices once, all scaled by 1/n3.
inline Eigen::RowVectorXd half_spectrum_weights(std::size_t n3) {
  const std::size_t half = half_spectrum(n3);
  Eigen::RowVectorXd w(static_cast<Eigen::Index>(half));
  for (std::size_t f = 0; f < half; ++f)
    w(static_cast<Eigen::Index>(f)) =
        (self_conjugate(f, n3) ? 1.0 : 2.0) / static_cast<double>(n3);
  return w;
}

/// Squared Frobenius norm of each tube (row) given its half spectrum.
inline std::vector<double> tube_energies(const CMatrix &half,
                                         const Eigen::RowVectorXd &w) {
  std::vector<double> e(static_cast<std::size_t>(half.rows()));
  for (Eigen::Index r = 0; r < half.rows(); ++r)
    e[static_cast<std::size_t>(r)] = (half.row(r).cwiseAbs2().array() *
                                      w.array()).sum();
  return e;
}

class FrequencySet {
public:
  explicit FrequencySet(std::size_t n) : bits_(n, false) {}
  void set(std::size_t f) { bits_[f] = true; }
  bool test(std::size_t f) const { return bits_[f]; }
  bool none() const {
    return std::none_of(bits_.begin(), bits_.end(), [](bool b) { return b; });
  }

private:
  std::vector<bool> bits_;
};

/// Frequencies at which the residual column still carries energy on unused
/// rows, measured against the largest frequency of the fetched slice. A
/// Fourier slice whose rank is used up leaves its frequency inactive; the
/// pivot tube is then inverted only on the active ones.
inline FrequencySet active_frequencies(const CMatrix &residual,
                                       const CMatrix &fetched,
                                       const std::vector<bool> &used_rows) {
  const Eigen::Index h = residual.cols();
  double scale = 0.0;
  for (Eigen::Index f = 0; f < h; ++f)
    scale = std::max(scale, fetched.col(f).norm());
  FrequencySet active(static_cast<std::size_t>(h));
  for (Eigen::Index f = 0; f < h; ++f) {
    double e = 0.0;
    for (Eigen::Index r = 0; r < residual.rows(); ++r)
      if (!used_rows[static_cast<std::size_t>(r)])
        e += std::norm(residual(r, f));
    if (std::sqrt(e) > kInactiveFrequencyTol * scale)
      active.set(static_cast<std::size_t>(f));
  }
  return active;
}

/// min |c_f| > tol * max |c_f| over the active frequencies.
inline bool tube_admissible(const Eigen::RowVectorXcd &tube,
                            const FrequencySet &active, double tol) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (Eigen::Index f = 0; f < tube.size(); ++f)
    if (active.test(static_cast<std::size_t>(f))) {
      const double a = std::abs(tube(f));
      lo = std::min(lo, a);
      hi = std::max(hi, a);
    }
  return hi > 0.0 && lo > tol * hi;
}

/// Real n x n3 slice from the half spectrum of its rows.
inline Matrix real_from_half(const CMatrix &half, std::size_t n3) {
  const std::size_t h = half_spectrum(n3);
  CMatrix full(half.rows(), static_cast<Eigen::Index>(n3));
  full.leftCols(static_cast<Eigen::Index>(h)) = half;
  for (std::size_t f = h; f < n3; ++f)
    full.col(static_cast<Eigen::Index>(f)) =
        half.col(static_cast<Eigen::Index>(n3 - f)).conjugate();
  return ifft_rows(full);
}

} // namespace detail

/// Adaptive cross tubal approximation (ACTA).
///
/// Builds x ~ u * v one tubal rank-1 term at a time from individual lateral
/// and horizontal slices requested from the source; the full tensor is never
/// read. Pass k:
///   1. residual lateral slice at column j_k, from the fetched slice minus
///      the current factors;
///   2. pivot row i_k = unused row whose residual tube has the largest norm
///      and an invertible spectrum (falling back down the norm ordering);
///   3. the lateral slice is right-multiplied by the inverse pivot tube;
///   4. residual horizontal slice at row i_k;
///   5. next column = unused column whose tube in that slice has the
///      largest norm;
///   6. rho^2 = ||u_k||^2 ||v_k||^2 and mu^2 = ||U * V||_F^2 updated with the
///      exact signed cross terms.
/// The pass whose rho falls below eps * mu ends the loop and is not added;
/// the returned rank is the tubal rank estimate.
///
/// All arithmetic happens on half spectra of single slices, so each pass
/// costs O((n1 + n2) n3 log n3 + (n1 + n2) r n3).
template <SliceSource S>
CrossFactors acta(const S &source, const CrossOptions &opt = {}) {
  const Dims d = source.dims();
  detail::check_cross_options(opt, d);
  const std::size_t n1 = d.n1, n2 = d.n2, n3 = d.n3;
  const std::size_t half = half_spectrum(n3);
  const std::size_t budget = opt.max_rank.value_or(std::min(n1, n2));
  const Eigen::RowVectorXd w = detail::half_spectrum_weights(n3);
  const auto h = static_cast<Eigen::Index>(half);

  CrossFactors out;
  out.dims = d;
  std::vector<CMatrix> uh; // n1 x half each
  std::vector<CMatrix> vh; // n2 x half each
  std::vector<bool> used_rows(n1, false), used_cols(n2, false);
  Rng rng(opt.seed);
  std::size_t j = rng.index(n2);
  double mu2 = 0.0;

  auto finish = [&](StopReason why) {
    out.stop = why;
    const std::size_t r = uh.size();
    if (r == 0)
      return out;
    std::vector<double> ud(n1 * r * n3), vd(r * n2 * n3);
    for (std::size_t l = 0; l < r; ++l) {
      const Matrix ul = detail::real_from_half(uh[l], n3);
      const Matrix vl = detail::real_from_half(vh[l], n3);
      for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t k = 0; k < n3; ++k)
          ud[(i * r + l) * n3 + k] =
              ul(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
      for (std::size_t c = 0; c < n2; ++c)
        for (std::size_t k = 0; k < n3; ++k)
          vd[(l * n2 + c) * n3 + k] =
              vl(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(k));
    }
    out.u = Tensor3({n1, r, n3}, std::move(ud));
    out.v = Tensor3({r, n2, n3}, std::move(vd));
    return out;
  };

  if (budget == 0)
    return finish(StopReason::rank_budget);

  while (true) {
    // Residual lateral slice E(:, j, :) = X(:, j, :) - U * V(:, j, :).
    const CMatrix fetched = fft_rows(source.lateral_slice(j)).leftCols(h);
    CMatrix col = fetched;
    const auto jj = static_cast<Eigen::Index>(j);
    for (std::size_t l = 0; l < uh.size(); ++l)
      col -= (uh[l].array().rowwise() * vh[l].row(jj).array()).matrix();

    const auto energy = detail::tube_energies(col, w);
    const auto candidates = detail::ranked_unused(energy, used_rows);
    const auto active = detail::active_frequencies(col, fetched, used_rows);
    if (candidates.empty() || energy[candidates.front()] == 0.0 ||
        active.none())
      return finish(StopReason::zero_residual);

    std::optional<std::size_t> pivot;
    for (std::size_t c : candidates) {
      if (energy[c] == 0.0)
        break;
      if (detail::tube_admissible(col.row(static_cast<Eigen::Index>(c)),
                                  active, opt.pivot_tol)) {
        pivot = c;
        break;
      }
    }
    if (!pivot) {
      finish(StopReason::tolerance);
      throw Breakdown("acta: no unused row of lateral slice " +
                          std::to_string(j) +
                          " has an invertible intersection tube",
                      out);
    }
    const std::size_t i = *pivot;
    const auto ii = static_cast<Eigen::Index>(i);

    // u_k = E(:, j, :) * E(i, j, :)^+; the pivot tube becomes the identity on
    // active frequencies and zero elsewhere.
    Eigen::RowVectorXcd inv_pivot = Eigen::RowVectorXcd::Zero(h);
    for (Eigen::Index f = 0; f < h; ++f)
      if (active.test(static_cast<std::size_t>(f)))
        inv_pivot(f) = 1.0 / col(ii, f);
    CMatrix u = (col.array().rowwise() * inv_pivot.array()).matrix();
    for (Eigen::Index f = 0; f < h; ++f)
      u(ii, f) = active.test(static_cast<std::size_t>(f)) ? 1.0 : 0.0;

    // Residual horizontal slice v_k = X(i, :, :) - U(i, :, :) * V.
    CMatrix v = fft_rows(source.horizontal_slice(i)).leftCols(h);
    for (std::size_t l = 0; l < uh.size(); ++l)
      v -= (vh[l].array().rowwise() * uh[l].row(ii).array()).matrix();

    const auto u_energy = detail::tube_energies(u, w);
    const auto v_energy = detail::tube_energies(v, w);
    const double u2 = std::accumulate(u_energy.begin(), u_energy.end(), 0.0);
    const double v2 = std::accumulate(v_energy.begin(), v_energy.end(), 0.0);
    const double rho = std::sqrt(u2 * v2);

    // ||u_k * v_k||^2 and <u_l * v_l, u_k * v_k> from per-frequency outer
    // products.
    double term2 = 0.0;
    {
      const Eigen::RowVectorXd un = u.colwise().squaredNorm();
      const Eigen::RowVectorXd vn = v.colwise().squaredNorm();
      term2 = (un.array() * vn.array() * w.array()).sum();
    }
    double cross = 0.0;
    for (std::size_t l = 0; l < uh.size(); ++l) {
      const Eigen::RowVectorXcd a = (uh[l].conjugate().array() * u.array())
                                        .colwise()
                                        .sum()
                                        .matrix();
      const Eigen::RowVectorXcd b = (vh[l].conjugate().array() * v.array())
                                        .colwise()
                                        .sum()
                                        .matrix();
      cross += ((a.array() * b.array()).real() * w.array()).sum();
    }
    const double mu2_next = std::max(0.0, mu2 + term2 + 2.0 * cross);
    const double mu = std::sqrt(mu2_next);

    if (rho < opt.eps * mu) {
      out.history.push_back({rho, mu, i, j, false});
      return finish(StopReason::tolerance);
    }
    mu2 = mu2_next;
    uh.push_back(std::move(u));
    vh.push_back(v);
    used_rows[i] = true;
    used_cols[j] = true;
    out.rows.push_back(i);
    out.cols.push_back(j);
    out.history.push_back({rho, mu, i, j, true});
    if (uh.size() >= budget)
      return finish(StopReason::rank_budget);

    const auto next = detail::argmax_unused(v_energy, used_cols);
    if (!next)
      return finish(StopReason::exhausted);
    j = *next;
  }
}

/// ACTA over an in-memory tensor.
inline CrossFactors acta(const Tensor3 &x, const CrossOptions &opt = {}) {
  return acta(TensorSlices(x), opt);
}

// ---------------------------------------------------------------------------
// CUR from selected slices
// ---------------------------------------------------------------------------

/// c = selected lateral slices, r = selected horizontal slices,
/// core = c^+ * x * r^+; the approximation is c * core * r.
struct CurFactors {
  Tensor3 c;
  Tensor3 core;
  Tensor3 r;
};

namespace detail {
inline void check_index_list(const std::vector<std::size_t> &idx,
                             std::size_t bound, const char *what) {
  if (idx.empty())
    throw InvalidArgument(std::string(what) + " index list is empty");
  std::set<std::size_t> seen;
  for (std::size_t k : idx) {
    check_index(k, bound, what);
    if (!seen.insert(k).second)
      throw InvalidArgument(std::string(what) + " index " + std::to_string(k) +
                            " repeated");
  }
}

template <class Fn>
void for_cur_slices(const FourierTensor3 &xh,
                    const std::vector<std::size_t> &rows,
                    const std::vector<std::size_t> &cols, std::size_t f,
                    Fn &&fn) {
  const CMatrix a = xh.frontal(f);
  CMatrix c(a.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t q = 0; q < cols.size(); ++q)
    c.col(static_cast<Eigen::Index>(q)) = a.col(static_cast<Eigen::Index>(cols[q]));
  CMatrix r(static_cast<Eigen::Index>(rows.size()), a.cols());
  for (std::size_t q = 0; q < rows.size(); ++q)
    r.row(static_cast<Eigen::Index>(q)) = a.row(static_cast<Eigen::Index>(rows[q]));
  const bool real = self_conjugate(f, xh.n3());
  const CMatrix core = pseudo_inverse(c, real) * a * pseudo_inverse(r, real);
  fn(a, c, core, r);
}
} // namespace detail

inline CurFactors cur_from_indices(const Tensor3 &x,
                                   const std::vector<std::size_t> &rows,
                                   const std::vector<std::size_t> &cols) {
  detail::check_index_list(rows, x.n1(), "CUR row");
  detail::check_index_list(cols, x.n2(), "CUR column");
  const auto xh = fft_mode3(x);
  const std::size_t n3 = x.n3();
  const std::size_t half = half_spectrum(n3);
  std::vector<CMatrix> cs(half), cores(half), rs(half);
  parallel_for(half, [&](std::size_t f) {
    detail::for_cur_slices(xh, rows, cols, f,
                           [&](const CMatrix &, const CMatrix &c,
                               const CMatrix &core, const CMatrix &r) {
                             cs[f] = c;
                             cores[f] = core;
                             rs[f] = r;
                           });
  });
  CurFactors out;
  out.c = from_half_spectrum({x.n1(), cols.size(), n3},
                             [&](std::size_t f) { return cs[f]; });
  out.core = from_half_spectrum({cols.size(), rows.size(), n3},
                                [&](std::size_t f) { return cores[f]; });
  out.r = from_half_spectrum({rows.size(), x.n2(), n3},
                             [&](std::size_t f) { return rs[f]; });
  return out;
}

inline Tensor3 reconstruct(const CurFactors &f) {
  return tprod(tprod(f.c, f.core), f.r);
}

/// c * core * r computed directly, without forming the factor tensors.
inline Tensor3 cur_approximation(const Tensor3 &x,
                                 const std::vector<std::size_t> &rows,
                                 const std::vector<std::size_t> &cols) {
  detail::check_index_list(rows, x.n1(), "CUR row");
  detail::check_index_list(cols, x.n2(), "CUR column");
  const auto xh = fft_mode3(x);
  return from_half_spectrum(x.dims(), [&](std::size_t f) {
    CMatrix approx;
    detail::for_cur_slices(xh, rows, cols, f,
                           [&](const CMatrix &, const CMatrix &c,
                               const CMatrix &core, const CMatrix &r) {
                             approx = c * core * r;
                           });
    return approx;
  });
}

} // namespace tubal
