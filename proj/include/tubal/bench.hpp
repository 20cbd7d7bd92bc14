#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "tubal/completion.hpp"
#include "tubal/cross.hpp"
#include "tubal/error.hpp"
#include "tubal/factorizations.hpp"
#include "tubal/generators.hpp"
#include "tubal/tensor3.hpp"

namespace tubal {

/// One timed factorization.
struct RunRecord {
  std::string method;
  Dims dims;
  std::string rank_or_eps;
  std::uint64_t seed = 0;
  double time_s = 0.0;
  double rel_err = 0.0;
  std::optional<double> psnr_db;
  /// Tubal rank of the produced approximation.
  std::size_t rank = 0;
};

inline constexpr const char *kRunCsvHeader =
    "method,n,rank_or_eps,seed,time_s,rel_err,psnr_db";

inline std::string format_number(const char *fmt, double v) {
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  if (std::isnan(v))
    return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

inline std::string dims_label(const Dims &d) {
  if (d.n1 == d.n2 && d.n2 == d.n3)
    return std::to_string(d.n1);
  return to_string(d);
}

inline std::string csv_row(const RunRecord &r) {
  return r.method + "," + dims_label(r.dims) + "," + r.rank_or_eps + "," +
         std::to_string(r.seed) + "," + format_number("%.6f", r.time_s) + "," +
         format_number("%.6e", r.rel_err) + "," +
         (r.psnr_db ? format_number("%.4f", *r.psnr_db) : std::string());
}

inline void write_run_csv(std::ostream &os, const std::vector<RunRecord> &rows) {
  os << kRunCsvHeader << '\n';
  for (const auto &r : rows)
    os << csv_row(r) << '\n';
}

/// Wall-clock seconds spent in fn().
template <class Fn> double time_call(Fn &&fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

struct BenchConfig {
  std::vector<std::string> methods{"tsvd", "rtsvd", "acta"};
  std::vector<std::size_t> sizes{50, 100};
  /// Exact tubal rank of the generated tensors; also the target rank of the
  /// t-SVD baselines.
  std::size_t rank = 10;
  double eps = 1e-8;
  std::size_t repeats = 1;
  std::uint64_t seed = 0;
  RandomizedOptions randomized{};
};

inline std::string format_eps(double eps) { return format_number("%.0e", eps); }

/// Runs one method on x and returns its timing and accuracy.
inline RunRecord run_method(const std::string &method, const Tensor3 &x,
                            std::size_t rank, double eps, std::uint64_t seed,
                            RandomizedOptions ropt = {}) {
  RunRecord rec;
  rec.method = method;
  rec.dims = x.dims();
  rec.seed = seed;
  Tensor3 approx;
  if (method == "tsvd") {
    TsvdFactors f;
    rec.time_s = time_call([&] { f = tsvd_truncated(x, rank); });
    rec.rank_or_eps = std::to_string(rank);
    rec.rank = rank;
    approx = reconstruct(f);
  } else if (method == "rtsvd") {
    ropt.seed = seed;
    TsvdFactors f;
    rec.time_s = time_call([&] { f = tsvd_randomized(x, rank, ropt); });
    rec.rank_or_eps = std::to_string(rank);
    rec.rank = rank;
    approx = reconstruct(f);
  } else if (method == "acta") {
    CrossOptions co;
    co.eps = eps;
    co.seed = seed;
    CrossFactors f;
    rec.time_s = time_call([&] { f = acta(x, co); });
    rec.rank_or_eps = format_eps(eps);
    rec.rank = f.rank();
    approx = reconstruct(f);
  } else {
    throw InvalidArgument("unknown method '" + method + "'");
  }
  rec.rel_err = relative_error(x, approx);
  return rec;
}

/// Mean time and error of one (method, size) cell over all repeats.
struct BenchSummary {
  std::string method;
  std::size_t n = 0;
  std::string rank_or_eps;
  double mean_time_s = 0.0;
  double mean_rel_err = 0.0;
  double mean_rank = 0.0;
  std::size_t repeats = 0;
};

struct BenchResult {
  std::vector<RunRecord> runs;
  std::vector<BenchSummary> summary;
};

/// Times every method on seeded exact-rank n x n x n tensors, one fresh
/// tensor per (size, repeat), and averages per (method, size).
inline BenchResult run_bench(const BenchConfig &cfg) {
  if (cfg.methods.empty())
    throw InvalidArgument("bench: no methods given");
  if (cfg.sizes.empty())
    throw InvalidArgument("bench: no sizes given");
  if (cfg.repeats == 0)
    throw InvalidArgument("bench: repeats must be positive");
  for (const auto &m : cfg.methods)
    if (m != "tsvd" && m != "rtsvd" && m != "acta")
      throw InvalidArgument("bench: unknown method '" + m + "'");

  BenchResult out;
  for (std::size_t n : cfg.sizes) {
    std::map<std::string, BenchSummary> cells;
    for (std::size_t r = 0; r < cfg.repeats; ++r) {
      const std::uint64_t seed = derive_seed(cfg.seed, n * 1000003ULL + r);
      const Tensor3 x = synthetic_exact_rank(n, cfg.rank, seed);
      for (const auto &m : cfg.methods) {
        auto rec = run_method(m, x, cfg.rank, cfg.eps, seed, cfg.randomized);
        auto &cell = cells[m];
        cell.method = m;
        cell.n = n;
        cell.rank_or_eps = rec.rank_or_eps;
        cell.mean_time_s += rec.time_s;
        cell.mean_rel_err += rec.rel_err;
        cell.mean_rank += static_cast<double>(rec.rank);
        cell.repeats += 1;
        out.runs.push_back(std::move(rec));
      }
    }
    for (const auto &m : cfg.methods) {
      auto cell = cells[m];
      const double k = static_cast<double>(cell.repeats);
      cell.mean_time_s /= k;
      cell.mean_rel_err /= k;
      cell.mean_rank /= k;
      out.summary.push_back(cell);
    }
  }
  return out;
}

/// Summary as CSV in the run-record schema (time and error are means).
inline void write_summary_csv(std::ostream &os, const BenchResult &res,
                              std::uint64_t seed) {
  os << kRunCsvHeader << '\n';
  for (const auto &s : res.summary) {
    RunRecord r;
    r.method = s.method;
    r.dims = {s.n, s.n, s.n};
    r.rank_or_eps = s.rank_or_eps;
    r.seed = seed;
    r.time_s = s.mean_time_s;
    r.rel_err = s.mean_rel_err;
    os << csv_row(r) << '\n';
  }
}

/// One gnuplot data block per method (columns: n, mean time, mean error,
/// mean rank), separated by two blank lines so `index` can select them.
inline void write_gnuplot_blocks(std::ostream &os, const BenchResult &res) {
  std::vector<std::string> order;
  for (const auto &s : res.summary)
    if (std::find(order.begin(), order.end(), s.method) == order.end())
      order.push_back(s.method);
  bool first = true;
  for (const auto &m : order) {
    if (!first)
      os << "\n\n";
    first = false;
    os << "# " << m << "\n# n time_s rel_err rank\n";
    for (const auto &s : res.summary)
      if (s.method == m)
        os << s.n << ' ' << format_number("%.6f", s.mean_time_s) << ' '
           << format_number("%.6e", s.mean_rel_err) << ' '
           << format_number("%.2f", s.mean_rank) << '\n';
  }
}

} // namespace tubal
