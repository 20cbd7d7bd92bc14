// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tubal/tubal.hpp"

using namespace tubal;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string fmt(const char *f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double rel_err(const Tensor3 &x, const Tensor3 &approx) {
  return frobenius_norm(x - approx) / frobenius_norm(x);
}

// 1. Fourier-path tprod vs block-circulant definition.
Outcome tprod_oracle() {
  Rng rng(1001);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n1 = 1 + rng.index(8), n2 = 1 + rng.index(8),
                      n4 = 1 + rng.index(8), n3 = 1 + rng.index(8);
    const auto a = oracle::random_tensor({n1, n2, n3}, rng);
    const auto b = oracle::random_tensor({n2, n4, n3}, rng);
    worst = std::max(worst, oracle::rel_diff(tprod(a, b),
                                             oracle::tprod_block_circulant(a, b)));
  }
  return {worst <= 1e-10, "max rel diff " + fmt("%.2e", worst)};
}

// 2. Tubal deflation on random 8x8x5 tensors.
Outcome deflation() {
  Rng rng(1002);
  double worst_slice = 0.0;
  int bad_rank = 0, done = 0;
  while (done < 100) {
    const auto x = oracle::random_tensor({8, 8, 5}, rng);
    const std::size_t i = rng.index(8), j = rng.index(8);
    Deflation d;
    try {
      d = deflate_tubal(x, i, j);
    } catch (const NearSingularTube &) {
      continue; // not an admissible pivot, draw again
    }
    ++done;
    const double scale = frobenius_norm(x);
    worst_slice = std::max({worst_slice,
                            lateral_slice(d.residual, j).norm() / scale,
                            horizontal_slice(d.residual, i).norm() / scale});
    const auto before = oracle::slice_ranks(x, 1e-10);
    const auto after = oracle::slice_ranks(d.residual, 1e-10);
    for (std::size_t f = 0; f < 5; ++f)
      if (after[f] + 1 != before[f])
        ++bad_rank;
  }
  return {worst_slice <= 1e-10 && bad_rank == 0,
          "max slice residual " + fmt("%.2e", worst_slice) +
              " x ||X||, rank-drop violations " + std::to_string(bad_rank)};
}

// 3. Exact-rank recovery, n = 50, R = 5, 20 seeds.
Outcome exact_rank() {
  int hits = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto x = synthetic_exact_rank(50, 5, seed);
    CrossOptions opt;
    opt.seed = seed;
    const auto f = acta(x, opt);
    const double e = rel_err(x, reconstruct(f));
    worst = std::max(worst, e);
    if (f.rank() == 5 && e <= 1e-8)
      ++hits;
  }
  return {hits == 20, std::to_string(hits) + "/20 runs with r = 5, max error " +
                          fmt("%.2e", worst)};
}

struct CaseRun {
  std::size_t rank;
  double acta_err;
  double tsvd_err;
};

std::vector<CaseRun> function_runs() {
  std::vector<CaseRun> runs;
  for (int c = 1; c <= 3; ++c) {
    const auto x = FunctionTensor(c, 100).materialize();
    CrossOptions opt;
    opt.eps = 1e-8;
    const auto f = acta(x, opt);
    const double ea = rel_err(x, reconstruct(f));
    const double et =
        f.rank() ? rel_err(x, reconstruct(tsvd_truncated(x, f.rank()))) : 1.0;
    runs.push_back({f.rank(), ea, et});
  }
  return runs;
}

// 4. Function-tensor ranks at n = 100.
Outcome function_ranks(const std::vector<CaseRun> &runs) {
  const std::size_t expected[3] = {24, 5, 42};
  bool ok = true;
  std::string d = "ranks";
  for (int c = 0; c < 3; ++c) {
    const auto r = runs[static_cast<std::size_t>(c)].rank;
    const auto diff = r > expected[c] ? r - expected[c] : expected[c] - r;
    ok = ok && diff <= 1;
    d += " " + std::to_string(r) + (c < 2 ? " /" : "");
  }
  return {ok, d + " (expected 24 / 5 / 42 within 1)"};
}

// 5. Accuracy parity at n = 100.
Outcome accuracy_parity(const std::vector<CaseRun> &runs) {
  const bool c2 = runs[1].acta_err <= 1e-13;
  const bool c1 = runs[0].acta_err <= 100.0 * runs[0].tsvd_err;
  const bool c3 = runs[2].acta_err <= 100.0 * runs[2].tsvd_err;
  return {c1 && c2 && c3,
          "case II acta " + fmt("%.2e", runs[1].acta_err) +
              " (<= 1e-13); case I acta/tsvd " + fmt("%.2e", runs[0].acta_err) +
              "/" + fmt("%.2e", runs[0].tsvd_err) + "; case III " +
              fmt("%.2e", runs[2].acta_err) + "/" +
              fmt("%.2e", runs[2].tsvd_err)};
}

// 6. Speed ordering on exact-rank benches.
Outcome speed_ordering() {
  BenchConfig cfg;
  cfg.sizes = {100, 150, 200};
  cfg.rank = 10;
  cfg.repeats = 2;
  cfg.seed = 6;
  const auto res = run_bench(cfg);
  bool ok = true;
  std::string d;
  double gap200 = 0.0;
  for (std::size_t n : cfg.sizes) {
    double t[3] = {0, 0, 0}; // acta, rtsvd, tsvd
    for (const auto &s : res.summary) {
      if (s.n != n)
        continue;
      if (s.method == "acta")
        t[0] = s.mean_time_s;
      else if (s.method == "rtsvd")
        t[1] = s.mean_time_s;
      else
        t[2] = s.mean_time_s;
    }
    ok = ok && t[0] < t[1] && t[1] < t[2];
    if (n == 200)
      gap200 = t[2] / t[0];
    d += "n=" + std::to_string(n) + " " + fmt("%.3f", t[0]) + "/" +
         fmt("%.3f", t[1]) + "/" + fmt("%.3f", t[2]) + "s; ";
  }
  ok = ok && gap200 >= 5.0;
  return {ok, d + "tsvd/acta at 200: " + fmt("%.1f", gap200) + "x"};
}

// 7. Completion parity on a 128x128x3 image, 70% missing, rank 70.
Outcome completion_parity() {
  const auto truth = oracle::desk_image(128, 128);
  const auto mask = Mask::random(truth.dims(), 0.7, 42);
  const auto observed = project(truth, mask);
  CompletionOptions opt;
  opt.rank = 70;
  opt.max_iters = 50;
  opt.seed = 42;
  opt.initial_fill = InitialFill::observed_mean;
  opt.rank_ramp = 25;

  double psnr_db[2];
  bool consistent = true;
  const CompletionEngine engines[2] = {CompletionEngine::tsvd,
                                       CompletionEngine::acta_cur};
  for (int e = 0; e < 2; ++e) {
    opt.engine = engines[e];
    const auto rep = complete(observed, mask, opt, truth);
    for (const auto &s : rep.history)
      consistent = consistent && s.observed_mismatch == 0.0;
    for (std::size_t p = 0; p < truth.size(); ++p)
      consistent = consistent && (!mask[p] || rep.result.data()[p] ==
                                                  truth.data()[p]);
    psnr_db[e] = psnr(rep.result, truth);
  }
  const bool a = consistent;
  const bool b = std::min(psnr_db[0], psnr_db[1]) >= 20.0;
  const bool c = std::abs(psnr_db[1] - psnr_db[0]) <= 1.0;
  return {a && b && c,
          std::string("(a) consistency ") + (a ? "ok" : "violated") +
              ", (b) psnr tsvd " + fmt("%.2f", psnr_db[0]) + " dB, acta " +
              fmt("%.2f", psnr_db[1]) + " dB, (c) gap " +
              fmt("%.2f", psnr_db[1] - psnr_db[0]) + " dB (needs |gap| <= 1)"};
}

// 8. Truncated t-SVD never loses to ACTA at equal rank.
Outcome eckart_young() {
  Rng rng(1008);
  int violations = 0;
  double worst = -1.0;
  for (int t = 0; t < 50; ++t) {
    const auto x = oracle::random_tensor({20, 20, 7}, rng);
    for (std::size_t r = 1; r <= 10; ++r) {
      CrossOptions opt;
      opt.eps = 0.0;
      opt.max_rank = r;
      opt.seed = static_cast<std::uint64_t>(t);
      const auto f = acta(x, opt);
      const double ea = rel_err(x, reconstruct(f));
      const double et = rel_err(x, reconstruct(tsvd_truncated(x, f.rank())));
      worst = std::max(worst, et - ea);
      if (!(et <= ea + 1e-10))
        ++violations;
    }
  }
  return {violations == 0, std::to_string(violations) +
                               " violations in 500 cases, max (tsvd - acta) " +
                               fmt("%.2e", worst)};
}

// 9. Algebra invariants.
Outcome algebra_suite() {
  Rng rng(1009);
  std::vector<std::string> failed;
  auto check = [&](bool ok, const char *what) {
    if (!ok)
      failed.emplace_back(what);
  };
  for (int t = 0; t < 20; ++t) {
    const std::size_t n1 = 2 + rng.index(6), n2 = 2 + rng.index(6),
                      n4 = 2 + rng.index(6), n3 = 1 + rng.index(9);
    const auto x = oracle::random_tensor({n1, n2, n3}, rng);
    const auto y = oracle::random_tensor({n2, n4, n3}, rng);
    const double sx = frobenius_norm(x);
    check(max_abs_diff(tprod(identity_tensor(n1, n3), x), x) <= 1e-12 * sx,
          "left identity");
    check(max_abs_diff(tprod(x, identity_tensor(n2, n3)), x) <= 1e-12 * sx,
          "right identity");
    check(oracle::rel_diff(ttranspose(tprod(x, y)),
                           tprod(ttranspose(y), ttranspose(x))) <= 1e-10,
          "transpose anti-homomorphism");
    check(ttranspose(ttranspose(x)) == x, "transpose involution");

    std::vector<double> tv(n3);
    for (auto &v : tv)
      v = 0.2 * rng.normal();
    tv[0] = 2.0;
    const Tube tube(tv);
    const auto prod = tprod(tube_tensor(tube), tube_tensor(tube_inverse(tube)));
    check(max_abs_diff(prod, tube_tensor(Tube::identity(n3))) <= 1e-10,
          "tube inverse round trip");

    const auto lowrank = tprod(oracle::random_tensor({n1, 1, n3}, rng),
                               oracle::random_tensor({1, n2, n3}, rng));
    const auto p = tpinv(lowrank);
    check(oracle::rel_diff(tprod(tprod(lowrank, p), lowrank), lowrank) <= 1e-8,
          "Penrose 1");
    check(oracle::rel_diff(tprod(tprod(p, lowrank), p), p) <= 1e-8,
          "Penrose 2");
    const auto lp = tprod(lowrank, p), pl = tprod(p, lowrank);
    check(oracle::rel_diff(ttranspose(lp), lp) <= 1e-8, "Penrose 3");
    check(oracle::rel_diff(ttranspose(pl), pl) <= 1e-8, "Penrose 4");

    const double lhs = std::pow(frobenius_norm(fft_mode3(x)), 2);
    const double rhs = static_cast<double>(n3) * sx * sx;
    check(std::abs(lhs - rhs) <= 1e-12 * rhs, "Parseval");
    check(oracle::rel_diff(ifft_mode3(fft_mode3(x)), x) <= 1e-12,
          "FFT round trip");
  }
  std::string d = failed.empty() ? "all invariants hold" : "failed:";
  std::sort(failed.begin(), failed.end());
  failed.erase(std::unique(failed.begin(), failed.end()), failed.end());
  for (const auto &f : failed)
    d += " " + f;
  return {failed.empty(), d};
}

} // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char *name, double limit_s,
                    const std::function<Outcome()> &run) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o = run();
    const double t = seconds_since(t0);
    if (limit_s > 0.0 && t >= limit_s) {
      o.pass = false;
      o.detail += "; runtime over " + fmt("%.0f", limit_s) + " s";
    }
    std::printf("[%s] criterion %d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL",
                id, name, o.detail.c_str(), t);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  };

  report(1, "t-product oracle equivalence", 10.0, tprod_oracle);
  report(2, "tubal deflation", 30.0, deflation);
  report(3, "exact-rank recovery", 60.0, exact_rank);

  std::vector<CaseRun> runs;
  const auto t0 = std::chrono::steady_clock::now();
  runs = function_runs();
  const double shared = seconds_since(t0);
  report(4, "function-tensor ranks", 300.0, [&] {
    auto o = function_ranks(runs);
    o.detail += "; shared runs took " + fmt("%.1f", shared) + " s";
    if (shared >= 300.0)
      o.pass = false;
    return o;
  });
  report(5, "accuracy parity", 0.0, [&] { return accuracy_parity(runs); });
  report(6, "speed ordering", 0.0, speed_ordering);
  report(7, "completion parity", 300.0, completion_parity);
  report(8, "Eckart-Young dominance", 0.0, eckart_young);
  report(9, "algebra invariant suite", 60.0, algebra_suite);

  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
