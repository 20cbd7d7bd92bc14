#include <gtest/gtest.h>

#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "tubal/bench.hpp"

using namespace tubal;

namespace {

std::vector<std::string> lines(const std::string &s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);)
    out.push_back(l);
  return out;
}

std::vector<std::string> fields(const std::string &row) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : row) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

BenchConfig small_config() {
  BenchConfig cfg;
  cfg.sizes = {12, 16};
  cfg.rank = 2;
  cfg.repeats = 2;
  cfg.seed = 3;
  cfg.randomized.oversample = 4;
  return cfg;
}

} // namespace

TEST(RunCsv, SchemaAndFormatting) {
  RunRecord r;
  r.method = "acta";
  r.dims = {50, 50, 50};
  r.rank_or_eps = format_eps(1e-8);
  r.seed = 7;
  r.time_s = 0.25;
  r.rel_err = 3e-9;
  std::ostringstream os;
  write_run_csv(os, {r});
  const auto ls = lines(os.str());
  ASSERT_EQ(ls.size(), 2u);
  EXPECT_EQ(ls[0], "method,n,rank_or_eps,seed,time_s,rel_err,psnr_db");
  EXPECT_EQ(ls[1], "acta,50,1e-08,7,0.250000,3.000000e-09,");
  r.psnr_db = 27.5;
  r.dims = {128, 128, 3};
  EXPECT_EQ(csv_row(r), "acta,128x128x3,1e-08,7,0.250000,3.000000e-09,27.5000");
  r.psnr_db = std::numeric_limits<double>::infinity();
  EXPECT_EQ(fields(csv_row(r)).back(), "inf");
}

TEST(RunMethod, AllMethodsOnExactRank) {
  const auto x = synthetic_exact_rank(20, 3, 1);
  RandomizedOptions ro;
  ro.oversample = 5;
  for (std::string m : {"tsvd", "rtsvd", "acta"}) {
    const auto rec = run_method(m, x, 3, 1e-8, 2, ro);
    EXPECT_EQ(rec.method, m);
    EXPECT_GE(rec.time_s, 0.0);
    EXPECT_LE(rec.rel_err, 1e-8) << m;
    EXPECT_EQ(rec.rank, 3u) << m;
  }
  EXPECT_THROW(run_method("svd", x, 3, 1e-8, 2), InvalidArgument);
}

TEST(Bench, RunsAndSummarizes) {
  const auto res = run_bench(small_config());
  EXPECT_EQ(res.runs.size(), 2u * 2u * 3u);
  ASSERT_EQ(res.summary.size(), 2u * 3u);
  for (const auto &s : res.summary) {
    EXPECT_EQ(s.repeats, 2u);
    EXPECT_LE(s.mean_rel_err, 1e-8) << s.method << " n=" << s.n;
    EXPECT_GE(s.mean_time_s, 0.0);
  }
}

TEST(Bench, ErrorColumnsDeterministic) {
  const auto a = run_bench(small_config()), b = run_bench(small_config());
  ASSERT_EQ(a.runs.size(), b.runs.size());
  for (std::size_t q = 0; q < a.runs.size(); ++q) {
    auto fa = fields(csv_row(a.runs[q])), fb = fields(csv_row(b.runs[q]));
    fa.erase(fa.begin() + 4); // time_s
    fb.erase(fb.begin() + 4);
    EXPECT_EQ(fa, fb);
  }
}

TEST(Bench, RejectsBadConfig) {
  auto cfg = small_config();
  cfg.methods.clear();
  EXPECT_THROW(run_bench(cfg), InvalidArgument);
  cfg = small_config();
  cfg.methods = {"qr"};
  EXPECT_THROW(run_bench(cfg), InvalidArgument);
  cfg = small_config();
  cfg.sizes.clear();
  EXPECT_THROW(run_bench(cfg), InvalidArgument);
  cfg = small_config();
  cfg.repeats = 0;
  EXPECT_THROW(run_bench(cfg), InvalidArgument);
}

TEST(Bench, GnuplotBlocks) {
  auto cfg = small_config();
  cfg.methods = {"tsvd", "acta"};
  std::ostringstream os;
  write_gnuplot_blocks(os, run_bench(cfg));
  const std::string s = os.str();
  const auto split = s.find("\n\n\n");
  ASSERT_NE(split, std::string::npos);
  EXPECT_EQ(s.find("# tsvd"), 0u);
  EXPECT_NE(s.find("# acta", split), std::string::npos);
  std::size_t data = 0;
  for (const auto &l : lines(s))
    if (!l.empty() && l[0] != '#')
      ++data;
  EXPECT_EQ(data, 4u);
}

TEST(Bench, SummaryCsv) {
  auto cfg = small_config();
  cfg.methods = {"acta"};
  std::ostringstream os;
  const auto res = run_bench(cfg);
  write_summary_csv(os, res, cfg.seed);
  const auto ls = lines(os.str());
  ASSERT_EQ(ls.size(), 3u);
  EXPECT_EQ(fields(ls[1])[0], "acta");
  EXPECT_EQ(fields(ls[1])[1], "12");
  EXPECT_EQ(fields(ls[2])[1], "16");
}
