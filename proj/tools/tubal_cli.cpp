// tubal: command-line driver for the cross approximation, t-SVD baselines,
// benchmarks and image completion.
//
// Exit codes: 0 ok, 2 usage, 3 I/O, 4 file format, 5 numerical failure.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tubal/reference.hpp"
#include "tubal/tubal.hpp"

namespace fs = std::filesystem;
using namespace tubal;

namespace {

enum Exit { kOk = 0, kUsage = 2, kIo = 3, kFormat = 4, kEngine = 5 };

/// Files written by the current run; removed again if the run fails.
class Outputs {
public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) {}

  void prepare() {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_))
      throw IoError("cannot create output directory " + dir_.string());
  }

  void text(const std::string &name, const std::string &body) {
    const auto p = dir_ / name;
    write_file_atomic(p, [&](std::ostream &os) { os << body; });
    written_.push_back(p);
  }
  void tensor(const std::string &name, const Tensor3 &x) {
    const auto p = dir_ / name;
    write_t3d(p, x);
    written_.push_back(p);
  }
  void image(const std::string &name, const Tensor3 &x) {
    const auto p = dir_ / name;
    image_write(x, p);
    written_.push_back(p);
  }

  void rollback() {
    std::error_code ec;
    for (const auto &p : written_)
      fs::remove(p, ec);
    written_.clear();
  }

private:
  fs::path dir_;
  std::vector<fs::path> written_;
};

struct Globals {
  unsigned threads = 0;
  std::string out = ".";
  std::uint64_t seed = 0;
};

struct InputFlags {
  std::string input;
  std::string gen;
  std::size_t n = 0;
  std::size_t rank = 5;
};

void add_input_flags(CLI::App *cmd, InputFlags &f) {
  auto *in = cmd->add_option("--input", f.input, "T3D1 tensor file");
  auto *gen = cmd->add_option("--gen", f.gen,
                              "generator: synthetic, case1, case2, case3");
  in->excludes(gen);
  cmd->add_option("--n", f.n, "generated tensor size (n x n x n)");
}

Tensor3 load_input(const InputFlags &f, std::uint64_t seed,
                   std::size_t synthetic_rank) {
  if (!f.input.empty())
    return read_t3d(f.input);
  if (f.gen.empty())
    throw InvalidArgument("give --input FILE or --gen KIND --n N");
  GeneratorSpec spec;
  spec.kind = parse_generator_kind(f.gen);
  spec.n = f.n;
  spec.rank = synthetic_rank;
  spec.seed = seed;
  return generate(spec);
}

std::string run_csv(const RunRecord &r) {
  std::ostringstream os;
  write_run_csv(os, {r});
  return os.str();
}

std::string indices_csv(const CrossFactors &f) {
  std::ostringstream os;
  os << "k,row,col\n";
  for (std::size_t k = 0; k < f.rank(); ++k)
    os << k << ',' << f.rows[k] << ',' << f.cols[k] << '\n';
  return os.str();
}

std::string history_csv(const CrossFactors &f) {
  std::ostringstream os;
  os << "k,rho,mu,row,col,accepted\n";
  for (std::size_t k = 0; k < f.history.size(); ++k) {
    const auto &h = f.history[k];
    os << k << ',' << format_number("%.6e", h.rho) << ','
       << format_number("%.6e", h.mu) << ',' << h.row << ',' << h.col << ','
       << (h.accepted ? 1 : 0) << '\n';
  }
  return os.str();
}

void print_record(const RunRecord &r) {
  std::cout << kRunCsvHeader << '\n' << csv_row(r) << '\n';
}

// ----- subcommands ---------------------------------------------------------

struct ActaFlags {
  InputFlags in;
  double eps = 1e-8;
  std::size_t max_rank = 0;
};

void cmd_acta(const Globals &g, const ActaFlags &f, Outputs &out) {
  const Tensor3 x = load_input(f.in, g.seed, f.in.rank);
  CrossOptions opt;
  opt.eps = f.eps;
  opt.seed = g.seed;
  if (f.max_rank > 0)
    opt.max_rank = f.max_rank;
  out.prepare();

  CrossFactors cf;
  RunRecord rec;
  rec.method = "acta";
  rec.dims = x.dims();
  rec.seed = g.seed;
  rec.rank_or_eps = format_eps(f.eps);
  if (!f.in.input.empty()) {
    // Drive the cross loop from the file itself, one slice at a time.
    const T3dFileSlices src(f.in.input);
    rec.time_s = time_call([&] { cf = acta(src, opt); });
  } else {
    rec.time_s = time_call([&] { cf = acta(x, opt); });
  }
  rec.rank = cf.rank();
  rec.rel_err = relative_error(x, reconstruct(cf));

  if (cf.rank() > 0) {
    out.tensor("U.t3d", cf.u);
    out.tensor("V.t3d", cf.v);
  }
  out.text("indices.csv", indices_csv(cf));
  out.text("history.csv", history_csv(cf));
  out.text("run.csv", run_csv(rec));
  print_record(rec);
  std::cout << "rank " << cf.rank() << " (stop: " << to_string(cf.stop)
            << ")\n";
}

struct TsvdFlags {
  InputFlags in;
  std::size_t oversample = 10;
  std::size_t power_iters = 1;
};

void cmd_tsvd(const Globals &g, const TsvdFlags &f, bool randomized,
              Outputs &out) {
  const Tensor3 x = load_input(f.in, g.seed, f.in.rank);
  out.prepare();
  RunRecord rec;
  rec.method = randomized ? "rtsvd" : "tsvd";
  rec.dims = x.dims();
  rec.seed = g.seed;
  rec.rank_or_eps = std::to_string(f.in.rank);
  rec.rank = f.in.rank;
  TsvdFactors tf;
  if (randomized) {
    RandomizedOptions ro;
    ro.oversample = f.oversample;
    ro.power_iters = f.power_iters;
    ro.seed = g.seed;
    rec.time_s = time_call([&] { tf = tsvd_randomized(x, f.in.rank, ro); });
  } else {
    rec.time_s = time_call([&] { tf = tsvd_truncated(x, f.in.rank); });
  }
  rec.rel_err = relative_error(x, reconstruct(tf));
  out.tensor("U.t3d", tf.u);
  out.tensor("S.t3d", tf.s);
  out.tensor("V.t3d", tf.v);
  out.text("run.csv", run_csv(rec));
  print_record(rec);
}

struct BenchFlags {
  std::vector<std::string> methods{"tsvd", "rtsvd", "acta"};
  std::vector<std::size_t> sizes{50, 100};
  std::size_t rank = 10;
  double eps = 1e-8;
  std::size_t repeats = 1;
};

void cmd_bench(const Globals &g, const BenchFlags &f, Outputs &out) {
  BenchConfig cfg;
  cfg.methods = f.methods;
  cfg.sizes = f.sizes;
  cfg.rank = f.rank;
  cfg.eps = f.eps;
  cfg.repeats = f.repeats;
  cfg.seed = g.seed;
  const auto res = run_bench(cfg);
  out.prepare();
  std::ostringstream runs, summary, plot;
  write_run_csv(runs, res.runs);
  write_summary_csv(summary, res, g.seed);
  write_gnuplot_blocks(plot, res);
  out.text("bench_runs.csv", runs.str());
  out.text("bench_summary.csv", summary.str());
  out.text("bench.dat", plot.str());
  std::cout << summary.str();
}

struct CompleteFlags {
  std::string image;
  double missing = 0.7;
  std::size_t rank = 70;
  std::size_t iters = 50;
  std::string engine = "acta";
  std::string fill = "zeros";
  std::size_t ramp = 0;
};

void cmd_complete(const Globals &g, const CompleteFlags &f, Outputs &out) {
  const Tensor3 truth = image_read(f.image);
  const Mask mask = Mask::random(truth.dims(), f.missing, g.seed);
  CompletionOptions opt;
  opt.engine = parse_engine(f.engine);
  opt.rank = f.rank;
  opt.max_iters = f.iters;
  opt.seed = g.seed;
  opt.rank_ramp = f.ramp;
  if (f.fill == "mean")
    opt.initial_fill = InitialFill::observed_mean;
  else if (f.fill != "zeros")
    throw InvalidArgument("--fill must be zeros or mean");
  out.prepare();

  CompletionReport rep;
  RunRecord rec;
  rec.method = std::string("complete-") + to_string(opt.engine);
  rec.dims = truth.dims();
  rec.seed = g.seed;
  rec.rank_or_eps = std::to_string(f.rank);
  rec.rank = f.rank;
  rec.time_s =
      time_call([&] { rep = complete(project(truth, mask), mask, opt, truth); });
  rec.rel_err = relative_error(truth, rep.result);
  rec.psnr_db = psnr(rep.result, truth);

  std::ostringstream hist;
  hist << "iteration,psnr_db,observed_residual,relative_change\n";
  for (std::size_t k = 0; k < rep.history.size(); ++k) {
    const auto &s = rep.history[k];
    hist << k + 1 << ',' << format_number("%.4f", s.psnr_db) << ','
         << format_number("%.6e", s.observed_residual) << ','
         << format_number("%.6e", s.relative_change) << '\n';
  }
  out.image(truth.n3() == 3 ? "completed.ppm" : "completed.pgm", rep.result);
  out.text("psnr.csv", hist.str());
  out.text("run.csv", run_csv(rec));
  print_record(rec);
}

struct TprodFlags {
  std::string a;
  std::string b;
  std::size_t n = 6;
  std::string product;
};

void cmd_tprod(const Globals &g, const TprodFlags &f, Outputs &out) {
  Tensor3 a, b;
  if (!f.a.empty() || !f.b.empty()) {
    if (f.a.empty() || f.b.empty())
      throw InvalidArgument("give both --a and --b");
    a = read_t3d(f.a);
    b = read_t3d(f.b);
  } else {
    if (f.n == 0)
      throw InvalidArgument("--n must be positive");
    Rng rng(g.seed);
    a = gaussian_tensor({f.n, f.n, f.n}, rng);
    b = gaussian_tensor({f.n, f.n, f.n}, rng);
  }
  Tensor3 fast;
  const double t_fast = time_call([&] { fast = tprod(a, b); });
  Tensor3 slow;
  const double t_slow =
      time_call([&] { slow = reference::tprod_circulant(a, b); });
  const double scale = frobenius_norm(slow);
  const double diff = frobenius_norm(fast - slow) / (scale > 0.0 ? scale : 1.0);
  if (!f.product.empty()) {
    out.prepare();
    out.tensor(f.product, fast);
  }
  std::cout << "dims " << to_string(fast.dims()) << "\nfourier_s "
            << format_number("%.6f", t_fast) << "\ncirculant_s "
            << format_number("%.6f", t_slow) << "\nrel_diff "
            << format_number("%.3e", diff) << '\n';
  if (!(diff <= 1e-10))
    throw SymmetryViolation("Fourier product disagrees with the definition");
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Tubal tensor toolkit: cross approximation, t-SVD, completion"};
  app.require_subcommand(1);
  app.fallthrough(); // global flags may follow the subcommand
  Globals g;
  app.add_option("--threads", g.threads, "worker threads (0 = hardware)");
  app.add_option("--out", g.out, "output directory");
  app.add_option("--seed", g.seed, "random seed");

  ActaFlags af;
  auto *acta_cmd = app.add_subcommand("acta", "adaptive cross tubal approximation");
  add_input_flags(acta_cmd, af.in);
  acta_cmd->add_option("--rank", af.in.rank, "tubal rank of --gen synthetic");
  acta_cmd->add_option("--eps", af.eps, "relative stopping tolerance");
  acta_cmd->add_option("--max-rank", af.max_rank, "rank budget (0 = min(n1, n2))");

  TsvdFlags tf, rf;
  auto *tsvd_cmd = app.add_subcommand("tsvd", "truncated t-SVD");
  add_input_flags(tsvd_cmd, tf.in);
  tsvd_cmd->add_option("--rank", tf.in.rank, "target tubal rank");
  auto *rtsvd_cmd = app.add_subcommand("rtsvd", "randomized t-SVD");
  add_input_flags(rtsvd_cmd, rf.in);
  rtsvd_cmd->add_option("--rank", rf.in.rank, "target tubal rank");
  rtsvd_cmd->add_option("--oversample", rf.oversample, "extra sketch columns");
  rtsvd_cmd->add_option("--power-iters", rf.power_iters, "power iterations");

  BenchFlags bf;
  auto *bench_cmd = app.add_subcommand("bench", "timing and accuracy sweep");
  bench_cmd->add_option("--methods", bf.methods, "subset of tsvd,rtsvd,acta")
      ->delimiter(',');
  bench_cmd->add_option("--sizes", bf.sizes, "tensor sizes n")->delimiter(',');
  bench_cmd->add_option("--rank", bf.rank, "exact tubal rank / t-SVD rank");
  bench_cmd->add_option("--eps", bf.eps, "ACTA tolerance");
  bench_cmd->add_option("--repeats", bf.repeats, "runs per size");

  CompleteFlags cf;
  auto *complete_cmd = app.add_subcommand("complete", "image completion");
  complete_cmd->add_option("--image", cf.image, "PGM (P5) or PPM (P6) image")
      ->required();
  complete_cmd->add_option("--missing", cf.missing, "fraction of pixels removed");
  complete_cmd->add_option("--rank", cf.rank, "tubal rank");
  complete_cmd->add_option("--iters", cf.iters, "iteration budget");
  complete_cmd->add_option("--engine", cf.engine, "acta, tsvd or rtsvd");
  complete_cmd->add_option("--fill", cf.fill, "initial fill: zeros or mean");
  complete_cmd->add_option("--ramp", cf.ramp,
                           "grow the rank from 1 over this many iterations");

  TprodFlags pf;
  auto *tprod_cmd = app.add_subcommand("tprod", "check the Fourier t-product "
                                                "against the circulant definition");
  tprod_cmd->add_option("--a", pf.a, "left factor (T3D1)");
  tprod_cmd->add_option("--b", pf.b, "right factor (T3D1)");
  tprod_cmd->add_option("--n", pf.n, "random n x n x n factors when no files");
  tprod_cmd->add_option("--product", pf.product, "write the product here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  if (g.threads > 0)
    set_num_threads(g.threads);
  Outputs out(g.out);
  try {
    if (*acta_cmd)
      cmd_acta(g, af, out);
    else if (*tsvd_cmd)
      cmd_tsvd(g, tf, false, out);
    else if (*rtsvd_cmd)
      cmd_tsvd(g, rf, true, out);
    else if (*bench_cmd)
      cmd_bench(g, bf, out);
    else if (*complete_cmd)
      cmd_complete(g, cf, out);
    else if (*tprod_cmd)
      cmd_tprod(g, pf, out);
    return kOk;
  } catch (const IoError &e) {
    out.rollback();
    std::cerr << "tubal: " << e.what() << '\n';
    return kIo;
  } catch (const FormatError &e) {
    out.rollback();
    std::cerr << "tubal: " << e.what() << '\n';
    return kFormat;
  } catch (const InvalidArgument &e) {
    out.rollback();
    std::cerr << "tubal: " << e.what() << '\n';
    return kUsage;
  } catch (const MaskError &e) {
    out.rollback();
    std::cerr << "tubal: " << e.what() << '\n';
    return kUsage;
  } catch (const Error &e) {
    out.rollback();
    std::cerr << "tubal: " << e.what() << '\n';
    return kEngine;
  } catch (const std::exception &e) {
    out.rollback();
    std::cerr << "tubal: " << e.what() << '\n';
    return kEngine;
  }
}
