// volrank: command-line front end for decomposition, reconstruction and
// benchmark sweeps over volume files.
//
// Exit codes: 0 ok, 2 usage/argument, 3 parse, 4 numeric, 5 I/O.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <volrank/baselines.hpp>
#include <volrank/bench.hpp>
#include <volrank/error.hpp>
#include <volrank/metrics.hpp>
#include <volrank/parallel.hpp>
#include <volrank/s3dsvd.hpp>
#include <volrank/volume_io.hpp>

namespace {

using namespace volrank;

enum ExitCode : int { kOk = 0, kUsage = 2, kParse = 3, kNumeric = 4, kIo = 5 };

int exit_code_for(const Error& e) {
  const std::string_view kind = e.kind();
  if (kind == "parse") return kParse;
  if (kind == "numeric" || kind == "degenerate") return kNumeric;
  if (kind == "io") return kIo;
  return kUsage;
}

void report_error(int code, std::string_view kind, std::string_view message) {
  std::string escaped;
  for (char c : message) {
    if (c == '"' || c == '\\') escaped += '\\';
    escaped += (c == '\n' ? ' ' : c);
  }
  std::cerr << "error kind=" << kind << " exit=" << code << " message=\"" << escaped << "\"\n";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Dims to_dims(const std::vector<std::size_t>& v) {
  if (v.size() != 3) throw ArgumentError("--dims needs exactly three extents");
  return Dims{v[0], v[1], v[2]};
}

Dtype parse_dtype(const std::string& s) {
  if (s == "f64" || s == "float64") return Dtype::float64;
  if (s == "f32" || s == "float32") return Dtype::float32;
  throw ArgumentError("unknown dtype '" + s + "' (expected f32|f64)");
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path + " for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Plain-text matrix of one slice through x, rows along the lower free mode.
std::string slice_text(const Tensor3& x, int mode, std::size_t index) {
  const Dims& d = x.dims();
  std::ostringstream out;
  const std::size_t rows = mode == 1 ? d.n2 : d.n1;
  const std::size_t cols = mode == 3 ? d.n2 : d.n3;
  for (std::size_t a = 0; a < rows; ++a) {
    for (std::size_t b = 0; b < cols; ++b) {
      double v = 0.0;
      if (mode == 1) v = x(index, a, b);
      if (mode == 2) v = x(a, index, b);
      if (mode == 3) v = x(a, b, index);
      out << (b ? " " : "") << format_double(v);
    }
    out << '\n';
  }
  return out.str();
}

struct GenArgs {
  std::string kind = "blobs";
  std::vector<std::size_t> dims{64, 64, 64};
  SyntheticParams params;
  std::uint64_t seed = 0;
  std::string dtype = "f64";
  std::string output;
};

int run_gen(const GenArgs& a) {
  const Tensor3 x =
      gen_synthetic(parse_synthetic_kind(a.kind), to_dims(a.dims), a.params, a.seed);
  write_volume(a.output, x, parse_dtype(a.dtype));
  return kOk;
}

struct DecomposeArgs {
  std::string input;
  std::string method = "s3dsvd";
  std::size_t rank = 0;
  std::uint64_t seed = 0;
  std::size_t max_iters = 0;
  double tol = 1e-6;
  std::string output;
};

int run_decompose(const DecomposeArgs& a) {
  const Method method = parse_method(a.method);
  const Tensor3 x = read_volume(a.input);
  if (a.rank == 0) throw ArgumentError("--rank must be positive");
  if (method != Method::cpd && a.rank > x.dims().min()) {
    throw ArgumentError("--rank " + std::to_string(a.rank) + " exceeds the limit min(dims)=" +
                        std::to_string(x.dims().min()));
  }
  const auto t0 = std::chrono::steady_clock::now();
  AnyModel model;
  std::ostringstream status;
  switch (method) {
    case Method::s3dsvd:
      model = decompose(x, a.rank);
      break;
    case Method::tucker: {
      TuckerOptions opts;
      if (a.max_iters) opts.max_iters = a.max_iters;
      opts.tol = a.tol;
      TuckerModel t = tucker_decompose(x, a.rank, opts);
      status << " sweeps=" << t.fit_history.size() - 1 << " converged=" << t.converged;
      model = std::move(t);
      break;
    }
    case Method::cpd: {
      CpOptions opts;
      if (a.max_iters) opts.max_iters = a.max_iters;
      opts.tol = a.tol;
      CpModel c = cpd_decompose(x, a.rank, a.seed, opts);
      status << " seed=" << c.seed << " iterations=" << c.iterations_run
             << " converged=" << c.converged << " regularized=" << c.regularized;
      model = std::move(c);
      break;
    }
  }
  const double elapsed = seconds_since(t0);
  write_model(a.output, model);
  std::cerr << "method=" << to_string(method) << " rank=" << a.rank
            << " elapsed_s=" << format_double(elapsed) << status.str() << '\n';
  return kOk;
}

struct ReconstructArgs {
  std::string input;
  std::size_t k = 0;
  bool k_given = false;
  std::string output;
  std::string dtype = "f64";
  std::vector<std::size_t> slices;
};

int run_reconstruct(const ReconstructArgs& a) {
  if (a.k_given && a.k == 0) throw ArgumentError("--k must be at least 1");
  if (!a.slices.empty() && a.slices.size() != 3) {
    throw ArgumentError("--slices takes three indices i,j,k");
  }
  const AnyModel model = read_model(a.input);
  Tensor3 x;
  if (const auto* s = std::get_if<S3dModel>(&model)) {
    x = reconstruct(*s, a.k_given ? a.k : s->r);
  } else if (const auto* t = std::get_if<TuckerModel>(&model)) {
    const std::size_t r = t->rank();
    const std::size_t k = a.k_given ? a.k : r;
    if (k > r) {
      throw ArgumentError("--k " + std::to_string(k) + " exceeds stored rank " +
                          std::to_string(r));
    }
    TuckerModel view;
    for (int m = 0; m < 3; ++m) view.factors[m] = t->factors[m].leading_cols(k);
    view.core = t->core.leading_block(Dims{k, k, k});
    x = tucker_reconstruct(view);
  } else {
    const auto& c = std::get<CpModel>(model);
    if (a.k_given && a.k != c.rank) {
      std::cerr << "warning: --k ignored for cpd models; using fitted rank " << c.rank << '\n';
    }
    x = cpd_reconstruct(c);
  }
  write_volume(a.output, x, parse_dtype(a.dtype));
  if (!a.slices.empty()) {
    for (int mode = 1; mode <= 3; ++mode) {
      const std::size_t idx = a.slices[mode - 1];
      if (idx >= x.dims()[mode]) {
        throw ArgumentError("slice index " + std::to_string(idx) + " out of range for mode " +
                            std::to_string(mode));
      }
      write_text(a.output + ".slice" + std::to_string(mode) + "_" + std::to_string(idx) + ".txt",
                 slice_text(x, mode, idx));
    }
  }
  return kOk;
}

struct MetricsArgs {
  std::string input;
  std::string recon;
  std::string model;
  std::size_t k = 0;
  double per_threshold = 0.0;
};

int run_metrics(const MetricsArgs& a) {
  const Tensor3 x = read_volume(a.input);
  const Tensor3 xhat = read_volume(a.recon);
  const MetricsReport r = evaluate(Method::s3dsvd, a.k, x, xhat);
  std::string per_cell;
  std::optional<std::size_t> selected;
  if (!a.model.empty()) {
    const AnyModel any = read_model(a.model);
    const auto* s = std::get_if<S3dModel>(&any);
    if (!s) throw ArgumentError("PER needs an s3dsvd model");
    if (a.k) per_cell = format_double(per(*s, a.k));
    if (a.per_threshold > 0.0) selected = select_rank_by_per(*s, a.per_threshold);
  }
  std::cout << "psnr_db,mse,rel_err,per\n"
            << format_double(r.psnr_db) << ',' << format_double(r.mse) << ','
            << format_double(r.rel_err) << ',' << per_cell << '\n';
  if (selected) {
    std::cout << "# per_threshold=" << format_double(a.per_threshold) << " k=" << *selected
              << '\n';
  }
  return kOk;
}

struct SweepArgs {
  std::string input;
  std::vector<std::string> methods{"s3dsvd", "tucker", "cpd"};
  std::vector<std::size_t> ks;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::string csv;
  bool no_timing = false;
  double per_threshold = 0.99;
};

int run_sweep_cmd(const SweepArgs& a) {
  SweepRequest req;
  req.methods.clear();
  for (const auto& m : a.methods) req.methods.push_back(parse_method(m));
  req.ks = a.ks;
  req.cpd_seeds = a.seeds;
  req.per_threshold = a.per_threshold;
  req.threads = thread_budget();
  if (req.ks.empty()) throw ArgumentError("--ks must list at least one k");
  const Tensor3 x = read_volume(a.input);
  const SweepResult result = run_sweep(x, req);
  write_text(a.csv, format_sweep_csv(result, !a.no_timing));
  if (result.per_threshold_rank) {
    std::cout << "per_threshold=" << format_double(result.per_threshold)
              << " k=" << *result.per_threshold_rank << '\n';
  }
  return kOk;
}

struct PlotArgs {
  std::string csv;
  std::string curve = "per";
  std::string method = "s3dsvd";
  double threshold = 0.99;
  std::string output;
};

int run_plotdata(const PlotArgs& a) {
  const Curve curve = parse_curve(a.curve);
  const CsvTable table = parse_csv(read_text(a.csv));
  write_text(a.output, plot_data(table, curve, a.method, a.threshold));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structured 3D-SVD volume decomposition toolkit"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic volume");
  gen_cmd->add_option("--kind", gen.kind, "multirank | blobs | blobs_noisy");
  gen_cmd->add_option("--dims", gen.dims, "n1,n2,n3")->delimiter(',')->expected(3);
  gen_cmd->add_option("--rank", gen.params.rank, "multilinear rank for multirank");
  gen_cmd->add_option("--blobs", gen.params.blobs, "blob count");
  gen_cmd->add_flag("--isotropic", gen.params.isotropic, "separable isotropic blobs");
  gen_cmd->add_option("--noise", gen.params.noise, "noise amplitude for blobs_noisy");
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--dtype", gen.dtype, "f32 | f64");
  gen_cmd->add_option("--output,-o", gen.output)->required();

  DecomposeArgs dec;
  auto* dec_cmd = app.add_subcommand("decompose", "Fit a model to a volume");
  dec_cmd->add_option("--input,-i", dec.input)->required();
  dec_cmd->add_option("--method", dec.method, "s3dsvd | tucker | cpd");
  dec_cmd->add_option("--rank", dec.rank)->required();
  dec_cmd->add_option("--seed", dec.seed, "cpd initialization seed");
  dec_cmd->add_option("--max-iters", dec.max_iters);
  dec_cmd->add_option("--tol", dec.tol);
  dec_cmd->add_option("--output,-o", dec.output)->required();

  ReconstructArgs rec;
  auto* rec_cmd = app.add_subcommand("reconstruct", "Rebuild a volume from a model file");
  rec_cmd->add_option("--input,-i", rec.input)->required();
  auto* k_opt = rec_cmd->add_option("--k", rec.k, "truncation level");
  rec_cmd->add_option("--dtype", rec.dtype);
  rec_cmd->add_option("--slices", rec.slices, "i,j,k slice indices to dump as text")
      ->delimiter(',');
  rec_cmd->add_option("--output,-o", rec.output)->required();

  MetricsArgs met;
  auto* met_cmd = app.add_subcommand("metrics", "Score a reconstruction");
  met_cmd->add_option("--input,-i", met.input, "original volume")->required();
  met_cmd->add_option("--recon", met.recon, "reconstructed volume")->required();
  met_cmd->add_option("--model", met.model, "s3dsvd model for PER");
  met_cmd->add_option("--k", met.k);
  met_cmd->add_option("--per-threshold", met.per_threshold);

  SweepArgs sw;
  auto* sw_cmd = app.add_subcommand("sweep", "Metric sweep over methods and levels");
  sw_cmd->add_option("--input,-i", sw.input)->required();
  sw_cmd->add_option("--methods", sw.methods)->delimiter(',');
  sw_cmd->add_option("--ks", sw.ks)->delimiter(',');
  sw_cmd->add_option("--seeds", sw.seeds, "cpd seeds")->delimiter(',');
  sw_cmd->add_option("--csv", sw.csv)->required();
  sw_cmd->add_flag("--no-timing", sw.no_timing, "omit timing columns");
  sw_cmd->add_option("--per-threshold", sw.per_threshold);

  PlotArgs pl;
  auto* pl_cmd = app.add_subcommand("plotdata", "Curve data from a sweep CSV");
  pl_cmd->add_option("--csv", pl.csv)->required();
  pl_cmd->add_option("--curve", pl.curve, "per | psnr");
  pl_cmd->add_option("--method", pl.method);
  pl_cmd->add_option("--threshold", pl.threshold);
  pl_cmd->add_option("--output,-o", pl.output)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error(kUsage, "usage", e.what());
    return kUsage;
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*dec_cmd) return run_decompose(dec);
    if (*rec_cmd) {
      rec.k_given = k_opt->count() > 0;
      return run_reconstruct(rec);
    }
    if (*met_cmd) return run_metrics(met);
    if (*sw_cmd) return run_sweep_cmd(sw);
    if (*pl_cmd) return run_plotdata(pl);
  } catch (const Error& e) {
    const int code = exit_code_for(e);
    report_error(code, e.kind(), e.what());
    return code;
  } catch (const std::exception& e) {
    report_error(kIo, "internal", e.what());
    return kIo;
  }
  return kUsage;
}
