#pragma once

// Benchmark harness: method x truncation-level sweeps and their CSV /
// plot-data text forms.
//
// The structured model is computed once at max(ks) and truncated per level;
// Tucker and CPD are refitted at every level. Each row's time is wall-clock
// for producing that level's reconstruction: for s3dsvd the one-off
// decomposition time is amortized evenly over the requested levels.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <volrank/baselines.hpp>
#include <volrank/metrics.hpp>
#include <volrank/tensor.hpp>

namespace volrank {

struct SweepRequest {
  std::vector<Method> methods{Method::s3dsvd, Method::tucker, Method::cpd};
  std::vector<std::size_t> ks;
  std::vector<std::uint64_t> cpd_seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  double per_threshold = 0.99;
  std::size_t threads = 1;
  TuckerOptions tucker;
  CpOptions cpd;
};

struct CiColumns {
  double psnr_db;
  double mse;
  double rel_err;
  double elapsed_seconds;
};

struct SweepRow {
  MetricsReport report;       ///< cpd rows hold study means
  std::optional<CiColumns> ci;  ///< cpd only
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double per_threshold = 0.99;
  /// Smallest k (over 1..max ks) with PER(k) >= per_threshold; set when
  /// s3dsvd was swept.
  std::optional<std::size_t> per_threshold_rank;
};

/// Throws ArgumentError for an empty or non-increasing k list, an empty
/// method list, or a duplicate method.
SweepResult run_sweep(const Tensor3& x, const SweepRequest& request);

/// Shortest decimal that round-trips to the same double; "inf", "-inf" and
/// "nan" for non-finite values.
std::string format_double(double v);

/// Header method,k,psnr_db,mse,rel_err,per,time_s plus, when any cpd row is
/// present, psnr_ci,mse_ci,relerr_ci,time_ci. Without timing the time_s and
/// time_ci columns are omitted.
std::string format_sweep_csv(const SweepResult& result, bool timing);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index; throws ParseError when absent.
  std::size_t column(std::string_view name) const;
};

/// Comma-separated text with one header line; lines starting with '#' are
/// skipped. Throws ParseError (offset = line number) on ragged rows.
CsvTable parse_csv(std::string_view text);

enum class Curve { per, psnr };

Curve parse_curve(std::string_view name);

/// "k value" lines for `method`'s rows, preceded by a "# curve" comment and
/// followed by "# threshold <t> reached at k=<k>" when some row's PER
/// reaches the threshold.
std::string plot_data(const CsvTable& sweep, Curve curve, std::string_view method = "s3dsvd",
                      double threshold = 0.99);

}  // namespace volrank
