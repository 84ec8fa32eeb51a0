#include <volrank/bench.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <sstream>

#include <volrank/error.hpp>
#include <volrank/s3dsvd.hpp>

namespace volrank {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void validate(const Tensor3& x, const SweepRequest& req) {
  if (req.methods.empty()) throw ArgumentError("sweep needs at least one method");
  if (req.ks.empty()) throw ArgumentError("sweep needs a non-empty k list");
  for (std::size_t i = 0; i < req.ks.size(); ++i) {
    if (req.ks[i] == 0) throw ArgumentError("k values must be positive");
    if (i > 0 && req.ks[i] <= req.ks[i - 1]) {
      throw ArgumentError("k values must be strictly increasing");
    }
  }
  const std::size_t limit = x.dims().min();
  for (Method m : req.methods) {
    if (std::count(req.methods.begin(), req.methods.end(), m) > 1) {
      throw ArgumentError("method listed twice: " + std::string(to_string(m)));
    }
    if (m != Method::cpd && req.ks.back() > limit) {
      throw ArgumentError("k=" + std::to_string(req.ks.back()) + " exceeds min(dims)=" +
                          std::to_string(limit));
    }
  }
  if (std::find(req.methods.begin(), req.methods.end(), Method::cpd) != req.methods.end() &&
      req.cpd_seeds.empty()) {
    throw ArgumentError("cpd sweep needs at least one seed");
  }
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(const std::string& s, std::size_t line) {
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("not a number: '" + s + "'", line);
  }
  return v;
}

}  // namespace

SweepResult run_sweep(const Tensor3& x, const SweepRequest& req) {
  validate(x, req);
  SweepResult result;
  result.per_threshold = req.per_threshold;
  const double n_levels = static_cast<double>(req.ks.size());

  for (Method method : req.methods) {
    switch (method) {
      case Method::s3dsvd: {
        const auto t0 = Clock::now();
        const S3dModel model = decompose(x, req.ks.back());
        const double build = seconds_since(t0);
        for (std::size_t k : req.ks) {
          const auto t1 = Clock::now();
          const Tensor3 xk = reconstruct(model, k);
          const double elapsed = build / n_levels + seconds_since(t1);
          SweepRow row;
          row.report = evaluate(Method::s3dsvd, k, x, xk, elapsed);
          row.report.per = per(model, k);
          result.rows.push_back(row);
        }
        result.per_threshold_rank = select_rank_by_per(model, req.per_threshold);
        break;
      }
      case Method::tucker: {
        for (std::size_t k : req.ks) {
          const auto t0 = Clock::now();
          const TuckerModel model = tucker_decompose(x, k, req.tucker);
          const Tensor3 xk = tucker_reconstruct(model);
          const double elapsed = seconds_since(t0);
          result.rows.push_back({evaluate(Method::tucker, k, x, xk, elapsed), std::nullopt});
        }
        break;
      }
      case Method::cpd: {
        for (std::size_t k : req.ks) {
          const CpStudy study = cpd_study(x, k, req.cpd_seeds, req.threads, req.cpd);
          SweepRow row;
          row.report.method = Method::cpd;
          row.report.k = k;
          row.report.psnr_db = study.psnr_db.mean;
          row.report.mse = study.mse.mean;
          row.report.rel_err = study.rel_err.mean;
          row.report.elapsed_seconds = study.elapsed_seconds.mean;
          row.ci = CiColumns{study.psnr_db.ci_half_width, study.mse.ci_half_width,
                             study.rel_err.ci_half_width, study.elapsed_seconds.ci_half_width};
          result.rows.push_back(row);
        }
        break;
      }
    }
  }
  return result;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string format_sweep_csv(const SweepResult& result, bool timing) {
  const bool with_ci = std::any_of(result.rows.begin(), result.rows.end(),
                                   [](const SweepRow& r) { return r.ci.has_value(); });
  std::ostringstream out;
  out << "method,k,psnr_db,mse,rel_err,per";
  if (timing) out << ",time_s";
  if (with_ci) {
    out << ",psnr_ci,mse_ci,relerr_ci";
    if (timing) out << ",time_ci";
  }
  out << '\n';
  for (const SweepRow& row : result.rows) {
    const MetricsReport& r = row.report;
    out << to_string(r.method) << ',' << r.k << ',' << format_double(r.psnr_db) << ','
        << format_double(r.mse) << ',' << format_double(r.rel_err) << ','
        << (r.per ? format_double(*r.per) : "");
    if (timing) out << ',' << format_double(r.elapsed_seconds);
    if (with_ci) {
      if (row.ci) {
        out << ',' << format_double(row.ci->psnr_db) << ',' << format_double(row.ci->mse) << ','
            << format_double(row.ci->rel_err);
        if (timing) out << ',' << format_double(row.ci->elapsed_seconds);
      } else {
        out << ",,,";
        if (timing) out << ',';
      }
    }
    out << '\n';
  }
  return out.str();
}

std::size_t CsvTable::column(std::string_view name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw ParseError("missing column '" + std::string(name) + "'", 1);
  return static_cast<std::size_t>(it - header.begin());
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  std::size_t line_no = 0;
  bool have_header = false;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    auto cells = split(line, ',');
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw ParseError("row has " + std::to_string(cells.size()) + " cells, header has " +
                           std::to_string(table.header.size()),
                       line_no);
    }
    table.rows.push_back(std::move(cells));
  }
  if (!have_header) throw ParseError("empty CSV", 0);
  return table;
}

Curve parse_curve(std::string_view name) {
  if (name == "per") return Curve::per;
  if (name == "psnr") return Curve::psnr;
  throw ArgumentError("unknown curve '" + std::string(name) + "' (expected per|psnr)");
}

std::string plot_data(const CsvTable& sweep, Curve curve, std::string_view method,
                      double threshold) {
  const std::size_t method_col = sweep.column("method");
  const std::size_t k_col = sweep.column("k");
  const std::size_t value_col = sweep.column(curve == Curve::per ? "per" : "psnr_db");
  const auto per_it = std::find(sweep.header.begin(), sweep.header.end(), "per");
  const bool has_per = per_it != sweep.header.end();
  const std::size_t per_col = has_per ? static_cast<std::size_t>(per_it - sweep.header.begin()) : 0;

  std::ostringstream out;
  out << "# curve=" << (curve == Curve::per ? "per" : "psnr") << " method=" << method << '\n';
  std::optional<std::string> crossing;
  for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
    const auto& row = sweep.rows[i];
    if (row[method_col] != method) continue;
    const std::string& value = row[value_col];
    if (value.empty()) continue;
    parse_double(value, i + 2);
    out << row[k_col] << ' ' << value << '\n';
    if (has_per && !crossing && !row[per_col].empty() &&
        parse_double(row[per_col], i + 2) >= threshold) {
      crossing = row[k_col];
    }
  }
  if (crossing) {
    out << "# threshold " << format_double(threshold) << " reached at k=" << *crossing << '\n';
  }
  return out.str();
}

}  // namespace volrank
