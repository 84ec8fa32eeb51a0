#include <doctest.h>

#include <cmath>
#include <string>

#include <volrank/bench.hpp>
#include <volrank/error.hpp>
#include <volrank/s3dsvd.hpp>
#include <volrank/volume_io.hpp>

#include "oracles.hpp"

using namespace volrank;

namespace {

Tensor3 small_blobs(std::uint64_t seed) {
  SyntheticParams p;
  p.blobs = 8;
  return gen_synthetic(SyntheticKind::blobs, Dims{12, 13, 14}, p, seed);
}

SweepRequest request(std::vector<Method> methods, std::vector<std::size_t> ks) {
  SweepRequest r;
  r.methods = std::move(methods);
  r.ks = std::move(ks);
  r.cpd_seeds = {0, 1, 2};
  return r;
}

}  // namespace

TEST_SUITE("bench") {

TEST_CASE("format_double") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(INFINITY) == "inf");
  CHECK(format_double(-INFINITY) == "-inf");
  CHECK(format_double(NAN) == "nan");
  const double v = 0.1 + 0.2;
  CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("sweep validation") {
  const Tensor3 x = small_blobs(1);
  CHECK_THROWS_AS(run_sweep(x, request({Method::s3dsvd}, {})), ArgumentError);
  CHECK_THROWS_AS(run_sweep(x, request({}, {1})), ArgumentError);
  CHECK_THROWS_AS(run_sweep(x, request({Method::s3dsvd}, {3, 2})), ArgumentError);
  CHECK_THROWS_AS(run_sweep(x, request({Method::s3dsvd}, {2, 2})), ArgumentError);
  CHECK_THROWS_AS(run_sweep(x, request({Method::s3dsvd}, {0, 2})), ArgumentError);
  CHECK_THROWS_AS(run_sweep(x, request({Method::tucker, Method::tucker}, {2})), ArgumentError);
  CHECK_THROWS_AS(run_sweep(x, request({Method::tucker}, {13})), ArgumentError);
}

TEST_CASE("s3dsvd rows match single-shot decomposition") {
  const Tensor3 x = small_blobs(2);
  const SweepResult r = run_sweep(x, request({Method::s3dsvd}, {2, 5, 9}));
  REQUIRE(r.rows.size() == 3);
  double prev_per = 0.0, prev_psnr = -INFINITY;
  for (const SweepRow& row : r.rows) {
    const std::size_t k = row.report.k;
    const Tensor3 single = reconstruct(decompose(x, k), k);
    CHECK(std::abs(row.report.mse - mse(x, single)) <= 1e-12);
    CHECK(std::abs(row.report.rel_err - rel_err(x, single)) <= 1e-12);
    CHECK(std::abs(row.report.psnr_db - psnr(x, single)) <= 1e-12 * std::abs(row.report.psnr_db));
    REQUIRE(row.report.per.has_value());
    CHECK(*row.report.per >= prev_per);
    CHECK(row.report.psnr_db >= prev_psnr - 1e-9);
    prev_per = *row.report.per;
    prev_psnr = row.report.psnr_db;
    CHECK_FALSE(row.ci.has_value());
  }
  REQUIRE(r.per_threshold_rank.has_value());
  CHECK(*r.per_threshold_rank == select_rank_by_per(decompose(x, 9), 0.99));
}

TEST_CASE("full sweep layout and csv") {
  const Tensor3 x = small_blobs(3);
  const SweepResult r = run_sweep(x, request({Method::s3dsvd, Method::tucker, Method::cpd}, {2, 4}));
  REQUIRE(r.rows.size() == 6);
  const Method order[] = {Method::s3dsvd, Method::s3dsvd, Method::tucker,
                          Method::tucker, Method::cpd,    Method::cpd};
  for (std::size_t i = 0; i < 6; ++i) CHECK(r.rows[i].report.method == order[i]);
  CHECK(r.rows[4].ci.has_value());
  CHECK_FALSE(r.rows[2].report.per.has_value());

  const std::string csv = format_sweep_csv(r, false);
  CHECK(csv.rfind("method,k,psnr_db,mse,rel_err,per,psnr_ci,mse_ci,relerr_ci\n", 0) == 0);
  const CsvTable t = parse_csv(csv);
  CHECK(t.rows.size() == 6);
  CHECK(t.rows[0][0] == "s3dsvd");
  CHECK(t.rows[2][t.column("per")].empty());
  CHECK_FALSE(t.rows[4][t.column("psnr_ci")].empty());

  const std::string timed = format_sweep_csv(r, true);
  CHECK(timed.rfind("method,k,psnr_db,mse,rel_err,per,time_s,psnr_ci,mse_ci,relerr_ci,time_ci\n", 0) == 0);
  CHECK(parse_csv(timed).rows.size() == 6);

  const SweepResult only = run_sweep(x, request({Method::tucker}, {3}));
  CHECK(format_sweep_csv(only, true).rfind("method,k,psnr_db,mse,rel_err,per,time_s\n", 0) == 0);
}

TEST_CASE("sweep csv is stable without timing") {
  const Tensor3 x = small_blobs(4);
  auto req = request({Method::s3dsvd, Method::tucker, Method::cpd}, {1, 3});
  const std::string a = format_sweep_csv(run_sweep(x, req), false);
  req.threads = 3;
  const std::string b = format_sweep_csv(run_sweep(x, req), false);
  CHECK(a == b);
}

TEST_CASE("csv parsing") {
  const CsvTable t = parse_csv("# comment\na,b\n1,2\r\n\n3,4\n");
  CHECK(t.header == std::vector<std::string>{"a", "b"});
  CHECK(t.rows.size() == 2);
  CHECK(t.column("b") == 1);
  CHECK_THROWS_AS(t.column("c"), ParseError);
  CHECK_THROWS_AS(parse_csv("a,b\n1\n"), ParseError);
  CHECK_THROWS_AS(parse_csv(""), ParseError);
}

TEST_CASE("plot data") {
  const std::string csv =
      "method,k,psnr_db,mse,rel_err,per\n"
      "s3dsvd,10,30.5,0.001,0.1,0.95\n"
      "s3dsvd,20,40.25,0.0001,0.01,1\n"
      "tucker,10,31,0.0009,0.09,\n";
  const CsvTable t = parse_csv(csv);
  const std::string per_curve = plot_data(t, Curve::per);
  CHECK(per_curve ==
        "# curve=per method=s3dsvd\n10 0.95\n20 1\n# threshold 0.99 reached at k=20\n");
  const std::string psnr_curve = plot_data(t, Curve::psnr);
  CHECK(psnr_curve.find("10 30.5\n20 40.25\n") != std::string::npos);
  CHECK(plot_data(t, Curve::psnr, "tucker").find("10 31\n") != std::string::npos);
  CHECK(plot_data(t, Curve::per, "s3dsvd", 1.5).find("threshold") == std::string::npos);

  const CsvTable low = parse_csv("method,k,psnr_db,mse,rel_err,per\ns3dsvd,1,3,1,1,0.5\n");
  CHECK(plot_data(low, Curve::per).find("threshold") == std::string::npos);

  const CsvTable no_per = parse_csv("method,k,psnr_db\ns3dsvd,1,3\n");
  CHECK_THROWS_AS(plot_data(no_per, Curve::per), ParseError);
  CHECK_THROWS_AS(parse_curve("mse"), ArgumentError);
}

}  // TEST_SUITE
