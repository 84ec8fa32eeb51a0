#include <volrank/metrics.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include <volrank/error.hpp>
#include <volrank/kernels.hpp>

namespace volrank {
namespace {

void check_same(const Tensor3& x, const Tensor3& xhat) {
  if (x.dims() != xhat.dims()) throw ShapeError("original and reconstruction differ in dims");
}

double sq_error(const Tensor3& x, const Tensor3& xhat) {
  check_same(x, xhat);
  return kernels::sq_dist(x.data().data(), xhat.data().data(), x.size());
}

double coefficient_energy(const S3dModel& model, std::size_t k) {
  double e = 0.0;
  for (std::size_t i = 0; i < k; ++i) e += model.qsigma[i] * model.qsigma[i];
  return e;
}

}  // namespace

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::s3dsvd: return "s3dsvd";
    case Method::tucker: return "tucker";
    case Method::cpd: return "cpd";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "s3dsvd") return Method::s3dsvd;
  if (name == "tucker") return Method::tucker;
  if (name == "cpd") return Method::cpd;
  throw ArgumentError("unknown method '" + std::string(name) + "' (expected s3dsvd|tucker|cpd)");
}

double mse(const Tensor3& x, const Tensor3& xhat) {
  return sq_error(x, xhat) / static_cast<double>(x.size());
}

double psnr_from_mse(double i_max, double mse_value) {
  if (!(i_max > 0.0)) throw DegenerateInputError("PSNR needs a positive peak intensity");
  if (mse_value == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(i_max * i_max / mse_value);
}

double psnr(const Tensor3& x, const Tensor3& xhat) {
  const double m = mse(x, xhat);
  const double i_max = *std::max_element(x.data().begin(), x.data().end());
  return psnr_from_mse(i_max, m);
}

double rel_err(const Tensor3& x, const Tensor3& xhat) {
  const double num = sq_error(x, xhat);
  const double den = inner_product(x, x);
  if (den == 0.0) throw DegenerateInputError("relative error against a zero-norm tensor");
  return std::sqrt(num / den);
}

double per(const S3dModel& model, std::size_t k) {
  if (k < 1 || k > model.r) {
    throw ArgumentError("PER level k=" + std::to_string(k) + " outside [1, " +
                        std::to_string(model.r) + "]");
  }
  const double total = coefficient_energy(model, model.r);
  if (total == 0.0) throw DegenerateInputError("PER of an all-zero coefficient set");
  if (k == model.r) return 1.0;
  return coefficient_energy(model, k) / total;
}

std::size_t select_rank_by_per(const S3dModel& model, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw ArgumentError("PER threshold must lie in (0, 1]");
  }
  const double total = coefficient_energy(model, model.r);
  if (total == 0.0) throw DegenerateInputError("PER of an all-zero coefficient set");
  double acc = 0.0;
  for (std::size_t k = 1; k < model.r; ++k) {
    acc += model.qsigma[k - 1] * model.qsigma[k - 1];
    if (acc / total >= threshold) return k;
  }
  return model.r;
}

MetricsReport evaluate(Method method, std::size_t k, const Tensor3& x, const Tensor3& xhat,
                       double elapsed_seconds) {
  MetricsReport r;
  r.method = method;
  r.k = k;
  const double se = sq_error(x, xhat);
  const double norm2 = inner_product(x, x);
  if (norm2 == 0.0) throw DegenerateInputError("relative error against a zero-norm tensor");
  r.mse = se / static_cast<double>(x.size());
  r.rel_err = std::sqrt(se / norm2);
  r.psnr_db = psnr_from_mse(*std::max_element(x.data().begin(), x.data().end()), r.mse);
  r.elapsed_seconds = elapsed_seconds;
  return r;
}

}  // namespace volrank
