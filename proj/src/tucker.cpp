#include <volrank/baselines.hpp>

#include <cmath>
#include <string>

#include <volrank/error.hpp>
#include <volrank/kernels.hpp>
#include <volrank/linalg.hpp>
#include <volrank/s3dsvd.hpp>

namespace volrank {
namespace {

double relative_error(const Tensor3& x, const Tensor3& xhat, double norm2) {
  if (norm2 == 0.0) return 0.0;
  return std::sqrt(kernels::sq_dist(x.data().data(), xhat.data().data(), x.size()) / norm2);
}

}  // namespace

TuckerModel tucker_decompose(const Tensor3& x, std::size_t k, TuckerOptions opts) {
  // The HOSVD start is exactly the structured model at rank k.
  S3dModel start = decompose(x, k);

  TuckerModel model;
  model.factors = std::move(start.factors);
  model.core = std::move(start.core);

  const double norm2 = inner_product(x, x);
  model.fit_history.push_back(relative_error(x, tucker_reconstruct(model), norm2));

  for (std::size_t iter = 0; iter < opts.max_iters; ++iter) {
    for (int mode = 1; mode <= 3; ++mode) {
      Tensor3 y = x;
      for (int other = 1; other <= 3; ++other) {
        if (other != mode) y = mode_product_transposed(y, model.factors[other - 1], other);
      }
      model.factors[mode - 1] = svd_left(unfold(y, mode)).u.leading_cols(k);
    }
    model.core = project(x, model.factors[0], model.factors[1], model.factors[2]);
    const double err = relative_error(x, tucker_reconstruct(model), norm2);
    const double prev = model.fit_history.back();
    model.fit_history.push_back(err);
    if (prev - err < opts.tol) {
      model.converged = true;
      break;
    }
  }
  return model;
}

Tensor3 tucker_reconstruct(const TuckerModel& model) {
  return tucker_product(model.core, model.factors[0], model.factors[1], model.factors[2]);
}

}  // namespace volrank
