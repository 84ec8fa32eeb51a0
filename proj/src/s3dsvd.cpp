#include <volrank/s3dsvd.hpp>

#include <cmath>
#include <string>

#include <volrank/error.hpp>
#include <volrank/kernels.hpp>

namespace volrank {
namespace {

void check_level(const S3dModel& model, std::size_t k) {
  if (k < 1 || k > model.r) {
    throw ArgumentError("truncation level k=" + std::to_string(k) + " outside [1, " +
                        std::to_string(model.r) + "]");
  }
}

}  // namespace

S3dModel model_from_factors(const Tensor3& x, std::array<Matrix, 3> factors, std::size_t r) {
  S3dModel m;
  m.dims = x.dims();
  m.r = r;
  for (int mode = 0; mode < 3; ++mode) {
    m.factors[mode] = factors[mode].cols() == r ? std::move(factors[mode])
                                                : factors[mode].leading_cols(r);
  }
  m.core = project(x, m.factors[0], m.factors[1], m.factors[2]);
  m.qsigma.resize(r);
  for (std::size_t i = 0; i < r; ++i) m.qsigma[i] = m.core(i, i, i);
  return m;
}

S3dModel decompose(const Tensor3& x, std::size_t r,
                   std::array<std::vector<double>, 3>* unfolding_spectra) {
  const Dims& d = x.dims();
  if (r < 1 || r > d.min()) {
    throw ArgumentError("rank r=" + std::to_string(r) + " must lie in [1, min(dims)=" +
                        std::to_string(d.min()) + "]");
  }
  require_finite(x.data(), "input tensor");

  std::array<Matrix, 3> factors;
  for (int mode = 1; mode <= 3; ++mode) {
    SvdResult s = svd_left(unfold(x, mode));
    factors[mode - 1] = s.u.leading_cols(r);
    if (unfolding_spectra) (*unfolding_spectra)[mode - 1] = std::move(s.singular_values);
  }
  return model_from_factors(x, std::move(factors), r);
}

S3dModel decompose(const Tensor3& x, std::size_t r) { return decompose(x, r, nullptr); }

Tensor3 reconstruct(const S3dModel& model, std::size_t k) {
  check_level(model, k);
  if (k == model.r) {
    return tucker_product(model.core, model.factors[0], model.factors[1], model.factors[2]);
  }
  const S3dModel t = truncate(model, k);
  return tucker_product(t.core, t.factors[0], t.factors[1], t.factors[2]);
}

Tensor3 diagonal_expansion(const S3dModel& model, std::size_t k) {
  check_level(model, k);
  const Dims& d = model.dims;
  Tensor3 out(d);
  std::vector<double> vw(d.n2 * d.n3);
  for (std::size_t c = 0; c < k; ++c) {
    auto u = model.factors[0].col(c);
    auto v = model.factors[1].col(c);
    auto w = model.factors[2].col(c);
    for (std::size_t j = 0; j < d.n2; ++j)
      for (std::size_t l = 0; l < d.n3; ++l) vw[j * d.n3 + l] = v[j] * w[l];
    for (std::size_t i = 0; i < d.n1; ++i) {
      kernels::axpy(model.qsigma[c] * u[i], vw.data(), out.data().data() + i * d.n2 * d.n3,
                    vw.size());
    }
  }
  return out;
}

double epsilon_r(const S3dModel& model, const Tensor3& x, std::size_t k) {
  check_level(model, k);
  const double norm2 = inner_product(x, x);
  if (norm2 == 0.0) throw DegenerateInputError("epsilon_r of a zero-norm tensor");
  double captured = 0.0;
  for (std::size_t i = 0; i < k; ++i) captured += model.qsigma[i] * model.qsigma[i];
  return std::sqrt(std::max(0.0, 1.0 - captured / norm2));
}

CoeffArray coeff_array(const S3dModel& model) {
  CoeffArray a;
  a.r = model.r;
  a.s = Tensor3(Dims{model.r, model.r, model.r});
  for (std::size_t i = 0; i < model.r; ++i) a.s(i, i, i) = model.qsigma[i];
  return a;
}

std::vector<OrderingEntry> ordering_report(const S3dModel& model) {
  std::vector<OrderingEntry> out;
  out.reserve(model.qsigma.size());
  for (std::size_t i = 0; i < model.qsigma.size(); ++i) {
    const double mag = std::abs(model.qsigma[i]);
    const bool next_larger =
        i + 1 < model.qsigma.size() && mag < std::abs(model.qsigma[i + 1]);
    out.push_back({i, mag, next_larger});
  }
  return out;
}

S3dModel truncate(const S3dModel& model, std::size_t k) {
  check_level(model, k);
  S3dModel t;
  t.dims = model.dims;
  t.r = k;
  for (int m = 0; m < 3; ++m) t.factors[m] = model.factors[m].leading_cols(k);
  t.core = model.core.leading_block(Dims{k, k, k});
  t.qsigma.assign(model.qsigma.begin(), model.qsigma.begin() + k);
  return t;
}

}  // namespace volrank
