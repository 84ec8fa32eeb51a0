#include <doctest.h>

#include <cmath>
#include <vector>

#include <volrank/error.hpp>
#include <volrank/linalg.hpp>
#include <volrank/tensor.hpp>

#include "oracles.hpp"

using namespace volrank;

namespace {

Tensor3 ones(Dims d) {
  Tensor3 t(d);
  for (double& v : t.data()) v = 1.0;
  return t;
}

Tensor3 counting_2x2x2() {
  Tensor3 x(Dims{2, 2, 2});
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) x(i, j, k) = 4.0 * i + 2.0 * j + k;
  return x;
}

}  // namespace

TEST_SUITE("tensor") {

TEST_CASE("construction") {
  Tensor3 t(Dims{2, 3, 4});
  CHECK(t.size() == 24);
  CHECK(oracle::all_zero(t));
  CHECK_THROWS_AS(Tensor3(Dims{0, 3, 4}), ShapeError);
  CHECK_THROWS_AS(Tensor3(Dims{2, 2, 2}, std::vector<double>(7)), ShapeError);
  CHECK(t.offset(1, 2, 3) == (1 * 3 + 2) * 4 + 3);
}

TEST_CASE("require_finite") {
  std::vector<double> v{1.0, 2.0, NAN};
  CHECK_THROWS_AS(require_finite(v, "test"), NumericError);
  v[2] = INFINITY;
  CHECK_THROWS_AS(require_finite(v, "test"), NumericError);
  v[2] = 3.0;
  CHECK_NOTHROW(require_finite(v, "test"));
}

TEST_CASE("inner product and norm") {
  const Tensor3 a = ones(Dims{2, 2, 2});
  CHECK(inner_product(a, a) == 8.0);
  CHECK(inner_product(a, Tensor3(Dims{2, 2, 2})) == 0.0);
  CHECK(frobenius_norm(a) == doctest::Approx(std::sqrt(8.0)).epsilon(1e-15));
  CHECK(frobenius_norm(Tensor3(Dims{3, 1, 2})) == 0.0);
  CHECK_THROWS_AS(inner_product(a, Tensor3(Dims{2, 2, 3})), ShapeError);

  Rng rng(1);
  const Tensor3 x = oracle::random_tensor(rng, Dims{3, 4, 5});
  const Tensor3 y = oracle::random_tensor(rng, Dims{3, 4, 5});
  CHECK(oracle::rel_diff(inner_product(x, y), oracle::inner(x, y)) <= 1e-14);
  CHECK(oracle::rel_diff(inner_product(x, y), inner_product(y, x)) <= 1e-14);

  const Tensor3 z = oracle::random_tensor(rng, Dims{4, 4, 4});
  CHECK(oracle::rel_diff(frobenius_norm(z), std::sqrt(oracle::inner(z, z))) <= 1e-14);
  const double n = frobenius_norm(z);
  CHECK(oracle::rel_diff(n * n, inner_product(z, z)) <= 1e-14);
}

TEST_CASE("outer3") {
  const std::vector<double> e{1.0, 0.0};
  const Tensor3 t = outer3(e, e, e);
  CHECK(t(0, 0, 0) == 1.0);
  double rest = 0.0;
  for (double v : t.data()) rest += std::abs(v);
  CHECK(rest == 1.0);

  const std::vector<double> u{1, 2}, v{3, 4}, w{5, 6}, zero{0, 0, 0};
  const Tensor3 p = outer3(u, v, w);
  CHECK(p(1, 1, 1) == 48.0);
  CHECK(p == oracle::outer(u, v, w));
  CHECK(oracle::all_zero(outer3(u, v, zero)));
  CHECK_THROWS_AS(outer3(u, v, std::vector<double>{}), ShapeError);
}

TEST_CASE("separable inner product identity") {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    auto u1 = oracle::random_vector(rng, 5), u2 = oracle::random_vector(rng, 5);
    auto v1 = oracle::random_vector(rng, 6), v2 = oracle::random_vector(rng, 6);
    auto w1 = oracle::random_vector(rng, 7), w2 = oracle::random_vector(rng, 7);
    auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
      double s = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
      return s;
    };
    const double lhs = inner_product(outer3(u1, v1, w1), outer3(u2, v2, w2));
    const double rhs = dot(u1, u2) * dot(v1, v2) * dot(w1, w2);
    CHECK(oracle::rel_diff(lhs, rhs) <= 1e-12);
  }
}

TEST_CASE("unfold follows the fastest-lower-mode column order") {
  const Tensor3 x = counting_2x2x2();
  const Matrix x1 = unfold(x, 1);
  CHECK(x1.rows() == 2);
  CHECK(x1.cols() == 4);
  CHECK(x1(0, 0) == 0.0);
  CHECK(x1(0, 1) == 2.0);
  CHECK(x1(0, 2) == 1.0);
  CHECK(x1(0, 3) == 3.0);

  Matrix hand(2, 4);
  const double row0[] = {0, 2, 1, 3};
  for (std::size_t c = 0; c < 4; ++c) {
    hand(0, c) = row0[c];
    hand(1, c) = row0[c] + 4.0;
  }
  CHECK(fold(hand, 1, Dims{2, 2, 2}) == x);

  // Columns of the other unfoldings, checked entry by entry.
  Rng rng(3);
  const Tensor3 y = oracle::random_tensor(rng, Dims{3, 4, 5});
  const Matrix y2 = unfold(y, 2), y3 = unfold(y, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      for (std::size_t k = 0; k < 5; ++k) {
        CHECK(y2(j, i + 3 * k) == y(i, j, k));
        CHECK(y3(k, i + 3 * j) == y(i, j, k));
      }
  CHECK_THROWS_AS(unfold(y, 4), ArgumentError);
}

TEST_CASE("unfolding of a rank-one tensor has rank one") {
  Rng rng(4);
  const Tensor3 t = outer3(oracle::random_vector(rng, 4), oracle::random_vector(rng, 5),
                           oracle::random_vector(rng, 6));
  for (int mode = 1; mode <= 3; ++mode) {
    // The Gram-based oracle only resolves sqrt(eps) here, so use the library SVD.
    const auto sv = svd(unfold(t, mode)).singular_values;
    CHECK(sv[1] < 1e-12 * std::max(1.0, sv[0]));
  }
}

TEST_CASE("fold inverts unfold bit-exactly") {
  Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const Dims d = oracle::random_dims(rng, 8, 8, 8);
    const Tensor3 x = oracle::random_tensor(rng, d);
    for (int mode = 1; mode <= 3; ++mode) CHECK(fold(unfold(x, mode), mode, d) == x);
  }
  const Dims d{5, 3, 4};
  CHECK(oracle::all_zero(fold(Matrix(3, 20), 2, d)));
  CHECK_THROWS_AS(fold(Matrix(3, 19), 2, d), ShapeError);
}

TEST_CASE("mode products") {
  Rng rng(6);
  const Tensor3 x = oracle::random_tensor(rng, Dims{4, 5, 6});
  for (int mode = 1; mode <= 3; ++mode) {
    CHECK(mode_product(x, Matrix::identity(x.dims()[mode]), mode) == x);
    const Matrix m = oracle::random_matrix(rng, 3, x.dims()[mode]);
    CHECK(oracle::rel_max_diff(mode_product(x, m, mode), oracle::mode_product(x, m, mode)) <= 1e-13);
    CHECK(oracle::rel_max_diff(mode_product_transposed(x, m.transposed(), mode),
                               mode_product(x, m, mode)) <= 1e-14);
  }

  Matrix ones_row(1, 6);
  for (double& v : ones_row.data()) v = 1.0;
  const Tensor3 sums = mode_product(x, ones_row, 3);
  CHECK(sums.dims() == Dims{4, 5, 1});
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 5; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < 6; ++k) s += x(i, j, k);
      CHECK(sums(i, j, 0) == doctest::Approx(s).epsilon(1e-14));
    }

  for (int trial = 0; trial < 10; ++trial) {
    const Dims d = oracle::random_dims(rng, 6, 7, 8);
    const Tensor3 z = oracle::random_tensor(rng, d);
    const Matrix a = oracle::random_matrix(rng, 3, d.n1);
    const Matrix b = oracle::random_matrix(rng, 4, d.n2);
    const Tensor3 ab = mode_product(mode_product(z, a, 1), b, 2);
    const Tensor3 ba = mode_product(mode_product(z, b, 2), a, 1);
    CHECK(oracle::rel_max_diff(ab, ba) <= 1e-12);
  }

  CHECK_THROWS_AS(mode_product(x, Matrix(3, 5), 1), ShapeError);
  CHECK_THROWS_AS(mode_product(x, Matrix(3, 4), 0), ArgumentError);
}

TEST_CASE("tucker product and projection") {
  Rng rng(7);
  const Tensor3 core = oracle::random_tensor(rng, Dims{2, 3, 2});
  const Matrix u1 = oracle::random_matrix(rng, 4, 2);
  const Matrix u2 = oracle::random_matrix(rng, 5, 3);
  const Matrix u3 = oracle::random_matrix(rng, 6, 2);
  const Tensor3 y = tucker_product(core, u1, u2, u3);
  CHECK(oracle::rel_max_diff(y, oracle::tucker_expand(core, u1, u2, u3)) <= 1e-13);

  const Tensor3 p = project(y, u1, u2, u3);
  const Tensor3 expect = oracle::mode_product(
      oracle::mode_product(oracle::mode_product(y, u1.transposed(), 1), u2.transposed(), 2),
      u3.transposed(), 3);
  CHECK(oracle::rel_max_diff(p, expect) <= 1e-13);
}

TEST_CASE("leading block") {
  Rng rng(8);
  const Tensor3 x = oracle::random_tensor(rng, Dims{4, 5, 6});
  const Tensor3 b = x.leading_block(Dims{2, 3, 1});
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(b(i, j, 0) == x(i, j, 0));
  CHECK_THROWS_AS(x.leading_block(Dims{5, 1, 1}), ShapeError);
}

}  // TEST_SUITE
