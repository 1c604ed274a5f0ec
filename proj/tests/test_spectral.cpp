#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "helpers.hpp"
#include "visco/spectral.hpp"

using namespace visco;
using testing_helpers::max_diff;
using testing_helpers::random_field;

namespace {
constexpr double pi = std::numbers::pi;
constexpr Complex I{0.0, 1.0};

Field sin_mode(const SpectralGrid& g, int axis) {
  Field f(g, Rank::scalar);
  const int n = g.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        const auto x = g.position(i, j, l);
        f(0, (static_cast<std::size_t>(i) * n + j) * n + l) = std::sin(2 * pi / g.length() * x[axis]);
      }
  return f;
}
}  // namespace

TEST_CASE("grid construction and lattice") {
  auto g = make_grid(8, 2 * pi);
  CHECK(g.dk() == doctest::Approx(1.0));
  auto k = g.axis_wavenumbers();
  REQUIRE(k.size() == 8);
  for (int m = -4; m < 4; ++m) CHECK(k[m + 4] == doctest::Approx(m));
  CHECK_THROWS_AS(make_grid(7, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(6, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(8, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(8, -1.0), std::invalid_argument);
}

TEST_CASE("round trip transform") {
  auto g = make_grid(16, 3.0);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  Field f(g, Rank::vector);
  for (auto& v : f.raw()) v = nd(rng);
  Field back = inverse(forward(f));
  CHECK(max_diff(f, back) / max_abs(f) < 1e-12);
}

TEST_CASE("apply_multiplier examples") {
  auto g = make_grid(16, 2.0);
  Field f = random_field(g, Rank::scalar, 1);
  Field id = apply_multiplier(f, [](const Vec3&) { return Eigen::MatrixXcd::Identity(1, 1); });
  CHECK(max_diff(f, id) < 1e-14);

  Field s = sin_mode(g, 1);
  Field d = apply_multiplier(s, [](const Vec3& xi) {
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = I * xi[1];
    return m;
  });
  const double kk = 2 * pi / g.length();
  double err = 0.0;
  const int n = g.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        const auto x = g.position(i, j, l);
        err = std::max(err, std::abs(d(0, (static_cast<std::size_t>(i) * n + j) * n + l) - kk * std::cos(kk * x[1])));
      }
  CHECK(err < 1e-12);

  Field lap = apply_multiplier(s, [](const Vec3& xi) {
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = -(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
    return m;
  });
  Field expect = s;
  expect *= -kk * kk;
  CHECK(max_diff(lap, expect) < 1e-12);

  auto bad = [](const Vec3& xi) {
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = 1.0 / (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
    return m;
  };
  CHECK_THROWS_AS(apply_multiplier(s, bad), std::domain_error);
  Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(1, 1);
  CHECK_NOTHROW(apply_multiplier(s, bad, zero));
}

TEST_CASE("multiplier composition matches product symbol") {
  auto g = make_grid(16, 5.0);
  Field f = random_field(g, Rank::scalar, 2);
  auto a = [](const Vec3& xi) {
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = std::exp(-0.1 * (xi[0] * xi[0] + 2 * xi[1] * xi[1]));
    return m;
  };
  auto b = [](const Vec3& xi) {
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = 1.0 + xi[2] * xi[2];
    return m;
  };
  Field ab = apply_multiplier(apply_multiplier(f, a), b);
  Field ba = apply_multiplier(apply_multiplier(f, b), a);
  Field prod = apply_multiplier(f, [&](const Vec3& xi) { return Eigen::MatrixXcd(a(xi) * b(xi)); });
  CHECK(max_diff(ab, prod) < 1e-13 * max_abs(prod));
  CHECK(max_diff(ba, prod) < 1e-13 * max_abs(prod));
}

TEST_CASE("frequency split") {
  auto g = make_grid(16, 8 * pi);
  CutoffSpec c{1.0};
  CHECK(c.low(0.5) == 1.0);
  CHECK(c.low(1.0 / std::sqrt(2.0)) == 0.0);
  for (double k = 0.0; k < 1.0; k += 0.01) {
    CHECK(c.low(k) >= 0.0);
    CHECK(c.low(k) <= 1.0);
    CHECK(c.low(k) + c.high(k) == 1.0);
  }
  Field constant(g, Rank::scalar);
  constant.fill(2.5);
  auto [lo, hi] = frequency_split(constant, c);
  CHECK(max_diff(lo, constant) < 1e-13);
  CHECK(max_abs(hi) < 1e-13);

  // highest lattice mode lies outside m1/√2
  Field top(g, Rank::scalar);
  const int n = g.n();
  for (std::size_t i = 0; i < top.size(); ++i) top(0, i) = std::cos(2 * pi * (n / 2 - 1) * static_cast<double>(i % n) / n);
  auto [tlo, thi] = frequency_split(top, c);
  CHECK(max_abs(tlo) < 1e-13);
  CHECK(max_diff(thi, top) < 1e-13);

  Field r = random_field(g, Rank::vector, 3, 0.01);
  auto [rlo, rhi] = frequency_split(r, c);
  CHECK(max_diff(rlo + rhi, r) < 1e-14);

  CHECK_THROWS_AS(frequency_split(r, CutoffSpec{0.4}), std::invalid_argument);
}

TEST_CASE("inverse laplacian") {
  auto g = make_grid(16, 3.0);
  Field s = sin_mode(g, 0);
  Field u = inverse_laplacian(s);
  Field expect = s;
  expect *= std::pow(g.length() / (2 * pi), 2);
  CHECK(max_diff(u, expect) < 1e-13);

  Field constant(g, Rank::scalar);
  constant.fill(1.0);
  CHECK(max_abs(inverse_laplacian(constant)) < 1e-15);

  Field f = random_field(g, Rank::scalar, 4);
  Spectrum fs = forward(f);
  fs(0, 0) = 0.0;
  Spectrum back = laplacian(inverse_laplacian(fs));
  back *= -1.0;
  CHECK(max_diff(inverse(back), inverse(fs)) < 1e-12 * max_abs(f));
}

TEST_CASE("leray projection") {
  auto g = make_grid(16, 4.0);
  Field chi = random_field(g, Rank::scalar, 5);
  Spectrum grad = gradient(forward(chi));
  CHECK(max_abs(inverse(leray_project(grad))) < 1e-12 * max_abs(inverse(grad)));

  Field w = random_field(g, Rank::vector, 6);
  Spectrum pw = leray_project(forward(w));
  CHECK(max_diff(leray_project(pw), pw) < 1e-12 * max_abs(pw));
  CHECK(max_abs(inverse(divergence(pw))) < 1e-12 * max_abs(w));

  std::mt19937_64 rng(9);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::Vector3d xi(nd(rng), nd(rng), nd(rng));
    Eigen::Matrix3d p = Eigen::Matrix3d::Identity() - xi * xi.transpose() / xi.squaredNorm();
    CHECK((p * xi).norm() < 1e-15 * xi.norm() + 1e-15);
  }
}

TEST_CASE("grad_invlap_div against primitive composition") {
  auto g = make_grid(16, 4.0);
  Field t = random_field(g, Rank::tensor, 8);
  Spectrum ts = forward(t);
  Spectrum direct = grad_invlap_div(ts);
  Spectrum composed = gradient(inverse_laplacian(row_divergence(transpose(ts))));
  CHECK(max_diff(direct, composed) < 1e-13 * max_abs(direct));

  // rows that are gradients: T^{kj} = ∂_j a^k, so ᵀT rows are ∇a^k
  Field a = random_field(g, Rank::vector, 10);
  Spectrum ga = gradient(forward(a));
  Spectrum r = grad_invlap_div(ga);
  Spectrum expect = gradient(inverse_laplacian(gradient(divergence(forward(a)))));
  CHECK(max_diff(r, expect) < 1e-13 * max_abs(r));

  Spectrum zero(g, Rank::tensor);
  CHECK(max_abs(grad_invlap_div(zero)) == 0.0);

  // single ξ-aligned rank-one mode T = ξξᵀ c: result is −T, traces agree in magnitude
  Spectrum one(g, Rank::tensor);
  const std::size_t idx = 2 * g.half() + 1;
  const Vec3 xi = g.wavevector(idx);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) one(tidx(j, k), idx) = xi[j] * xi[k] * Complex(0.3, -0.2);
  Spectrum res = grad_invlap_div(one);
  Spectrum tr_in = trace(one);
  Spectrum tr_out = trace(res);
  CHECK(std::abs(tr_out(0, idx) + tr_in(0, idx)) < 1e-13 * std::abs(tr_in(0, idx)));
}

TEST_CASE("lp norms") {
  auto g = make_grid(8, 2.0);
  Field c(g, Rank::scalar);
  c.fill(-3.0);
  for (double p : {1.5, 2.0, 4.0}) CHECK(lp_norm(c, p) == doctest::Approx(3.0 * std::pow(8.0, 1.0 / p)).epsilon(1e-13));
  CHECK(lp_norm(c, std::numeric_limits<double>::infinity()) == doctest::Approx(3.0));
  CHECK_THROWS_AS(lp_norm(c, 1.0), std::invalid_argument);

  Field s = sin_mode(g, 2);
  CHECK(lp_norm(s, 2.0) == doctest::Approx(std::sqrt(g.volume() / 2)).epsilon(1e-13));

  auto g1 = make_grid(16, 1.0);
  Field r = random_field(g1, Rank::vector, 11);
  CHECK(sobolev_norm(r, 0) == doctest::Approx(lp_norm(r, 2.0)).epsilon(1e-12));
  // unit volume: L^p norms increase with p
  double prev = 0.0;
  for (double p : {1.5, 2.0, 3.0, 6.0, std::numeric_limits<double>::infinity()}) {
    const double v = lp_norm(r, p);
    CHECK(v >= prev);
    prev = v;
  }
  // H¹ weight on a single sine mode is 1 + k²
  Field sm = sin_mode(g, 0);
  const double k = 2 * pi / g.length();
  CHECK(sobolev_norm(sm, 1) == doctest::Approx(std::sqrt(1 + k * k) * lp_norm(sm, 2.0)).epsilon(1e-12));
}
