#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/QR>

#include "plasmon/numerics.hpp"

using namespace plasmon;
using namespace plasmon::numerics;

namespace {

CMatrix random_matrix(std::mt19937& rng, int rows, int cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = cplx(n(rng), n(rng));
  return m;
}

}  // namespace

TEST_CASE("find_roots: z^2 + 1") {
  const auto scan = find_roots([](cplx z) { return z * z + 1.0; }, {-2, 2, -2, 2}, {40, 20}, 1e-12);
  REQUIRE(scan.roots.size() == 2);
  std::vector<cplx> got{scan.roots[0].z, scan.roots[1].z};
  std::sort(got.begin(), got.end(), [](cplx a, cplx b) { return a.imag() < b.imag(); });
  CHECK(std::abs(got[0] - cplx(0, -1)) < 1e-10);
  CHECK(std::abs(got[1] - cplx(0, 1)) < 1e-10);
  for (const auto& r : scan.roots) {
    CHECK(r.converged);
    CHECK(r.residual < 1e-12);
  }
}

TEST_CASE("find_roots: sin on [2,4]x[-1,1]") {
  const auto scan = find_roots([](cplx z) { return std::sin(z); }, {2, 4, -1, 1}, {40, 20}, 1e-12);
  REQUIRE(scan.roots.size() == 1);
  CHECK(std::abs(scan.roots[0].z - kPi) < 1e-10);
}

TEST_CASE("find_roots: polynomial with known roots, sorted by real part") {
  const std::vector<cplx> zs{{-1.3, 0.4}, {0.2, -0.7}, {0.9, 0.9}, {1.6, -0.2}};
  auto p = [&](cplx z) {
    cplx v = 1.0;
    for (auto r : zs) v *= z - r;
    return v;
  };
  const auto scan = find_roots(p, {-2, 2, -1.5, 1.5}, {60, 40}, 1e-12);
  REQUIRE(scan.roots.size() == zs.size());
  for (size_t i = 0; i < zs.size(); ++i) CHECK(std::abs(scan.roots[i].z - zs[i]) < 1e-9);
  for (const auto& r : scan.roots) CHECK(scan.window.contains(r.z));
}

TEST_CASE("find_roots: empty window gives nothing") {
  const auto scan = find_roots([](cplx z) { return z; }, {1, 1, 0, 1}, {10, 10}, 1e-12);
  CHECK(scan.roots.empty());
  CHECK(scan.unconverged.empty());
}

TEST_CASE("eig_dense: examples") {
  CMatrix d(2, 2);
  d << cplx(1, 2), 0, 0, cplx(-3, 0.5);
  auto e = eig_dense(d);
  std::vector<cplx> v{e.values(0), e.values(1)};
  CHECK(std::count_if(v.begin(), v.end(), [](cplx x) { return std::abs(x - cplx(1, 2)) < 1e-14; }) == 1);
  CHECK(std::count_if(v.begin(), v.end(), [](cplx x) { return std::abs(x - cplx(-3, 0.5)) < 1e-14; }) == 1);

  CMatrix m(2, 2);
  m << 3.0, -0.2, -0.2, 3.0;
  const auto c = eig_closed_form(m);
  const auto n = eig_dense(m);
  for (int i = 0; i < 2; ++i) {
    const cplx lam = n.values(i);
    CHECK((std::abs(lam - 3.2) < 1e-12 || std::abs(lam - 2.8) < 1e-12));
    CHECK((std::abs(c.values(0) - lam) < 1e-12 || std::abs(c.values(1) - lam) < 1e-12));
  }
  CHECK_THROWS_AS(eig_dense(CMatrix(2, 3)), ContractViolation);
}

TEST_CASE("eig_dense: trace identity and residuals on 1000 random matrices") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> size(1, 16);
  for (int t = 0; t < 1000; ++t) {
    const int n = size(rng);
    const CMatrix m = random_matrix(rng, n, n);
    const auto e = eig_dense(m);
    const cplx tr = m.trace();
    CHECK(std::abs(e.values.sum() - tr) <= 1e-10 * std::max(1.0, m.norm()));
    for (int i = 0; i < n; ++i) {
      const double res = (m * e.vectors.col(i) - e.values(i) * e.vectors.col(i)).norm();
      CHECK(res <= 1e-8 * m.norm());
    }
  }
}

TEST_CASE("smallest_singular_value") {
  CHECK(smallest_singular_value(CMatrix::Identity(3, 3)) == doctest::Approx(1.0).epsilon(1e-14));
  std::mt19937 rng(3);
  CMatrix m = random_matrix(rng, 6, 3);
  m.col(2) = m.col(0);
  CHECK(smallest_singular_value(m) <= 1e-12 * m.norm());
  CHECK_THROWS_AS(smallest_singular_value(CMatrix(0, 0)), ContractViolation);

  // Unitary invariance.
  for (int t = 0; t < 20; ++t) {
    const CMatrix a = random_matrix(rng, 8, 5);
    const CMatrix u = Eigen::HouseholderQR<CMatrix>(random_matrix(rng, 8, 8)).householderQ();
    const CMatrix v = Eigen::HouseholderQR<CMatrix>(random_matrix(rng, 5, 5)).householderQ();
    const double s = smallest_singular_value(a);
    CHECK(std::abs(smallest_singular_value(u * a * v) - s) < 1e-10 * std::max(1.0, s));
  }
}

TEST_CASE("gauss_legendre integrates polynomials exactly") {
  const auto [x, w] = gauss_legendre(8);
  double s = 0.0, s14 = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    s += w[i];
    s14 += w[i] * std::pow(x[i], 14);
  }
  CHECK(s == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(s14 == doctest::Approx(2.0 / 15.0).epsilon(1e-13));
}

TEST_CASE("integrate_ball: examples") {
  const double a = 3.0;
  CHECK(std::abs(integrate_ball([](const Vec3&) { return cplx(1.0); }, a) - 4.0 / 3.0 * kPi * a * a * a) <
        1e-11 * a * a * a);
  CHECK(std::abs(integrate_ball([](const Vec3& p) { return cplx(p.z()); }, a)) <= 1e-12 * std::pow(a, 4));
  CHECK(std::abs(integrate_ball([](const Vec3& p) { return cplx(p.squaredNorm()); }, 1.0) - 4.0 * kPi / 5.0) <
        1e-13);
  // Shifted centre.
  const Vec3 c(1.0, -2.0, 0.5);
  const cplx shifted = integrate_ball([&](const Vec3& p) { return cplx((p - c).squaredNorm()); }, 1.0, {}, c);
  CHECK(std::abs(shifted - 4.0 * kPi / 5.0) < 1e-12);
}

TEST_CASE("integrate_ball: doubling converges on a smooth integrand") {
  auto g = [](const Vec3& p) { return std::exp(cplx(0.3 * p.x(), 0.2 * p.y() * p.z())); };
  const cplx lo = integrate_ball(g, 2.0, {8, 8, 8});
  const cplx mid = integrate_ball(g, 2.0, {16, 16, 16});
  const cplx hi = integrate_ball(g, 2.0, {32, 32, 32});
  CHECK(std::abs(hi - mid) < 1e-6 * std::abs(hi));
  CHECK(std::abs(hi - mid) <= std::abs(mid - lo) + 1e-15);
}

TEST_CASE("integrate_ball: non-finite sample reports the point") {
  bool threw = false;
  try {
    integrate_ball([](const Vec3& p) { return p.x() > 0.5 ? cplx(NAN, 0) : cplx(1.0); }, 1.0, {4, 4, 4});
  } catch (const NonFiniteSample& e) {
    threw = true;
    CHECK(e.point().x() > 0.5);
  }
  CHECK(threw);
}

TEST_CASE("nelder_mead_2d finds a quadratic minimum") {
  const auto r = nelder_mead_2d([](double x, double y) { return (x - 1.2) * (x - 1.2) + 3 * (y + 0.4) * (y + 0.4); },
                                0.0, 0.0, 0.5, 0.5, 1e-9, 1000);
  CHECK(r.converged);
  CHECK(r.x == doctest::Approx(1.2).epsilon(1e-7));
  CHECK(r.y == doctest::Approx(-0.4).epsilon(1e-7));
}

TEST_CASE("parallel_for is deterministic and propagates exceptions") {
  std::vector<int> out(1000, 0);
  parallel_for(1000, [&](int i) { out[i] = i * i; });
  for (int i = 0; i < 1000; ++i) CHECK(out[i] == i * i);
  CHECK_THROWS_AS(parallel_for(10, [](int i) {
                    if (i == 3) throw Error("boom");
                  }),
                  Error);
}
