#include <doctest.h>

#include <cmath>

#include "plasmon/coupling.hpp"

using namespace plasmon;
using namespace plasmon::coupling;

namespace {

const qnm::SphereMode& silver10() {
  static const qnm::SphereMode m = [] {
    qnm::SphereGeometry g;
    g.radius = 10.0;
    return qnm::normalize(qnm::plasmon_mode(1, g, {5.0, 8.9, 0.1}, {1.0}));
  }();
  return m;
}

}  // namespace

TEST_CASE("place_dimer and overlap") {
  const auto [m1, m2] = place_dimer(silver10(), {25.0, Orientation::vertical});
  CHECK((m2.geometry.center - Vec3(25.0, 0, 0)).norm() == 0.0);
  CHECK(m1.geometry.dipole_axis == Vec3::UnitZ());
  const auto [h1, h2] = place_dimer(silver10(), {25.0, Orientation::horizontal});
  CHECK(h2.geometry.dipole_axis == Vec3::UnitX());
  CHECK_THROWS_AS(kappa(silver10(), {19.0, Orientation::horizontal}), GeometryError);
  CHECK_NOTHROW(kappa(silver10(), {20.0, Orientation::horizontal}, {{8, 8, 8}, false}));

  qnm::SphereMode raw = silver10();
  raw.normalized = false;
  raw.zeta = 0.0;
  CHECK_THROWS_AS(kappa(raw, {30.0, Orientation::horizontal}), ContractViolation);
}

TEST_CASE("kappa reciprocity") {
  const auto [m1, m2] = place_dimer(silver10(), {25.0, Orientation::horizontal});
  const KappaOptions opts{{24, 24, 24}, false};
  const cplx k12 = kappa_between(m1, m2, opts).kappa;
  const cplx k21 = kappa_between(m2, m1, opts).kappa;
  CHECK(std::abs(k12 - k21) < 1e-6 * std::abs(k12));
}

TEST_CASE("perpendicular dipoles do not couple") {
  auto [m1, m2] = place_dimer(silver10(), {25.0, Orientation::horizontal});
  const cplx kh = kappa_between(m1, m2).kappa;
  m2.geometry.dipole_axis = Vec3::UnitZ();
  const cplx kp = kappa_between(m1, m2).kappa;
  CHECK(std::abs(kp) <= 1e-4 * std::abs(kh));
}

TEST_CASE("|kappa| decays with distance, horizontal beats vertical") {
  const std::vector<double> da{2.0, 2.5, 3.0, 4.0, 6.0, 10.0};
  const KappaOptions opts{{16, 16, 16}, false};
  double prev_h = INFINITY, prev_v = INFINITY;
  for (double x : da) {
    const double h = std::abs(kappa(silver10(), {x * 10.0, Orientation::horizontal}, opts).kappa);
    const double v = std::abs(kappa(silver10(), {x * 10.0, Orientation::vertical}, opts).kappa);
    CHECK(h < prev_h);
    CHECK(v < prev_v);
    if (x <= 3.0) CHECK(h > v);
    prev_h = h;
    prev_v = v;
  }
}

TEST_CASE("doubling check converges at the default orders") {
  const auto r = kappa(silver10(), {30.0, Orientation::horizontal});
  CHECK(r.converged);
  CHECK(r.relative_change < 1e-6);
}

TEST_CASE("dimer model structure") {
  const auto dm = build_dimer(silver10(), {25.0, Orientation::horizontal}, {{16, 16, 16}, false});
  const cplx w0 = silver10().omega;
  CHECK(dm.matrix(0, 0) == w0);
  CHECK(dm.matrix(0, 1) == dm.matrix(1, 0));
  CHECK(std::abs(dm.eigenvalues(0) - (w0 + dm.kappa)) < 1e-12);
  CHECK(std::abs(dm.eigenvalues(1) - (w0 - dm.kappa)) < 1e-12);
  CHECK(std::abs(dm.eigvecs(0, 0) - dm.eigvecs(1, 0)) < 1e-10);
  CHECK(std::abs(dm.eigvecs(0, 1) + dm.eigvecs(1, 1)) < 1e-10);

  // Far apart the pair collapses onto the single-sphere mode.
  const auto touching = kappa(silver10(), {20.0, Orientation::horizontal}).kappa;
  const auto far = build_dimer(silver10(), {120.0, Orientation::horizontal});
  CHECK(std::abs(far.eigenvalues(0) - w0) < 0.05 * std::abs(touching));
  CHECK(std::abs(far.eigenvalues(1) - w0) < 0.05 * std::abs(touching));
}

TEST_CASE("split and reconstruct") {
  Eigen::Matrix2cd m;
  m << cplx(3.0, 0.05), cplx(-0.2, 0.01), cplx(-0.2, 0.01), cplx(3.0, 0.05);
  const auto s = split(m);
  CHECK(s.H0(0, 0) == doctest::Approx(3.0));
  CHECK(s.H0(0, 1) == doctest::Approx(-0.2));
  CHECK(s.W(0, 0) == doctest::Approx(0.1));
  CHECK(s.W(0, 1) == doctest::Approx(0.02));
  CHECK((reconstruct(s) - m).norm() < 1e-14);

  Eigen::Matrix2cd real;
  real << 3.0, -0.2, -0.2, 3.0;
  CHECK(split(real).W.norm() == 0.0);

  Eigen::Matrix2cd bad = m;
  bad(1, 0) = 0.3;
  CHECK_THROWS_AS(split(bad), ContractViolation);
}

TEST_CASE("superradiance metric") {
  Eigen::Matrix2d dark;
  dark << 0.1, 0.1, 0.1, 0.1;
  CHECK(superradiance_metric(dark).metric < 1e-15);
  CHECK(superradiance_metric(0.1 * Eigen::Matrix2d::Identity()).metric == doctest::Approx(1.0));
  const auto z = superradiance_metric(Eigen::Matrix2d::Zero());
  CHECK(z.zero_matrix);
  CHECK(z.metric == 0.0);

  // At the dark point gamma0 = 2 kappa'' one eigenvalue is real.
  const cplx w0(3.0, 0.05), k(-0.2, 0.05);
  Eigen::Matrix2cd m;
  m << w0, k, k, w0;
  CHECK(superradiance_metric(split(m).W).metric < 1e-15);
  CHECK(std::abs((w0 - k).imag()) < 1e-15);
}

TEST_CASE("Rabi oscillation") {
  const cplx k(-0.25, 0.003);
  const double wr = 2.0 * std::abs(k);
  CHECK(rabi_probability(k, 0.0) == 1.0);
  CHECK(rabi_probability(k, kPi / wr) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(rabi_probability(k, 2 * kPi / wr) == doctest::Approx(1.0));
  CHECK(rabi_probability(0.0, 5.0) == 1.0);
  for (double t = 0; t < 50; t += 0.7) {
    const double p = rabi_probability(k, t);
    CHECK((p >= 0.0 && p <= 1.0));
  }
  CHECK_THROWS_AS(rabi_probability(k, -1.0), ContractViolation);
}
