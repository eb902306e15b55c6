#include <doctest.h>

#include <cmath>

#include <Eigen/Geometry>

#include "plasmon/sphere_qnm.hpp"

using namespace plasmon;
using namespace plasmon::qnm;

namespace {

const DrudeMaterial kSilver{5.0, 8.9, 0.1};
const Background kVacuum{1.0};

SphereGeometry sphere(double a, Vec3 axis = Vec3::UnitZ(), Vec3 center = Vec3::Zero()) {
  SphereGeometry g;
  g.radius = a;
  g.center = center;
  g.dipole_axis = axis.normalized();
  return g;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("geometry checks") {
  CHECK_THROWS_AS(sphere(-1.0).check(), ContractViolation);
  SphereGeometry g = sphere(1.0);
  g.dipole_axis = Vec3(1.0, 1.0, 0.0);
  CHECK_THROWS_AS(g.check(), ContractViolation);
  const Eigen::Matrix3d f = sphere(1.0, Vec3(1, 2, -2)).frame();
  CHECK((f.transpose() * f - Eigen::Matrix3d::Identity()).norm() < 1e-14);
  CHECK((f.col(2) - Vec3(1, 2, -2).normalized()).norm() < 1e-14);
  CHECK(f.determinant() == doctest::Approx(1.0));
  CHECK((sphere(1.0, -Vec3::UnitZ()).frame().col(2) + Vec3::UnitZ()).norm() < 1e-15);
}

TEST_CASE("quasi-static limit") {
  const DrudeMaterial ideal{1.0, 8.9, 0.0};
  const auto m = plasmon_mode(1, sphere(1.0), ideal, kVacuum);
  CHECK(std::abs(m.omega.real() - 8.9 / std::sqrt(3.0)) < 0.02 * 8.9 / std::sqrt(3.0));
  const double rel_g = characteristic_relative_residual(1, 8.9 / std::sqrt(3.0), 0.01, ideal, kVacuum);
  CHECK(rel_g < 1e-3);
}

TEST_CASE("silver dipole roots") {
  const auto s10 = solve_modes(1, sphere(10.0), kSilver, kVacuum, {2.5, 4.5, 0.0, 0.6});
  REQUIRE(s10.modes.size() == 1);
  CHECK(rel(s10.modes[0].omega, cplx(3.3468, 0.0519)) < 1e-4);
  CHECK(s10.modes[0].residual < 1e-8);
  CHECK(s10.modes[0].quotient_residual < 1e-8);
  CHECK(s10.modes[0].physical());

  const auto m40 = plasmon_mode(1, sphere(40.0), kSilver, kVacuum);
  CHECK(std::abs(m40.omega.real() - 3.1172) < 1e-3 * 3.1172);
  CHECK(std::abs(m40.omega.imag() - 0.1910) < 1e-2 * 0.1910);
  CHECK(m40.radiative_half_width() == doctest::Approx(m40.omega.imag() - 0.05));

  const auto m50 = plasmon_mode(1, sphere(50.0), kSilver, kVacuum);
  CHECK(std::abs(m50.omega.real() - 3.0) < 0.05 * 3.0);
}

TEST_CASE("no spurious roots far from the real axis") {
  const double centre = std::abs(characteristic_residual(1, cplx(3.0, 0.3), 10.0, kSilver, kVacuum));
  CHECK(std::abs(characteristic_residual(1, cplx(3.0, 2.6), 10.0, kSilver, kVacuum)) > centre);
  CHECK(characteristic_relative_residual(1, cplx(3.0, 2.6), 10.0, kSilver, kVacuum) > 1e-3);
}

TEST_CASE("Re(w) decreases with radius for l = 1..4") {
  for (int l = 1; l <= 4; ++l) {
    double prev = std::numeric_limits<double>::infinity();
    for (double a = 10.0; a <= 100.0; a += 15.0) {
      const auto m = plasmon_mode(l, sphere(a), kSilver, kVacuum);
      CHECK_MESSAGE(m.omega.real() < prev, "l = " << l << ", a = " << a);
      prev = m.omega.real();
    }
  }
}

TEST_CASE("normalization") {
  for (double a : {10.0, 40.0}) {
    const auto m = normalize(plasmon_mode(1, sphere(a), kSilver, kVacuum));
    CHECK(m.normalized);
    CHECK(normalization_residual(m) < 1e-8);
    CHECK((m.zeta.real() > 0.0 || (m.zeta.real() == 0.0 && m.zeta.imag() >= 0.0)));

    // I is proportional to zeta^2: the functional is stored without it.
    const cplx unit = normalization_functional(m, Region::interior, a) - normalization_functional(m, Region::exterior, a);
    CHECK(std::abs(m.zeta * m.zeta * unit - 1.0) < 1e-8);
    CHECK(std::abs((2.0 * m.zeta) * (2.0 * m.zeta) * unit - 4.0) < 4e-8);
  }
  SphereMode raw = plasmon_mode(1, sphere(10.0), kSilver, kVacuum);
  CHECK_FALSE(raw.normalized);
}

TEST_CASE("volume plus surface term is R-independent and equals one") {
  const auto m = normalize(plasmon_mode(1, sphere(10.0), kSilver, kVacuum));
  std::vector<cplx> totals;
  for (double f : {5.0, 10.0, 20.0}) {
    const double R = f * 10.0;
    const cplx v = volume_integral(m, R, {48, 32, 8});
    totals.push_back(v + surface_term_exact(m, R));
  }
  for (const auto& t : totals) CHECK(std::abs(t - totals[0]) < 1e-5 * std::abs(totals[0]));
  CHECK(std::abs(totals[0] - 1.0) < 1e-5);
}

TEST_CASE("tangential fields are continuous at r = a") {
  const auto m = normalize(plasmon_mode(1, sphere(10.0, Vec3(0.3, -0.2, 1.0), Vec3(1, 2, 3)), kSilver, kVacuum));
  const Eigen::Matrix3d F = m.geometry.frame();
  for (double th : {0.3, 1.2, 2.5})
    for (double ph : {0.0, 1.0, 4.0}) {
      const Vec3 dir(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
      const Vec3 p = m.geometry.center + 10.0 * (F * dir);
      const auto in = eval_field(m, p, Region::interior);
      const auto out = eval_field(m, p, Region::exterior);
      for (int c = 1; c <= 2; ++c) {
        CHECK(std::abs(in.E_spherical(c) - out.E_spherical(c)) <= 1e-6 * in.E.norm());
        CHECK(std::abs(in.H_spherical(c) - out.H_spherical(c)) <= 1e-6 * in.H.norm());
      }
      CHECK(std::abs(in.H_spherical(0)) == 0.0);
    }
}

TEST_CASE("radiation pattern: torus far, axial maximum near") {
  const auto m = normalize(plasmon_mode(1, sphere(10.0), kSilver, kVacuum));
  const double far = 300.0;
  const double e_eq = eval_field(m, Vec3(far, 0, 0)).E.norm();
  const double e_ax = eval_field(m, Vec3(0, 0, far)).E.norm();
  CHECK(e_ax < 0.5 * e_eq);
  const double near = 10.0 * (1.0 + 1e-9);
  CHECK(eval_field(m, Vec3(0, 0, near)).E.norm() > eval_field(m, Vec3(near, 0, 0)).E.norm());
}

TEST_CASE("rotational covariance") {
  const auto base = normalize(plasmon_mode(1, sphere(10.0), kSilver, kVacuum));
  const Eigen::Matrix3d R = Eigen::AngleAxisd(0.9, Vec3(1, -2, 0.5).normalized()).toRotationMatrix();
  SphereMode rotated = base;
  rotated.geometry.dipole_axis = R * Vec3::UnitZ();
  for (const Vec3& p : {Vec3(3, 4, 5), Vec3(20, -1, 7), Vec3(-40, 60, 10), Vec3(0.1, 0.2, -0.3)}) {
    const auto a = eval_field(base, p);
    const auto b = eval_field(rotated, R * p);
    CHECK(std::abs(a.E.norm() - b.E.norm()) <= 1e-10 * a.E.norm());
    CHECK(std::abs(a.H.norm() - b.H.norm()) <= 1e-10 * a.H.norm());
  }
}

TEST_CASE("field at the centre") {
  const auto m = normalize(plasmon_mode(1, sphere(10.0), kSilver, kVacuum));
  const auto c = eval_field(m, Vec3::Zero());
  CHECK(std::isfinite(c.E.norm()));
  CHECK(c.E.norm() > 0.0);
  CHECK_THROWS_AS(eval_field(m, Vec3::Zero(), Region::exterior), SingularityError);
}
