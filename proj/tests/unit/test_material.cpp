#include <doctest.h>

#include <cmath>
#include <fstream>

#include "plasmon/material.hpp"

using namespace plasmon;
using namespace plasmon::material;

TEST_CASE("eps_in examples") {
  const DrudeMaterial ideal{1.0, 8.9, 0.0};
  CHECK(std::abs(eps_in(ideal, 8.9)) < 1e-15);
  CHECK(std::abs(eps_in(ideal, 8.9 / std::sqrt(3.0)) - cplx(-2.0)) < 1e-13);

  // Silver at 3 eV, against the formula written out by hand.
  const DrudeMaterial ag{5.0, 8.9, 0.1};
  const cplx w = 3.0;
  const cplx expected = 5.0 - 8.9 * 8.9 / (w * w - cplx(0, 1) * w * 0.1);
  CHECK(std::abs(eps_in(ag, w) - expected) < 1e-14);
  CHECK(std::abs(eps_in(ag, w) - cplx(-3.791342952275251, -0.29304476507584176)) < 1e-13);
  CHECK_THROWS_AS(eps_in(ag, 0.0), SingularityError);
}

TEST_CASE("reality of the time-domain response: eps(-w*) = eps(w)*") {
  for (const DrudeMaterial& m : {DrudeMaterial{2.0, 9.0, 0.0}, DrudeMaterial{5.0, 8.9, 0.1}})
    for (cplx w : {cplx(1.0, 0.3), cplx(4.0, -0.2), cplx(0.5, 2.0)})
      CHECK(std::abs(eps_in(m, -std::conj(w)) - std::conj(eps_in(m, w))) < 1e-13 * std::abs(eps_in(m, w)));
  // Real frequencies in the lossless case give a real permittivity.
  CHECK(eps_in(DrudeMaterial{2.0, 9.0, 0.0}, 3.0).imag() == 0.0);
}

TEST_CASE("sigma: closed form against a complex-step derivative of w^2 eps") {
  CHECK(sigma(Background{1.0}, cplx(3.0, 0.1)) == cplx(1.0));
  const DrudeMaterial lossless{3.0, 8.9, 0.0};
  CHECK(std::abs(sigma(lossless, cplx(2.0, 0.4)) - cplx(3.0)) < 1e-13);

  const DrudeMaterial ag{5.0, 8.9, 0.1};
  // g(w) = w^2 eps(w) is holomorphic; differentiate along real and imaginary
  // directions with a small central difference in extended precision.
  for (cplx w : {cplx(3.0, 0.0), cplx(3.3468, 0.0519), cplx(2.1, 0.8)}) {
    auto g = [&](std::complex<long double> z) {
      const std::complex<long double> e =
          (long double)ag.eps_inf -
          (long double)(ag.omega_p * ag.omega_p) / (z * z - std::complex<long double>(0, 1) * z * (long double)ag.gamma_s);
      return z * z * e;
    };
    const long double h = 1e-7L;
    const std::complex<long double> wl(w.real(), w.imag());
    const auto d = (g(wl + h) - g(wl - h)) / (2.0L * h);
    const cplx oracle(static_cast<double>((d / (2.0L * wl)).real()), static_cast<double>((d / (2.0L * wl)).imag()));
    CHECK(std::abs(sigma(ag, w) - oracle) < 1e-8 * std::abs(oracle));
  }
}

TEST_CASE("wavenumbers") {
  const auto k = wavenumbers(DrudeMaterial{5.0, 8.9, 0.1}, Background{1.0}, 3.0);
  CHECK(k.k_out.real() == doctest::Approx(3.0 / kHbarC).epsilon(1e-14));
  CHECK(k.k_out.real() == doctest::Approx(0.015203).epsilon(1e-4));

  const cplx kneg = wavenumber(cplx(-2.0, 0.0), 1.0);
  CHECK(std::abs(kneg.real()) < 1e-18);
  CHECK(kneg.imag() > 0.0);
  const cplx kneg0 = wavenumber(cplx(-2.0, -0.0), 1.0);
  CHECK(kneg0.imag() > 0.0);

  const DrudeMaterial ag{5.0, 8.9, 0.1};
  const cplx w0(3.3468, 0.0519);
  const auto kk = wavenumbers(ag, Background{1.0}, w0);
  CHECK(std::abs(kk.k_in.imag()) > std::abs(kk.k_in.real()));
  CHECK(kk.k_in.imag() > 0.0);
  CHECK(std::abs(kk.k_in * kk.k_in - (w0 / kHbarC) * (w0 / kHbarC) * eps_in(ag, w0)) <
        1e-14 * std::abs(kk.k_in * kk.k_in));
}

TEST_CASE("checks and presets") {
  CHECK(check(DrudeMaterial{5.0, 8.9, 0.1}).empty());
  CHECK(DrudeMaterial{5.0, 8.9, 2.0}.high_damping());
  const auto bad = check(DrudeMaterial{0.5, -1.0, 0.0});
  CHECK(bad.size() >= 2);
  const auto warn = check(Background{0.8});
  REQUIRE(warn.size() == 1);
  CHECK(warn[0].rfind("warning:", 0) == 0);
  CHECK_FALSE(check(Background{-1.0}).empty());

  const auto builtin = builtin_presets();
  CHECK(*find_preset(builtin, "silver") == DrudeMaterial{5.0, 8.9, 0.1});
  CHECK(*find_preset(builtin, "darkmode") == DrudeMaterial{1.0, 10.918, 0.0});
  CHECK_FALSE(find_preset(builtin, "gold").has_value());

  const auto file = load_presets(std::string(PLASMON_DATA_DIR) + "/materials.json");
  CHECK(file == builtin);
  CHECK_THROWS_AS(load_presets("/nonexistent/presets.json"), ContractViolation);
}
