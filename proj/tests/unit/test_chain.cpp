#include <doctest.h>

#include <cmath>
#include <random>

#include "plasmon/chain.hpp"
#include "plasmon/numerics.hpp"

using namespace plasmon;
using namespace plasmon::chain;

namespace {

const cplx kW0(3.3468, 0.0519);
const cplx kK(-0.2459, 0.0029);

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
  return v;
}

}  // namespace

TEST_CASE("build_heff structure") {
  const auto h2 = build_heff({2, kW0, kK, 0.0});
  CHECK(h2(0, 0) == kW0);
  CHECK(h2(0, 1) == kK);
  const ChainModel m{5, kW0, kK, 0.7};
  const auto h = build_heff(m);
  CHECK(std::abs(h.trace() - (5.0 * kW0 + cplx(0, 0.7))) < 1e-15);
  CHECK(h(0, 0) == kW0 + cplx(0, 0.35));
  CHECK(h(4, 4) == kW0 + cplx(0, 0.35));
  CHECK(h(0, 2) == cplx(0.0));
  CHECK((h - h.transpose()).norm() == 0.0);
  CHECK_THROWS_AS(build_heff({1, kW0, kK, 0.0}), ContractViolation);
  CHECK_THROWS_AS(build_heff({5, kW0, kK, -1.0}), ContractViolation);
}

TEST_CASE("open chain closed form and pairing") {
  const auto closed = open_chain_spectrum(5, kW0, kK);
  const auto e = numerics::eig_dense(build_heff({5, kW0, kK, 0.0}));
  for (auto c : closed) {
    double best = INFINITY;
    for (int i = 0; i < 5; ++i) best = std::min(best, std::abs(e.values(i) - c));
    CHECK(best < 1e-12);
  }
  const auto even = numerics::eig_dense(build_heff({6, kW0, kK, 0.0}));
  for (int i = 0; i < 6; ++i) {
    double best = INFINITY;
    for (int j = 0; j < 6; ++j) best = std::min(best, std::abs((even.values(i) - kW0) + (even.values(j) - kW0)));
    CHECK(best < 1e-10);
  }
}

TEST_CASE("trajectory: trace identity and continuity") {
  const auto gammas = log_grid(0.01, 10.0, 60);
  const auto traj = trajectory({5, kW0, kK, 0.0}, gammas);
  REQUIRE(traj.size() == gammas.size());
  for (const auto& p : traj) {
    cplx s = 0.0;
    for (auto l : p.eigenvalues) s += l;
    CHECK(std::abs(s - (5.0 * kW0 + cplx(0, p.gamma_e))) < 1e-10);
  }
  const double seg = segregation_metric(traj.back().eigenvalues, kW0);
  CHECK(seg > 0.9);
  CHECK_THROWS_AS(trajectory({5, kW0, kK, 0.0}, {1.0, 0.5}), ContractViolation);
}

TEST_CASE("segregation grows with gamma_e past the transition") {
  const auto gammas = log_grid(1.0, 10.0, 30);
  const auto traj = trajectory({5, kW0, kK, 0.0}, gammas);
  for (size_t i = 1; i < traj.size(); ++i)
    CHECK(segregation_metric(traj[i].eigenvalues, kW0) >= segregation_metric(traj[i - 1].eigenvalues, kW0) - 1e-12);
}

TEST_CASE("transmission: product form equals resolvent form on random models") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    ChainModel m;
    m.N = 2 + static_cast<int>(u(rng) * 8);
    m.omega0 = cplx(2.0 + 2.0 * u(rng), 0.3 * u(rng));
    m.kappa = cplx(-0.5 + u(rng), 0.1 * (u(rng) - 0.5));
    if (std::abs(m.kappa) < 1e-3) continue;
    m.gamma_e = 3.0 * u(rng);
    const double we = m.omega0.real() + 4.0 * (u(rng) - 0.5);
    const auto v = transmission_both(m, we);
    CHECK(std::abs(v.product - v.resolvent) <= 1e-10 * std::max(v.resolvent, 1e-300));
  }
  const ChainModel m{5, kW0, kK, 0.55};
  const auto spec = transmission_spectrum(m, grid(2.8, 3.9, 2000));
  for (size_t i = 0; i < spec.T.size(); ++i) {
    const auto v = transmission_both(m, spec.omega_e[i]);
    CHECK(std::abs(v.product - v.resolvent) <= 1e-10 * v.resolvent);
    CHECK(spec.T[i] >= 0.0);
  }
}

TEST_CASE("transmission tails") {
  const ChainModel m{5, kW0, kK, 0.03};
  const auto spec = transmission_spectrum(m, grid(2.8, 3.9, 2000));
  const double peak = *std::max_element(spec.T.begin(), spec.T.end());
  CHECK(transmission(m, kW0.real() + 100.0 * std::abs(kK)) < 1e-6 * peak);
}

TEST_CASE("resonance_count") {
  TransmissionSpectrum s;
  s.omega_e = grid(0.0, 10.0, 2001);
  for (double x : s.omega_e)
    s.T.push_back(std::exp(-(x - 2) * (x - 2) * 20) + 0.5 * std::exp(-(x - 5) * (x - 5) * 20) +
                  0.02 * std::exp(-(x - 8) * (x - 8) * 20));
  CHECK(resonance_count(s, 0.05) == 2);
  CHECK(resonance_count(s, 0.01) == 3);

  const auto strong = transmission_spectrum({5, kW0, kK, 10.0}, grid(2.8, 3.9, 2000));
  CHECK(resonance_count(strong) == 3);
}

TEST_CASE("peak transmission is largest at intermediate coupling") {
  auto tmax = [](double g) {
    const auto s = transmission_spectrum({5, kW0, kK, g}, grid(2.8, 3.9, 2000));
    return *std::max_element(s.T.begin(), s.T.end());
  };
  const double mid = tmax(0.55);
  CHECK(mid > tmax(10.0));
  CHECK(mid > tmax(0.03));
}
