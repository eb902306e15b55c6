#include "plasmon/chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include <Eigen/LU>

#include "plasmon/numerics.hpp"

namespace plasmon::chain {

namespace {

void check_model(const ChainModel& m) {
  if (m.N < 2) throw ContractViolation("chain: N must be >= 2");
  if (!(m.gamma_e >= 0.0)) throw ContractViolation("chain: gamma_e must be >= 0");
  if (!is_finite(m.omega0) || !is_finite(m.kappa)) throw ContractViolation("chain: non-finite parameters");
}

std::vector<cplx> eigenvalues_of(const ChainModel& m) {
  const auto dec = numerics::eig_dense(build_heff(m));
  return std::vector<cplx>(dec.values.data(), dec.values.data() + dec.values.size());
}

}  // namespace

CMatrix build_heff(const ChainModel& m) {
  check_model(m);
  CMatrix H = CMatrix::Zero(m.N, m.N);
  for (int i = 0; i < m.N; ++i) H(i, i) = m.omega0;
  for (int i = 0; i + 1 < m.N; ++i) {
    H(i, i + 1) = m.kappa;
    H(i + 1, i) = m.kappa;
  }
  H(0, 0) += 0.5 * kI * m.gamma_e;
  H(m.N - 1, m.N - 1) += 0.5 * kI * m.gamma_e;
  return H;
}

std::vector<cplx> open_chain_spectrum(int N, cplx omega0, cplx kappa) {
  if (N < 1) throw ContractViolation("open_chain_spectrum: N must be >= 1");
  std::vector<cplx> out(N);
  for (int k = 1; k <= N; ++k) out[k - 1] = omega0 + 2.0 * kappa * std::cos(kPi * k / (N + 1.0));
  return out;
}

std::vector<TrajectoryPoint> trajectory(const ChainModel& base, const std::vector<double>& gammas) {
  if (!std::is_sorted(gammas.begin(), gammas.end())) {
    throw ContractViolation("trajectory: gamma_e values must be sorted");
  }
  std::vector<TrajectoryPoint> out;
  out.reserve(gammas.size());
  for (const double g : gammas) {
    ChainModel m = base;
    m.gamma_e = g;
    TrajectoryPoint pt;
    pt.gamma_e = g;
    auto current = eigenvalues_of(m);
    if (out.empty()) {
      std::sort(current.begin(), current.end(),
                [](cplx a, cplx b) { return a.real() < b.real(); });
      pt.eigenvalues = current;
      out.push_back(pt);
      continue;
    }
    const auto& prev = out.back().eigenvalues;
    const size_t n = prev.size();
    // Greedy assignment by globally smallest distance.
    std::vector<std::tuple<double, size_t, size_t>> pairs;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) pairs.emplace_back(std::abs(prev[i] - current[j]), i, j);
    std::sort(pairs.begin(), pairs.end());
    std::vector<int> slot_of(n, -1);
    std::vector<bool> used(n, false);
    for (const auto& [dist, i, j] : pairs) {
      if (slot_of[i] >= 0 || used[j]) continue;
      slot_of[i] = static_cast<int>(j);
      used[j] = true;
    }
    pt.eigenvalues.resize(n);
    for (size_t i = 0; i < n; ++i) {
      pt.eigenvalues[i] = current[slot_of[i]];
      // Ambiguous when another candidate is nearly as close as the chosen one.
      const double best = std::abs(prev[i] - current[slot_of[i]]);
      for (size_t j = 0; j < n; ++j) {
        if (static_cast<int>(j) == slot_of[i]) continue;
        const double other = std::abs(prev[i] - current[j]);
        if (best > 0.0 && other < 1.1 * best) pt.continuous = false;
      }
    }
    out.push_back(pt);
  }
  return out;
}

double segregation_metric(const std::vector<cplx>& eigenvalues, cplx omega0) {
  std::vector<double> added;
  added.reserve(eigenvalues.size());
  for (const auto& l : eigenvalues) added.push_back(l.imag() - omega0.imag());
  const double total = std::accumulate(added.begin(), added.end(), 0.0);
  if (!(total > 0.0)) return 0.0;
  std::sort(added.begin(), added.end(), std::greater<>());
  const double top = added[0] + (added.size() > 1 ? added[1] : 0.0);
  return top / total;
}

double transition_marker(const ChainModel& base, const std::vector<double>& gammas) {
  if (gammas.empty()) throw ContractViolation("transition_marker: empty sweep");
  if (base.N < 3) throw ContractViolation("transition_marker: needs N >= 3");
  double best_g = gammas.front();
  double best = -std::numeric_limits<double>::infinity();
  for (const double g : gammas) {
    ChainModel m = base;
    m.gamma_e = g;
    auto ev = eigenvalues_of(m);
    std::vector<double> widths;
    for (const auto& l : ev) widths.push_back(l.imag());
    std::sort(widths.begin(), widths.end());
    const double mean =
        std::accumulate(widths.begin(), widths.begin() + (m.N - 2), 0.0) / (m.N - 2);
    if (mean > best) {
      best = mean;
      best_g = g;
    }
  }
  return best_g;
}

TransmissionValue transmission_both(const ChainModel& m, double omega_e) {
  check_model(m);
  if (!std::isfinite(omega_e)) throw ContractViolation("transmission: omega_e must be finite");
  if (m.kappa == 0.0) throw SingularityError("transmission: kappa = 0 disconnects the chain");
  const CMatrix H = build_heff(m);
  const auto ev = numerics::eig_dense(H).values;

  TransmissionValue out;
  cplx prod = 1.0;
  for (Eigen::Index r = 0; r < ev.size(); ++r) {
    const cplx gap = omega_e - ev(r);
    if (gap == 0.0) {
      if (m.gamma_e == 0.0) throw SingularityError("transmission: omega_e hits a real eigenvalue");
    }
    prod *= gap / m.kappa;
  }
  out.product = std::norm((m.gamma_e / m.kappa) / prod);

  const CMatrix A = cplx(omega_e) * CMatrix::Identity(m.N, m.N) - H;
  Eigen::PartialPivLU<CMatrix> lu(A);
  if (std::abs(lu.determinant()) == 0.0) {
    throw SingularityError("transmission: singular resolvent");
  }
  CVector e_last = CVector::Zero(m.N);
  e_last(m.N - 1) = 1.0;
  const CVector col = lu.solve(e_last);
  out.resolvent = std::norm(m.gamma_e * col(0));
  return out;
}

double transmission(const ChainModel& model, double omega_e) {
  return transmission_both(model, omega_e).product;
}

TransmissionSpectrum transmission_spectrum(const ChainModel& model,
                                           const std::vector<double>& omega_e) {
  TransmissionSpectrum s;
  s.omega_e = omega_e;
  s.T.assign(omega_e.size(), 0.0);
  numerics::parallel_for(static_cast<int>(omega_e.size()),
                         [&](int i) { s.T[i] = transmission(model, omega_e[i]); });
  return s;
}

int resonance_count(const TransmissionSpectrum& spectrum, double prominence) {
  const auto& t = spectrum.T;
  const size_t n = t.size();
  if (n < 3) return 0;
  const double tmax = *std::max_element(t.begin(), t.end());
  if (!(tmax > 0.0)) return 0;
  int count = 0;
  for (size_t i = 1; i + 1 < n; ++i) {
    if (!(t[i] > t[i - 1] && t[i] >= t[i + 1])) continue;
    // Prominence: height above the higher of the two bases, each base being the
    // lowest point before a higher sample (or the edge) on that side.
    double left_min = t[i];
    for (size_t j = i; j-- > 0;) {
      if (t[j] > t[i]) break;
      left_min = std::min(left_min, t[j]);
    }
    double right_min = t[i];
    for (size_t j = i + 1; j < n; ++j) {
      if (t[j] > t[i]) break;
      right_min = std::min(right_min, t[j]);
    }
    const double prom = t[i] - std::max(left_min, right_min);
    if (prom > prominence * tmax) ++count;
  }
  return count;
}

}  // namespace plasmon::chain
