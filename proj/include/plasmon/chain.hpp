#pragma once

#include <vector>

#include "plasmon/types.hpp"

namespace plasmon::chain {

/// N identical resonators, nearest-neighbour coupling kappa, edges coupled to
/// the continuum with strength gamma_e.
struct ChainModel {
  int N = 5;
  cplx omega0{0.0, 0.0};
  cplx kappa{0.0, 0.0};
  double gamma_e = 0.0;
};

/// Tridiagonal, symmetric; +(i/2) gamma_e on the two edge diagonal entries.
CMatrix build_heff(const ChainModel& model);

/// w0 + 2 kappa cos(pi k / (N+1)), k = 1..N: the gamma_e = 0 spectrum.
std::vector<cplx> open_chain_spectrum(int N, cplx omega0, cplx kappa);

struct TrajectoryPoint {
  double gamma_e = 0.0;
  std::vector<cplx> eigenvalues;  ///< slot i continues slot i of the previous sample
  bool continuous = true;         ///< false when the matching was ambiguous
};

/// Eigenvalues along a sorted gamma_e sweep, matched by nearest-neighbour continuation.
std::vector<TrajectoryPoint> trajectory(const ChainModel& base, const std::vector<double>& gammas);

/// Fraction of the added width sum(Im l) - N Im w0 carried by the two widest states.
double segregation_metric(const std::vector<cplx>& eigenvalues, cplx omega0);

/// gamma_e maximizing the mean width of the N-2 narrowest states: where the
/// collective widths stop growing and two superradiant states take over.
double transition_marker(const ChainModel& base, const std::vector<double>& gammas);

struct TransmissionValue {
  double product = 0.0;    ///< |(g/k) / prod((w - w_r)/k)|^2
  double resolvent = 0.0;  ///< |g [(w - H)^-1]_{1N}|^2
};

TransmissionValue transmission_both(const ChainModel& model, double omega_e);

/// Product-form value; the resolvent form is computed alongside as a cross-check.
double transmission(const ChainModel& model, double omega_e);

struct TransmissionSpectrum {
  std::vector<double> omega_e;
  std::vector<double> T;
};

TransmissionSpectrum transmission_spectrum(const ChainModel& model,
                                           const std::vector<double>& omega_e);

/// Local maxima whose prominence exceeds `prominence` times the global maximum.
int resonance_count(const TransmissionSpectrum& spectrum, double prominence = 0.05);

}  // namespace plasmon::chain
