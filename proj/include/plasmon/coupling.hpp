#pragma once

#include <vector>

#include "plasmon/numerics.hpp"
#include "plasmon/sphere_qnm.hpp"

namespace plasmon::coupling {

using qnm::SphereMode;

/// horizontal: both dipole axes along the separation line (x). vertical: both along z.
enum class Orientation { horizontal, vertical };

struct DimerGeometry {
  double d = 20.0;  ///< centre-to-centre, nm
  Orientation orientation = Orientation::horizontal;
};

struct KappaOptions {
  numerics::BallOrders orders{24, 24, 24};
  bool check_convergence = true;       ///< repeat with doubled orders
  double convergence_tol = 1e-6;       ///< relative change accepted by the doubling check
  bool background_contrast = false;    ///< weight (eps_1 - eps_out) instead of (eps_1 - 1)
};

struct KappaResult {
  cplx kappa{0.0, 0.0};
  double relative_change = 0.0;  ///< |kappa(2n) - kappa(n)| / |kappa(2n)|, 0 when unchecked
  bool converged = true;
};

/// Copies of the mode on sphere 1 (origin) and sphere 2 (d x-hat), axes set by the orientation.
std::pair<SphereMode, SphereMode> place_dimer(const SphereMode& mode, const DimerGeometry& geom);

/// -(w_1/2) int_{V_1} (eps_1 - 1) E_1 . E_2 d^3r, bilinear. E_2 is mode 2's exterior field.
KappaResult kappa_between(const SphereMode& mode1, const SphereMode& mode2,
                          const KappaOptions& opts = {});

KappaResult kappa(const SphereMode& mode, const DimerGeometry& geom, const KappaOptions& opts = {});

struct DimerModel {
  SphereMode mode;
  DimerGeometry geometry;
  cplx kappa{0.0, 0.0};
  Eigen::Matrix2cd matrix;
  Eigen::Vector2cd eigenvalues;  ///< (w0 + kappa, w0 - kappa)
  Eigen::Matrix2cd eigvecs;      ///< columns: symmetric, antisymmetric
  double kappa_relative_change = 0.0;
  bool kappa_converged = true;
};

/// Builds the 2x2 model; eigenpairs come from the dense solver and are
/// matched to the closed form w0 +- kappa.
DimerModel build_dimer(const SphereMode& mode, const DimerGeometry& geom, cplx kappa);
DimerModel build_dimer(const SphereMode& mode, const DimerGeometry& geom,
                       const KappaOptions& opts = {});

struct Split {
  Eigen::Matrix2d H0;  ///< Hermitian part [[eta0, kappa'], [kappa', eta0]]
  Eigen::Matrix2d W;   ///< anti-Hermitian part [[gamma0, 2 kappa''], [2 kappa'', gamma0]]
};

/// For M = [[w0, k], [k, w0]] under e^{+iwt}: conj(M) = H0 - (i/2) W, so
/// gamma0 = 2 Im w0 and kappa'' = Im k.
Split split(const Eigen::Matrix2cd& m);
Eigen::Matrix2cd reconstruct(const Split& s);

struct Superradiance {
  double metric = 0.0;  ///< sigma_min / sigma_max of W
  bool zero_matrix = false;
};

Superradiance superradiance_metric(const Eigen::Matrix2d& W);

/// 1 - sin^2(|kappa| t), t in hbar/eV.
double rabi_probability(cplx kappa, double t);

/// Dimer models over a list of d/a values (each sample independent).
std::vector<DimerModel> dimer_sweep(const SphereMode& mode, Orientation orientation,
                                    const std::vector<double>& d_over_a,
                                    const KappaOptions& opts = {});

}  // namespace plasmon::coupling
