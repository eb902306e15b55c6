#pragma once

#include <optional>
#include <vector>

#include "plasmon/material.hpp"
#include "plasmon/numerics.hpp"
#include "plasmon/special.hpp"
#include "plasmon/types.hpp"

namespace plasmon::qnm {

using material::Background;
using material::DrudeMaterial;
using special::AngularIndex;

struct SphereGeometry {
  double radius = 10.0;  ///< nm
  Vec3 center = Vec3::Zero();
  Vec3 dipole_axis = Vec3::UnitZ();  ///< local z axis

  /// Throws ContractViolation for a non-positive radius or a non-unit axis.
  void check() const;
  /// Columns are the local x, y, z axes in global coordinates.
  Eigen::Matrix3d frame() const;
};

enum class Region { interior, exterior };

struct SphereMode {
  AngularIndex idx{1, 0};
  SphereGeometry geometry;
  DrudeMaterial material;
  Background background;
  cplx omega{0.0, 0.0};  ///< eV
  cplx zeta{0.0, 0.0};   ///< zero until normalize()
  double residual = 0.0;            ///< relative residual of the cleared equation
  double quotient_residual = 0.0;   ///< relative residual of the quotient form
  bool normalized = false;

  bool physical() const { return omega.imag() > 0.0; }
  double width() const { return material::width(omega); }
  /// Radiative half-width Im(w) - gamma_s/2.
  double radiative_half_width() const {
    return omega.imag() - material::nonradiative_half_width(material);
  }
};

struct FieldSample {
  Vec3 position = Vec3::Zero();  ///< global, nm
  CVec3 E = CVec3::Zero();       ///< global Cartesian
  CVec3 H = CVec3::Zero();       ///< global Cartesian, free-space impedance = 1
  CVec3 E_spherical = CVec3::Zero();  ///< (r, theta, phi) in the local frame
  CVec3 H_spherical = CVec3::Zero();
  Region region = Region::interior;
};

/// eps_in j(x_in) [h(x_out) + x_out h'(x_out)] - eps_out h(x_out) [j(x_in) + x_in j'(x_in)].
cplx characteristic_residual(int l, cplx omega, double radius, const DrudeMaterial& mat,
                             const Background& bg);

/// |G| divided by the magnitude of its two terms.
double characteristic_relative_residual(int l, cplx omega, double radius, const DrudeMaterial& mat,
                                        const Background& bg);

/// eps_in [1 + x_out h'/h] - eps_out [1 + x_in j'/j], relative to its term magnitudes.
double quotient_relative_residual(int l, cplx omega, double radius, const DrudeMaterial& mat,
                                  const Background& bg);

/// Re in [0.3, 1.2] wp/sqrt(3), Im in [0, 0.3 wp].
numerics::ComplexWindow default_window(const DrudeMaterial& mat);

struct ModeSearch {
  std::vector<SphereMode> modes;        ///< validated, sorted by Re(w)
  /// Unconverged or failing the quotient post-check. The k_in = 0 branch point is dropped.
  std::vector<numerics::Root> rejected;
};

struct SolveOptions {
  numerics::GridCounts grid{40, 20};
  double tol = 1e-12;             ///< on G scaled by its value at the window centre
  double accept_relative = 1e-8;  ///< both characteristic forms must fall below this
};

ModeSearch solve_modes(int l, const SphereGeometry& geom, const DrudeMaterial& mat,
                       const Background& bg, const numerics::ComplexWindow& window,
                       const SolveOptions& opts = {});

/// The plasmonic branch: at radius <= 5 nm the mode in the default window
/// closest to the quasi-static estimate wp / sqrt(eps_inf + (l+1)/l eps_out);
/// larger spheres follow that root by continuation in radius. Throws
/// ConvergenceError when the branch cannot be found or followed.
SphereMode plasmon_mode(int l, const SphereGeometry& geom, const DrudeMaterial& mat,
                        const Background& bg, const SolveOptions& opts = {});

/// Unnormalized functional I[f](r)/zeta^2 for one region.
cplx normalization_functional(const SphereMode& mode, Region region, double r);

/// Sets zeta from I[j](a) - I[h](a) = 1. Throws ConvergenceError when zeta^2 is degenerate.
SphereMode normalize(SphereMode mode);

/// |I[j](a) - I[h](a) - 1| with the current zeta.
double normalization_residual(const SphereMode& mode);

/// Field of one TM multipole of the given region, C = 1/j(k_in a) inside and
/// 1/h(k_out a) outside, times amplitude. The region is not inferred from the point.
FieldSample eval_multipole(Region region, AngularIndex idx, cplx omega, const DrudeMaterial& mat,
                           const Background& bg, const SphereGeometry& geom, const Vec3& point,
                           cplx amplitude = 1.0);

/// Mode field at a global point; the region follows |point - center| <= a unless forced.
FieldSample eval_field(const SphereMode& mode, const Vec3& point,
                       std::optional<Region> force = std::nullopt);

/// int_{|r|<R} sigma E.E d^3r by quadrature, split at r = a.
cplx volume_integral(const SphereMode& mode, double R, numerics::BallOrders orders = {});

/// Asymptotic surface term -(i eps_out / 2k) oint E.E dS.
cplx surface_term_asymptotic(const SphereMode& mode, double R, int n_theta = 32, int n_phi = 32);

/// Exact surface term for an outgoing multipole, from surface samples of
/// r E_r and its radial derivative; cancels the R dependence of the volume term.
cplx surface_term_exact(const SphereMode& mode, double R, int n_theta = 32, int n_phi = 32);

}  // namespace plasmon::qnm
