#pragma once

#include <vector>

#include "plasmon/types.hpp"

namespace plasmon::special {

/// (l, m) with |m| <= l. Negative m selects the sin(|m| phi) tesseral harmonic.
struct AngularIndex {
  int l = 0;
  int m = 0;
  AngularIndex() = default;
  AngularIndex(int l_, int m_);
};

/// Spherical radial function families. h2 is the outgoing Hankel function
/// under the e^{+i w t} convention.
enum class Radial { j, y, h2 };

/// f_l(x) for l >= -1. The l = -1 members (cos x/x, sin x/x, e^{-ix}/x) are
/// what the recurrence f_{l-1} + f_{l+1} = (2l+1) f_l / x gives from l = 0.
cplx sph(Radial kind, int l, cplx x);

/// d f_l / dx.
cplx sph_deriv(Radial kind, int l, cplx x);

/// f_0 .. f_lmax at one argument.
std::vector<cplx> sph_array(Radial kind, int lmax, cplx x);

inline cplx sph_bessel_j(int l, cplx x) { return sph(Radial::j, l, x); }
inline cplx sph_bessel_j_deriv(int l, cplx x) { return sph_deriv(Radial::j, l, x); }
inline cplx sph_bessel_y(int l, cplx x) { return sph(Radial::y, l, x); }
inline cplx sph_bessel_y_deriv(int l, cplx x) { return sph_deriv(Radial::y, l, x); }
inline cplx sph_hankel2(int l, cplx x) { return sph(Radial::h2, l, x); }
inline cplx sph_hankel2_deriv(int l, cplx x) { return sph_deriv(Radial::h2, l, x); }

/// Associated Legendre P_l^m(x), m >= 0, without the Condon-Shortley phase.
double legendre_p(int l, int m, double x);

struct Tesseral {
  double value = 0.0;
  double d_theta = 0.0;
  double d_phi = 0.0;
  double d_phi_over_sin = 0.0;  ///< (1/sin theta) dY/dphi, finite at the poles
};

/// Real (tesseral) spherical harmonic with its angular derivatives.
Tesseral tesseral(AngularIndex idx, double theta, double phi);

inline double tesseral_Y(AngularIndex idx, double theta, double phi) {
  return tesseral(idx, theta, phi).value;
}

struct RadialIdentityResult {
  double residual = 0.0;         ///< max of the two below
  double residual_square = 0.0;  ///< int r^2 f^2 dr against its closed form
  double residual_energy = 0.0;  ///< int [l(l+1) f^2 + ((x f)')^2] dr against its closed form
  bool ill_conditioned = false;  ///< closed form is a near-cancelling difference of endpoint terms
};

/// Numerically integrates the two radial Bessel identities over [r_lo, r_hi]
/// and compares with their closed forms.
RadialIdentityResult bessel_radial_identity_check(int l, cplx k, double r_lo, double r_hi,
                                                  Radial kind = Radial::j);

}  // namespace plasmon::special
