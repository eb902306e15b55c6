#include "plasmon/special.hpp"

#include <algorithm>
#include <cmath>

#include "plasmon/numerics.hpp"

namespace plasmon::special {

AngularIndex::AngularIndex(int l_, int m_) : l(l_), m(m_) {
  if (l < 0) throw ContractViolation("AngularIndex: l must be >= 0");
  if (std::abs(m) > l) throw ContractViolation("AngularIndex: |m| must not exceed l");
}

namespace {

constexpr double kSeriesRadius = 1.0;

// Power series of j_l, used for |x| <= kSeriesRadius.
cplx j_series(int l, cplx x) {
  cplx lead = 1.0;
  for (int i = 1; i <= l; ++i) lead *= x / double(2 * i + 1);
  const cplx q = -0.5 * x * x;
  cplx term = 1.0;
  cplx sum = 1.0;
  for (int k = 0; k < 60; ++k) {
    term *= q / (double(k + 1) * double(2 * l + 2 * k + 3));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return lead * sum;
}

// j_0 .. j_lmax by Miller's downward recurrence, |x| > kSeriesRadius.
std::vector<cplx> j_downward(int lmax, cplx x) {
  const int start = lmax + 20 + static_cast<int>(std::abs(x));
  std::vector<cplx> out(lmax + 1);
  cplx above = 0.0;
  cplx cur = 1e-300;
  for (int l = start; l >= 0; --l) {
    if (l <= lmax) out[l] = cur;
    const cplx below = double(2 * l + 1) / x * cur - above;
    above = cur;
    cur = below;
    if (std::abs(cur) > 1e250) {
      const double s = 1e-250;
      cur *= s;
      above *= s;
      for (int k = l; k <= lmax && k >= 0; ++k) out[k] *= s;
    }
  }
  // `above` now holds the unnormalized j_0 and `cur` the unnormalized j_{-1}.
  const cplx j0 = std::sin(x) / x;
  const cplx j1 = std::sin(x) / (x * x) - std::cos(x) / x;
  cplx scale;
  if (std::abs(j0) >= std::abs(j1) || lmax < 1) {
    scale = j0 / out[0];
  } else {
    scale = j1 / out[1];
  }
  for (auto& v : out) v *= scale;
  return out;
}

std::vector<cplx> upward(cplx f0, cplx f1, int lmax, cplx x) {
  std::vector<cplx> out(lmax + 1);
  out[0] = f0;
  if (lmax >= 1) out[1] = f1;
  for (int l = 1; l < lmax; ++l) out[l + 1] = double(2 * l + 1) / x * out[l] - out[l - 1];
  return out;
}

cplx minus_one(Radial kind, cplx x) {
  switch (kind) {
    case Radial::j:
      return std::cos(x) / x;
    case Radial::y:
      return std::sin(x) / x;
    case Radial::h2:
      return std::exp(-kI * x) / x;
  }
  return 0.0;
}

}  // namespace

std::vector<cplx> sph_array(Radial kind, int lmax, cplx x) {
  if (lmax < 0) throw ContractViolation("sph_array: lmax must be >= 0");
  if (!is_finite(x)) throw ContractViolation("sph_array: non-finite argument");
  if (kind == Radial::j) {
    if (x == 0.0) {
      std::vector<cplx> out(lmax + 1, 0.0);
      out[0] = 1.0;
      return out;
    }
    if (std::abs(x) <= kSeriesRadius) {
      std::vector<cplx> out(lmax + 1);
      for (int l = 0; l <= lmax; ++l) out[l] = j_series(l, x);
      return out;
    }
    return j_downward(lmax, x);
  }
  if (x == 0.0) throw SingularityError("spherical y/h2 evaluated at x = 0");
  if (kind == Radial::y) {
    const cplx c = std::cos(x);
    const cplx s = std::sin(x);
    return upward(-c / x, -c / (x * x) - s / x, lmax, x);
  }
  const cplx e = std::exp(-kI * x);
  return upward(kI * e / x, -e * (x - kI) / (x * x), lmax, x);
}

cplx sph(Radial kind, int l, cplx x) {
  if (l < -1) throw ContractViolation("sph: l must be >= -1");
  if (l == -1) {
    if (x == 0.0) throw SingularityError("spherical function of order -1 at x = 0");
    return minus_one(kind, x);
  }
  return sph_array(kind, l, x)[l];
}

cplx sph_deriv(Radial kind, int l, cplx x) {
  if (l < 0) throw ContractViolation("sph_deriv: l must be >= 0");
  if (kind == Radial::j && x == 0.0) return l == 1 ? cplx(1.0 / 3.0) : cplx(0.0);
  const auto f = sph_array(kind, l + 1, x);
  // f'_l = (l/x) f_l - f_{l+1}: avoids the l = -1 member and is benign near 0.
  return double(l) / x * f[l] - f[l + 1];
}

double legendre_p(int l, int m, double x) {
  if (m < 0 || l < 0) throw ContractViolation("legendre_p: l, m must be >= 0");
  if (m > l) return 0.0;
  const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
  double pmm = 1.0;
  for (int i = 1; i <= m; ++i) pmm *= (2.0 * i - 1.0) * s;
  if (l == m) return pmm;
  double pm1 = x * (2.0 * m + 1.0) * pmm;
  if (l == m + 1) return pm1;
  double p = 0.0;
  for (int ll = m + 2; ll <= l; ++ll) {
    p = (x * (2.0 * ll - 1.0) * pm1 - (ll + m - 1.0) * pmm) / (ll - m);
    pmm = pm1;
    pm1 = p;
  }
  return p;
}

namespace {

// P_l^m(cos theta) / sin theta for m >= 1, by the same recurrence seeded with
// (2m-1)!! sin^{m-1}: finite at the poles.
double legendre_over_sin(int l, int m, double theta) {
  if (m > l) return 0.0;
  const double x = std::cos(theta);
  const double s = std::sin(theta);
  double pmm = 1.0;
  for (int i = 1; i <= m; ++i) pmm *= (2.0 * i - 1.0);
  for (int i = 1; i < m; ++i) pmm *= s;
  if (l == m) return pmm;
  double pm1 = x * (2.0 * m + 1.0) * pmm;
  if (l == m + 1) return pm1;
  double p = 0.0;
  for (int ll = m + 2; ll <= l; ++ll) {
    p = (x * (2.0 * ll - 1.0) * pm1 - (ll + m - 1.0) * pmm) / (ll - m);
    pmm = pm1;
    pm1 = p;
  }
  return p;
}

double norm_factor(int l, int am) {
  if (am == 0) return std::sqrt((2.0 * l + 1.0) / (4.0 * kPi));
  double ratio = 1.0;  // (l-m)!/(l+m)!
  for (int i = l - am + 1; i <= l + am; ++i) ratio /= i;
  return std::sqrt((2.0 * l + 1.0) / (2.0 * kPi) * ratio);
}

}  // namespace

Tesseral tesseral(AngularIndex idx, double theta, double phi) {
  if (!(theta >= 0.0 && theta <= kPi)) throw ContractViolation("tesseral: theta outside [0, pi]");
  const int l = idx.l;
  const int am = std::abs(idx.m);
  const double x = std::cos(theta);
  const double n = norm_factor(l, am);

  const double p = legendre_p(l, am, x);
  double dp;
  if (am == 0) {
    dp = -legendre_p(l, 1, x);
  } else {
    dp = 0.5 * ((l + am) * (l - am + 1.0) * legendre_p(l, am - 1, x) - legendre_p(l, am + 1, x));
  }

  Tesseral t;
  if (idx.m == 0) {
    t.value = n * p;
    t.d_theta = n * dp;
    return t;
  }
  const double q = am == 0 ? 0.0 : legendre_over_sin(l, am, theta);
  const double c = std::cos(am * phi);
  const double s = std::sin(am * phi);
  if (idx.m > 0) {
    t.value = n * p * c;
    t.d_theta = n * dp * c;
    t.d_phi = -am * n * p * s;
    t.d_phi_over_sin = -am * n * q * s;
  } else {
    t.value = n * p * s;
    t.d_theta = n * dp * s;
    t.d_phi = am * n * p * c;
    t.d_phi_over_sin = am * n * q * c;
  }
  return t;
}

RadialIdentityResult bessel_radial_identity_check(int l, cplx k, double r_lo, double r_hi,
                                                  Radial kind) {
  if (l < 0) throw ContractViolation("bessel_radial_identity_check: l must be >= 0");
  if (!(r_lo > 0.0 && r_hi > r_lo)) {
    throw ContractViolation("bessel_radial_identity_check: need 0 < r_lo < r_hi");
  }
  if (k == 0.0) throw ContractViolation("bessel_radial_identity_check: k must be nonzero");

  const double L = l * (l + 1.0);
  struct Sample {
    cplx fm, f, fp, fd;
  };
  auto sample = [&](double r) {
    const cplx x = k * r;
    const auto arr = sph_array(kind, l + 1, x);
    Sample s;
    s.fm = l == 0 ? minus_one(kind, x) : arr[l - 1];
    s.f = arr[l];
    s.fp = arr[l + 1];
    s.fd = double(l) / x * s.f - s.fp;
    return s;
  };
  auto square_closed = [&](double r) {
    const Sample s = sample(r);
    return 0.5 * r * r * r * (s.f * s.f - s.fm * s.fp);
  };
  auto energy_closed = [&](double r) {
    const Sample s = sample(r);
    return r * s.f * s.f + k * r * r * s.f * s.fd + k * k * square_closed(r);
  };

  // Composite Gauss-Legendre; panel count scales with the oscillation count.
  const int panels = std::max(4, static_cast<int>(std::ceil(2.0 * std::abs(k) * (r_hi - r_lo))));
  const auto [gx, gw] = numerics::gauss_legendre(24);
  cplx num_square = 0.0;
  cplx num_energy = 0.0;
  double abs_square = 0.0;
  double abs_energy = 0.0;
  const double h = (r_hi - r_lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double a = r_lo + p * h;
    for (size_t i = 0; i < gx.size(); ++i) {
      const double r = a + 0.5 * h * (gx[i] + 1.0);
      const double w = 0.5 * h * gw[i];
      const Sample s = sample(r);
      const cplx x = k * r;
      const cplx dxf = s.f + x * s.fd;
      const cplx sq = r * r * s.f * s.f;
      const cplx en = L * s.f * s.f + dxf * dxf;
      num_square += w * sq;
      num_energy += w * en;
      abs_square += w * std::abs(sq);
      abs_energy += w * std::abs(en);
    }
  }

  const cplx cs_hi = square_closed(r_hi);
  const cplx cs_lo = square_closed(r_lo);
  const cplx ce_hi = energy_closed(r_hi);
  const cplx ce_lo = energy_closed(r_lo);
  const cplx rhs_square = cs_hi - cs_lo;
  const cplx rhs_energy = ce_hi - ce_lo;

  RadialIdentityResult out;
  out.residual_square = std::abs(num_square - rhs_square) / std::abs(rhs_square);
  out.residual_energy = std::abs(num_energy - rhs_energy) / std::abs(rhs_energy);
  out.residual = std::max(out.residual_square, out.residual_energy);
  const double endpoint_scale =
      std::max({std::abs(cs_hi), std::abs(cs_lo), std::abs(ce_hi), std::abs(ce_lo)});
  const double rhs_scale = std::min(std::abs(rhs_square), std::abs(rhs_energy));
  out.ill_conditioned = rhs_scale < 1e-6 * endpoint_scale ||
                        std::abs(rhs_square) < 1e-6 * abs_square ||
                        std::abs(rhs_energy) < 1e-6 * abs_energy;
  return out;
}

}  // namespace plasmon::special
