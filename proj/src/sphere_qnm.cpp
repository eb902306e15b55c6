#include "plasmon/sphere_qnm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Geometry>

namespace plasmon::qnm {

using special::Radial;

void SphereGeometry::check() const {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ContractViolation("sphere radius must be > 0");
  if (!center.allFinite()) throw ContractViolation("sphere center must be finite");
  if (std::abs(dipole_axis.norm() - 1.0) > 1e-12) {
    throw ContractViolation("dipole_axis must be a unit vector");
  }
}

Eigen::Matrix3d SphereGeometry::frame() const {
  const Vec3 z = Vec3::UnitZ();
  const Vec3 a = dipole_axis.normalized();
  const double c = z.dot(a);
  if (c > 1.0 - 1e-15) return Eigen::Matrix3d::Identity();
  if (c < -1.0 + 1e-15) return Eigen::Vector3d(1.0, -1.0, -1.0).asDiagonal();
  // Minimal rotation taking z onto the axis (Rodrigues).
  const Vec3 v = z.cross(a);
  const double s2 = v.squaredNorm();
  Eigen::Matrix3d K;
  K << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return Eigen::Matrix3d::Identity() + K + K * K * ((1.0 - c) / s2);
}

namespace {

struct BoundaryValues {
  cplx eps;
  cplx x_in, x_out;
  cplx j, jd, h, hd;
};

BoundaryValues boundary(int l, cplx omega, double radius, const DrudeMaterial& mat,
                        const Background& bg) {
  if (l < 1) throw ContractViolation("TM modes need l >= 1");
  if (!(radius > 0.0)) throw ContractViolation("radius must be > 0");
  const auto k = material::wavenumbers(mat, bg, omega);
  BoundaryValues b;
  b.eps = material::eps_in(mat, omega);
  b.x_in = k.k_in * radius;
  b.x_out = k.k_out * radius;
  const auto ja = special::sph_array(Radial::j, l + 1, b.x_in);
  const auto ha = special::sph_array(Radial::h2, l + 1, b.x_out);
  b.j = ja[l];
  b.jd = double(l) / b.x_in * ja[l] - ja[l + 1];
  b.h = ha[l];
  b.hd = double(l) / b.x_out * ha[l] - ha[l + 1];
  return b;
}

}  // namespace

cplx characteristic_residual(int l, cplx omega, double radius, const DrudeMaterial& mat,
                             const Background& bg) {
  const auto b = boundary(l, omega, radius, mat, bg);
  return b.eps * b.j * (b.h + b.x_out * b.hd) - bg.eps_out * b.h * (b.j + b.x_in * b.jd);
}

double characteristic_relative_residual(int l, cplx omega, double radius, const DrudeMaterial& mat,
                                        const Background& bg) {
  const auto b = boundary(l, omega, radius, mat, bg);
  const cplx t1 = b.eps * b.j * (b.h + b.x_out * b.hd);
  const cplx t2 = bg.eps_out * b.h * (b.j + b.x_in * b.jd);
  const double scale = std::abs(t1) + std::abs(t2);
  return scale > 0.0 ? std::abs(t1 - t2) / scale : 0.0;
}

double quotient_relative_residual(int l, cplx omega, double radius, const DrudeMaterial& mat,
                                  const Background& bg) {
  const auto b = boundary(l, omega, radius, mat, bg);
  if (b.j == 0.0 || b.h == 0.0) return std::numeric_limits<double>::infinity();
  const cplx q1 = b.eps * (1.0 + b.x_out * b.hd / b.h);
  const cplx q2 = bg.eps_out * (1.0 + b.x_in * b.jd / b.j);
  const double scale = std::abs(q1) + std::abs(q2);
  if (!std::isfinite(scale)) return std::numeric_limits<double>::infinity();
  return scale > 0.0 ? std::abs(q1 - q2) / scale : 0.0;
}

numerics::ComplexWindow default_window(const DrudeMaterial& mat) {
  const double w = mat.omega_p / std::sqrt(3.0);
  return numerics::ComplexWindow{0.3 * w, 1.2 * w, 0.0, 0.3 * mat.omega_p};
}

ModeSearch solve_modes(int l, const SphereGeometry& geom, const DrudeMaterial& mat,
                       const Background& bg, const numerics::ComplexWindow& window,
                       const SolveOptions& opts) {
  geom.check();
  if (!(window.re_lo > 0.0)) throw ContractViolation("solve_modes: window must lie in Re w > 0");
  ModeSearch out;
  if (window.empty()) return out;

  const cplx centre(0.5 * (window.re_lo + window.re_hi), 0.5 * (window.im_lo + window.im_hi));
  cplx scale = characteristic_residual(l, centre, geom.radius, mat, bg);
  if (!is_finite(scale) || scale == 0.0) scale = 1.0;
  auto f = [&](cplx w) -> cplx {
    try {
      return characteristic_residual(l, w, geom.radius, mat, bg) / scale;
    } catch (const SingularityError&) {
      return cplx(std::numeric_limits<double>::infinity(), 0.0);
    }
  };

  const auto scan = numerics::find_roots(f, window, opts.grid, opts.tol);
  for (const auto& root : scan.roots) {
    SphereMode mode;
    mode.idx = AngularIndex(l, 0);
    mode.geometry = geom;
    mode.material = mat;
    mode.background = bg;
    mode.omega = root.z;
    mode.residual = characteristic_relative_residual(l, root.z, geom.radius, mat, bg);
    mode.quotient_residual = quotient_relative_residual(l, root.z, geom.radius, mat, bg);
    if (mode.residual < opts.accept_relative && mode.quotient_residual < opts.accept_relative) {
      out.modes.push_back(mode);
    } else {
      out.rejected.push_back(root);
    }
  }
  // G vanishes like sqrt(eps_in) at the bulk plasmon point k_in = 0; that
  // branch point is not a mode and the refiner cannot converge on it.
  for (const auto& r : scan.unconverged) {
    const cplx x_in = material::wavenumber(material::eps_in(mat, r.z), r.z) * geom.radius;
    if (std::abs(x_in) < 1e-2) continue;
    out.rejected.push_back(r);
  }
  return out;
}

SphereMode plasmon_mode(int l, const SphereGeometry& geom, const DrudeMaterial& mat,
                        const Background& bg, const SolveOptions& opts) {
  geom.check();
  // Pick the branch where it is unambiguous (small sphere, near the
  // quasi-static value), then follow it in radius. Larger spheres carry
  // other roots that can sit closer to the quasi-static estimate.
  constexpr double kStartRadius = 5.0;
  constexpr double kRadiusStep = 1.0;
  SphereGeometry g = geom;
  g.radius = std::min(geom.radius, kStartRadius);
  const auto found = solve_modes(l, g, mat, bg, default_window(mat), opts);
  if (found.modes.empty()) throw ConvergenceError("no plasmon mode found in the default window");
  const double quasi_static = mat.omega_p / std::sqrt(mat.eps_inf + (l + 1.0) / l * bg.eps_out);
  SphereMode mode = *std::min_element(found.modes.begin(), found.modes.end(),
                                      [&](const SphereMode& a, const SphereMode& b) {
                                        return std::abs(a.omega - quasi_static) <
                                               std::abs(b.omega - quasi_static);
                                      });
  if (geom.radius <= kStartRadius) return mode;

  const int steps = static_cast<int>(std::ceil((geom.radius - kStartRadius) / kRadiusStep));
  cplx w = mode.omega;
  cplx prev = w;
  for (int s = 1; s <= steps; ++s) {
    const double a = kStartRadius + (geom.radius - kStartRadius) * s / steps;
    const cplx seed = s > 1 ? 2.0 * w - prev : w;  // linear extrapolation
    const double scale = std::abs(characteristic_residual(l, seed * 1.02, a, mat, bg));
    auto f = [&](cplx z) -> cplx {
      try {
        return characteristic_residual(l, z, a, mat, bg) / scale;
      } catch (const SingularityError&) {
        return cplx(std::numeric_limits<double>::infinity(), 0.0);
      }
    };
    const auto root = numerics::refine_muller(f, seed, 1e-3 * std::abs(seed), opts.tol);
    if (!root.converged) {
      throw ConvergenceError("plasmon branch lost at radius " + std::to_string(a) + " nm");
    }
    prev = w;
    w = root.z;
  }
  mode.geometry = geom;
  mode.omega = w;
  mode.residual = characteristic_relative_residual(l, w, geom.radius, mat, bg);
  mode.quotient_residual = quotient_relative_residual(l, w, geom.radius, mat, bg);
  if (!(mode.residual < opts.accept_relative && mode.quotient_residual < opts.accept_relative)) {
    throw ConvergenceError("plasmon branch fails the residual check at the target radius");
  }
  return mode;
}

namespace {

struct RegionParams {
  Radial kind;
  cplx k;
  cplx eps;
  cplx sig;
  cplx C;
};

RegionParams region_params(Region region, int l, cplx omega, const DrudeMaterial& mat,
                           const Background& bg, double radius) {
  const auto k = material::wavenumbers(mat, bg, omega);
  RegionParams p;
  if (region == Region::interior) {
    p.kind = Radial::j;
    p.k = k.k_in;
    p.eps = material::eps_in(mat, omega);
    p.sig = material::sigma(mat, omega);
    p.C = 1.0 / special::sph(Radial::j, l, k.k_in * radius);
  } else {
    p.kind = Radial::h2;
    p.k = k.k_out;
    p.eps = bg.eps_out;
    p.sig = material::sigma(bg, omega);
    p.C = 1.0 / special::sph(Radial::h2, l, k.k_out * radius);
  }
  if (!is_finite(p.C)) throw SingularityError("boundary coefficient C is singular at this frequency");
  return p;
}

}  // namespace

cplx normalization_functional(const SphereMode& mode, Region region, double r) {
  const int l = mode.idx.l;
  const auto p = region_params(region, l, mode.omega, mode.material, mode.background,
                               mode.geometry.radius);
  const cplx x = p.k * r;
  const auto f = special::sph_array(p.kind, l + 1, x);
  const cplx fm = special::sph(p.kind, l - 1, x);
  const cplx fl = f[l];
  const cplx fp = f[l + 1];
  const cplx fd = double(l) / x * fl - fp;
  const double L = l * (l + 1.0);
  const cplx bracket =
      r * fl * fl + p.k * r * r * fl * fd + 0.5 * p.k * p.k * r * r * r * (fl * fl - fm * fp);
  return p.sig * p.C * p.C * L / (p.eps * p.k * p.k) * bracket;
}

SphereMode normalize(SphereMode mode) {
  const double a = mode.geometry.radius;
  const cplx diff = normalization_functional(mode, Region::interior, a) -
                    normalization_functional(mode, Region::exterior, a);
  const cplx z2 = 1.0 / diff;
  if (!is_finite(z2) || std::abs(z2) < 1e-30) {
    throw ConvergenceError("degenerate normalization: zeta^2 is zero or not finite");
  }
  cplx z = std::sqrt(z2);
  if (z.real() < 0.0 || (z.real() == 0.0 && z.imag() < 0.0)) z = -z;
  mode.zeta = z;
  mode.normalized = true;
  return mode;
}

double normalization_residual(const SphereMode& mode) {
  const double a = mode.geometry.radius;
  const cplx diff = normalization_functional(mode, Region::interior, a) -
                    normalization_functional(mode, Region::exterior, a);
  return std::abs(mode.zeta * mode.zeta * diff - 1.0);
}

FieldSample eval_multipole(Region region, AngularIndex idx, cplx omega, const DrudeMaterial& mat,
                           const Background& bg, const SphereGeometry& geom, const Vec3& point,
                           cplx amplitude) {
  const int l = idx.l;
  if (l < 1) throw ContractViolation("TM multipoles need l >= 1");
  const auto p = region_params(region, l, omega, mat, bg, geom.radius);
  const Eigen::Matrix3d R = geom.frame();
  const Vec3 local = R.transpose() * (point - geom.center);
  const double r = local.norm();
  const cplx k0 = omega / material::kHbarC;
  const double L = l * (l + 1.0);

  FieldSample out;
  out.position = point;
  out.region = region;

  double theta = 0.0;
  double phi = 0.0;
  cplx f_over_r, dxf_over_r, f;
  if (r == 0.0) {
    if (region == Region::exterior) throw SingularityError("exterior field evaluated at the center");
    // Limits of j_l(kr)/r and (x j_l)'/r at the origin.
    f = l == 0 ? 1.0 : 0.0;
    f_over_r = l == 1 ? p.k / 3.0 : cplx(0.0);
    dxf_over_r = l == 1 ? 2.0 * p.k / 3.0 : cplx(0.0);
  } else {
    theta = std::acos(std::clamp(local.z() / r, -1.0, 1.0));
    phi = std::atan2(local.y(), local.x());
    const cplx x = p.k * r;
    const auto arr = special::sph_array(p.kind, l + 1, x);
    f = arr[l];
    const cplx fd = double(l) / x * arr[l] - arr[l + 1];
    f_over_r = f / r;
    dxf_over_r = (f + x * fd) / r;
  }
  const auto Y = special::tesseral(idx, theta, phi);
  const cplx pre = amplitude * p.C / (p.eps * k0);
  out.E_spherical = CVec3(pre * L * f_over_r * Y.value, pre * dxf_over_r * Y.d_theta,
                          pre * dxf_over_r * Y.d_phi_over_sin);
  const cplx hpre = kI * amplitude * p.C * f;
  out.H_spherical = CVec3(0.0, hpre * Y.d_phi_over_sin, -hpre * Y.d_theta);

  const double st = std::sin(theta), ct = std::cos(theta);
  const double sp = std::sin(phi), cp = std::cos(phi);
  Eigen::Matrix3d basis;  // columns r-hat, theta-hat, phi-hat in the local frame
  basis << st * cp, ct * cp, -sp, st * sp, ct * sp, cp, ct, -st, 0.0;
  const Eigen::Matrix3cd to_global = (R * basis).cast<cplx>();
  out.E = to_global * out.E_spherical;
  out.H = to_global * out.H_spherical;
  return out;
}

FieldSample eval_field(const SphereMode& mode, const Vec3& point, std::optional<Region> force) {
  if (!mode.normalized) throw ContractViolation("eval_field: mode is not normalized");
  const double r = (point - mode.geometry.center).norm();
  const Region region = force ? *force : (r <= mode.geometry.radius ? Region::interior : Region::exterior);
  return eval_multipole(region, mode.idx, mode.omega, mode.material, mode.background,
                        mode.geometry, point, mode.zeta);
}

cplx volume_integral(const SphereMode& mode, double R, numerics::BallOrders orders) {
  const double a = mode.geometry.radius;
  if (!(R > a)) throw ContractViolation("volume_integral: R must exceed the radius");
  const cplx sig_in = material::sigma(mode.material, mode.omega);
  const cplx sig_out = material::sigma(mode.background, mode.omega);
  auto dot = [&](Region region) {
    return [&mode, region](const Vec3& p) {
      const auto s = eval_field(mode, p, region);
      return cplx(s.E.transpose() * s.E);
    };
  };
  const cplx inner = numerics::integrate_ball(dot(Region::interior), a, orders, mode.geometry.center);
  const cplx outer =
      numerics::integrate_shell(dot(Region::exterior), a, R, orders, mode.geometry.center);
  return sig_in * inner + sig_out * outer;
}

namespace {

// Gauss-Legendre in cos(theta) times trapezoid in phi over the sphere of
// radius R, with g given the local unit direction.
template <typename G>
void sphere_rule(int n_theta, int n_phi, G&& g) {
  if (n_theta < 2 || n_phi < 2) throw ContractViolation("surface rule needs >= 2 nodes per axis");
  const auto [xt, wt] = numerics::gauss_legendre(n_theta);
  const double dphi = 2.0 * kPi / n_phi;
  for (int t = 0; t < n_theta; ++t) {
    const double ct = xt[t];
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    for (int q = 0; q < n_phi; ++q) {
      const double phi = q * dphi;
      g(Vec3(st * std::cos(phi), st * std::sin(phi), ct), wt[t] * dphi);
    }
  }
}

}  // namespace

cplx surface_term_asymptotic(const SphereMode& mode, double R, int n_theta, int n_phi) {
  if (!(R > mode.geometry.radius)) throw ContractViolation("surface term needs R > a");
  const Eigen::Matrix3d F = mode.geometry.frame();
  cplx sum = 0.0;
  sphere_rule(n_theta, n_phi, [&](const Vec3& dir, double w) {
    const auto s = eval_field(mode, mode.geometry.center + R * (F * dir), Region::exterior);
    sum += w * cplx(s.E.transpose() * s.E);
  });
  const cplx k = material::wavenumbers(mode.material, mode.background, mode.omega).k_out;
  return -kI * mode.background.eps_out / (2.0 * k) * R * R * sum;
}

cplx surface_term_exact(const SphereMode& mode, double R, int n_theta, int n_phi) {
  if (!(R > mode.geometry.radius)) throw ContractViolation("surface term needs R > a");
  const Eigen::Matrix3d F = mode.geometry.frame();
  const double h = 1e-4 * R;
  cplx P = 0.0, Q = 0.0, U = 0.0;
  sphere_rule(n_theta, n_phi, [&](const Vec3& dir, double w) {
    auto rEr = [&](double r) {
      const auto s = eval_field(mode, mode.geometry.center + r * (F * dir), Region::exterior);
      return r * s.E_spherical(0);
    };
    const cplx u = rEr(R);
    const cplx du = (rEr(R + h) - rEr(R - h)) / (2.0 * h);
    P += w * u * u;
    Q += w * u * du;
    U += w * du * du;
  });
  const int l = mode.idx.l;
  const double L = l * (l + 1.0);
  const cplx k = material::wavenumbers(mode.material, mode.background, mode.omega).k_out;
  const cplx sig = material::sigma(mode.background, mode.omega);
  const cplx I_R = sig / L * (R * P * (1.0 - 0.5 * L) + 1.5 * R * R * Q + 0.5 * R * R * R * (k * k * P + U));
  return -I_R;
}

}  // namespace plasmon::qnm
