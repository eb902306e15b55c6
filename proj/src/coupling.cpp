#include "plasmon/coupling.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace plasmon::coupling {

std::pair<SphereMode, SphereMode> place_dimer(const SphereMode& mode, const DimerGeometry& geom) {
  const double a = mode.geometry.radius;
  if (!(geom.d > 0.0)) throw ContractViolation("dimer separation must be > 0");
  if (geom.d < 2.0 * a * (1.0 - 1e-12)) throw GeometryError("dimer spheres overlap (d < 2a)");
  const Vec3 axis = geom.orientation == Orientation::horizontal ? Vec3::UnitX() : Vec3::UnitZ();
  SphereMode m1 = mode;
  SphereMode m2 = mode;
  m1.geometry.center = Vec3::Zero();
  m1.geometry.dipole_axis = axis;
  m2.geometry.center = Vec3(geom.d, 0.0, 0.0);
  m2.geometry.dipole_axis = axis;
  return {m1, m2};
}

namespace {

cplx kappa_at(const SphereMode& m1, const SphereMode& m2, numerics::BallOrders orders,
              bool background_contrast) {
  auto integrand = [&](const Vec3& p) {
    const auto e1 = qnm::eval_field(m1, p, qnm::Region::interior);
    const auto e2 = qnm::eval_field(m2, p, qnm::Region::exterior);
    return cplx(e1.E.transpose() * e2.E);
  };
  const cplx overlap =
      numerics::integrate_ball(integrand, m1.geometry.radius, orders, m1.geometry.center);
  const cplx eps1 = material::eps_in(m1.material, m1.omega);
  const double ref = background_contrast ? m1.background.eps_out : 1.0;
  return -0.5 * m1.omega * (eps1 - ref) * overlap;
}

}  // namespace

KappaResult kappa_between(const SphereMode& mode1, const SphereMode& mode2, const KappaOptions& opts) {
  if (!mode1.normalized || !mode2.normalized) throw ContractViolation("kappa: modes must be normalized");
  const double sep = (mode2.geometry.center - mode1.geometry.center).norm();
  const double reach = mode1.geometry.radius + mode2.geometry.radius;
  if (sep < reach * (1.0 - 1e-12)) throw GeometryError("kappa: spheres overlap");

  KappaResult out;
  out.kappa = kappa_at(mode1, mode2, opts.orders, opts.background_contrast);
  if (opts.check_convergence) {
    const numerics::BallOrders doubled{2 * opts.orders.n_r, 2 * opts.orders.n_theta,
                                       2 * opts.orders.n_phi};
    const cplx fine = kappa_at(mode1, mode2, doubled, opts.background_contrast);
    out.relative_change = std::abs(fine - out.kappa) / std::max(std::abs(fine), 1e-300);
    out.converged = out.relative_change < opts.convergence_tol;
    out.kappa = fine;
  }
  return out;
}

KappaResult kappa(const SphereMode& mode, const DimerGeometry& geom, const KappaOptions& opts) {
  const auto [m1, m2] = place_dimer(mode, geom);
  return kappa_between(m1, m2, opts);
}

DimerModel build_dimer(const SphereMode& mode, const DimerGeometry& geom, cplx k) {
  DimerModel d;
  d.mode = mode;
  d.geometry = geom;
  d.kappa = k;
  const cplx w0 = mode.omega;
  d.matrix << w0, k, k, w0;

  const auto dense = numerics::eig_dense(d.matrix);
  const Eigen::Vector2cd closed(w0 + k, w0 - k);
  // Match the dense eigenpairs to the closed-form ordering.
  const bool swap = std::abs(dense.values(0) - closed(0)) + std::abs(dense.values(1) - closed(1)) >
                    std::abs(dense.values(1) - closed(0)) + std::abs(dense.values(0) - closed(1));
  for (int c = 0; c < 2; ++c) {
    const int src = swap ? 1 - c : c;
    d.eigenvalues(c) = dense.values(src);
    Eigen::Vector2cd v = dense.vectors.col(src);
    if (v(0) != 0.0) v *= std::polar(1.0, -std::arg(v(0)));  // first component real positive
    d.eigvecs.col(c) = v;
  }
  return d;
}

DimerModel build_dimer(const SphereMode& mode, const DimerGeometry& geom, const KappaOptions& opts) {
  const auto kr = kappa(mode, geom, opts);
  auto d = build_dimer(mode, geom, kr.kappa);
  d.kappa_relative_change = kr.relative_change;
  d.kappa_converged = kr.converged;
  return d;
}

Split split(const Eigen::Matrix2cd& m) {
  const double scale = m.cwiseAbs().maxCoeff();
  const double tol = 1e-12 * std::max(scale, 1.0);
  if (std::abs(m(0, 1) - m(1, 0)) > tol || std::abs(m(0, 0) - m(1, 1)) > tol) {
    throw ContractViolation("split: matrix must be symmetric with equal diagonal");
  }
  return Split{m.real(), 2.0 * m.imag()};
}

Eigen::Matrix2cd reconstruct(const Split& s) {
  return s.H0.cast<cplx>() + 0.5 * kI * s.W.cast<cplx>();
}

Superradiance superradiance_metric(const Eigen::Matrix2d& W) {
  if ((W - W.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, W.cwiseAbs().maxCoeff())) {
    throw ContractViolation("superradiance_metric: W must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(W, Eigen::EigenvaluesOnly);
  const double a = std::abs(es.eigenvalues()(0));
  const double b = std::abs(es.eigenvalues()(1));
  const double hi = std::max(a, b);
  if (hi == 0.0) return Superradiance{0.0, true};
  return Superradiance{std::min(a, b) / hi, false};
}

double rabi_probability(cplx k, double t) {
  if (!(t >= 0.0)) throw ContractViolation("rabi_probability: t must be >= 0");
  const double s = std::sin(std::abs(k) * t);
  return 1.0 - s * s;
}

std::vector<DimerModel> dimer_sweep(const SphereMode& mode, Orientation orientation,
                                    const std::vector<double>& d_over_a, const KappaOptions& opts) {
  std::vector<DimerModel> out;
  out.reserve(d_over_a.size());
  for (const double r : d_over_a) {
    out.push_back(build_dimer(mode, DimerGeometry{r * mode.geometry.radius, orientation}, opts));
  }
  return out;
}

}  // namespace plasmon::coupling
