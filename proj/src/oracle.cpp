#include "plasmon/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace plasmon::oracle {

int OracleProblem::basis_size() const {
  int per_sphere = 0;
  for (int l = 1; l <= ell_max; ++l)
    for (int m : m_set)
      if (std::abs(m) <= l) per_sphere += 2;
  return per_sphere * static_cast<int>(spheres.size());
}

std::vector<std::string> OracleProblem::check() const {
  std::vector<std::string> out;
  if (spheres.empty() || spheres.size() > 2) out.push_back("oracle needs one or two spheres");
  if (ell_max < 1 || ell_max > 12) out.push_back("ell_max must be in [1, 12]");
  if (m_set.empty()) out.push_back("m_set must not be empty");
  if (basis_size() == 0) out.push_back("basis is empty");
  if (points_per_sphere < 0) out.push_back("points_per_sphere must be >= 0");
  const long rows = 4L * resolved_points() * static_cast<long>(spheres.size());
  if (rows < basis_size()) out.push_back("collocation system is not overdetermined");
  if (spheres.size() == 2) {
    const auto& a = spheres[0].geometry;
    const auto& b = spheres[1].geometry;
    if ((a.center - b.center).norm() < (a.radius + b.radius) * (1.0 - 1e-12)) {
      out.push_back("oracle spheres overlap");
    }
  }
  return out;
}

std::vector<BasisFunction> basis(const OracleProblem& problem) {
  std::vector<BasisFunction> out;
  for (int s = 0; s < static_cast<int>(problem.spheres.size()); ++s)
    for (Region region : {Region::interior, Region::exterior})
      for (int l = 1; l <= problem.ell_max; ++l)
        for (int m : problem.m_set)
          if (std::abs(m) <= l) out.push_back(BasisFunction{s, region, special::AngularIndex(l, m)});
  return out;
}

std::vector<Vec3> fibonacci_points(int n) {
  if (n < 1) throw ContractViolation("fibonacci_points: n must be >= 1");
  std::vector<Vec3> out(n);
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    out[i] = Vec3(rho * std::cos(phi), rho * std::sin(phi), z);
  }
  return out;
}

OracleProblem dimer_problem(double radius, double d, coupling::Orientation orientation,
                            const DrudeMaterial& mat, const Background& bg, int ell_max) {
  OracleProblem p;
  SphereGeometry g1{radius, Vec3::Zero(), Vec3::UnitX()};
  SphereGeometry g2{radius, Vec3(d, 0.0, 0.0), Vec3::UnitX()};
  p.spheres = {OracleSphere{g1, mat}, OracleSphere{g2, mat}};
  p.background = bg;
  p.ell_max = ell_max;
  p.m_set = orientation == coupling::Orientation::horizontal ? std::vector<int>{0}
                                                             : std::vector<int>{-1, 1};
  return p;
}

OracleProblem single_sphere_problem(double radius, const DrudeMaterial& mat, const Background& bg,
                                    int ell_max, std::vector<int> m_set) {
  OracleProblem p;
  p.spheres = {OracleSphere{SphereGeometry{radius, Vec3::Zero(), Vec3::UnitZ()}, mat}};
  p.background = bg;
  p.ell_max = ell_max;
  p.m_set = std::move(m_set);
  return p;
}

namespace {

struct SurfacePoint {
  int sphere;
  Vec3 position;
  Vec3 theta_hat;
  Vec3 phi_hat;
};

std::vector<SurfacePoint> surface_points(const OracleProblem& problem) {
  const auto dirs = fibonacci_points(problem.resolved_points());
  std::vector<SurfacePoint> out;
  for (int s = 0; s < static_cast<int>(problem.spheres.size()); ++s) {
    const auto& g = problem.spheres[s].geometry;
    const Eigen::Matrix3d F = g.frame();
    for (const auto& d : dirs) {
      const Vec3 pos = g.center + g.radius * (F * d);
      bool clash = false;
      for (int o = 0; o < static_cast<int>(problem.spheres.size()); ++o)
        if (o != s && (pos - problem.spheres[o].geometry.center).norm() < 1e-9) clash = true;
      if (clash) continue;
      const double theta = std::acos(std::clamp(d.z(), -1.0, 1.0));
      const double phi = std::atan2(d.y(), d.x());
      const Vec3 th(std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi), -std::sin(theta));
      const Vec3 ph(-std::sin(phi), std::cos(phi), 0.0);
      out.push_back(SurfacePoint{s, pos, F * th, F * ph});
    }
  }
  return out;
}

}  // namespace

CMatrix assemble(const OracleProblem& problem, cplx omega, bool normalize_columns) {
  const auto issues = problem.check();
  if (!issues.empty()) throw ContractViolation("oracle problem: " + issues.front());
  const auto fns = basis(problem);
  const auto pts = surface_points(problem);
  const int M = static_cast<int>(fns.size());
  CMatrix A = CMatrix::Zero(4 * static_cast<Eigen::Index>(pts.size()), M);

  numerics::parallel_for(M, [&](int c) {
    const auto& bf = fns[c];
    const auto& sph = problem.spheres[bf.sphere];
    const double sign = bf.region == Region::interior ? 1.0 : -1.0;
    for (size_t p = 0; p < pts.size(); ++p) {
      const auto& sp = pts[p];
      // Interior fields live only on their own sphere's surface.
      if (bf.region == Region::interior && sp.sphere != bf.sphere) continue;
      const auto f = qnm::eval_multipole(bf.region, bf.idx, omega, sph.material, problem.background,
                                         sph.geometry, sp.position);
      const Eigen::Index r = 4 * static_cast<Eigen::Index>(p);
      A(r + 0, c) = sign * sp.theta_hat.cast<cplx>().dot(f.E);
      A(r + 1, c) = sign * sp.phi_hat.cast<cplx>().dot(f.E);
      A(r + 2, c) = sign * sp.theta_hat.cast<cplx>().dot(f.H);
      A(r + 3, c) = sign * sp.phi_hat.cast<cplx>().dot(f.H);
    }
    if (normalize_columns) {
      const double n = A.col(c).norm();
      if (n > 0.0) A.col(c) /= n;
    }
  });
  return A;
}

double sigma_min(const OracleProblem& problem, cplx omega) {
  return numerics::smallest_singular_value(assemble(problem, omega, true));
}

namespace {

double log_sigma(const OracleProblem& problem, cplx omega) {
  try {
    const double s = sigma_min(problem, omega);
    return s > 0.0 ? std::log(s) : -745.0;
  } catch (const Error&) {
    return std::numeric_limits<double>::infinity();
  }
}

numerics::MinimizeResult minimize_at(const OracleProblem& problem, cplx seed, double step,
                                     const SearchOptions& opts) {
  return numerics::nelder_mead_2d(
      [&](double x, double y) {
        if (!(x > 0.0)) return std::numeric_limits<double>::infinity();
        return log_sigma(problem, cplx(x, y));
      },
      seed.real(), seed.imag(), step, step, opts.xtol, opts.max_eval);
}

}  // namespace

OracleResonance refine_resonance(const OracleProblem& problem, cplx seed, double step,
                                 const SearchOptions& opts) {
  const auto res = minimize_at(problem, seed, step, opts);
  OracleResonance out;
  out.omega = cplx(res.x, res.y);
  out.sigma_min = std::exp(res.value);

  OracleProblem finer = problem;
  finer.ell_max = problem.ell_max + 1;
  const auto again = minimize_at(finer, out.omega, 0.25 * step, opts);
  out.ell_shift = std::abs(cplx(again.x, again.y) - out.omega);
  out.converged = res.converged && again.converged && out.ell_shift < opts.ell_tolerance;
  out.converged_ell = out.converged ? problem.ell_max : 0;
  return out;
}

std::vector<OracleResonance> find_resonances(const OracleProblem& problem,
                                             const numerics::ComplexWindow& window,
                                             const SearchOptions& opts) {
  std::vector<OracleResonance> out;
  if (window.empty()) return out;
  const int nr = opts.grid.n_re;
  const int ni = opts.grid.n_im;
  const double dre = (window.re_hi - window.re_lo) / nr;
  const double dim = (window.im_hi - window.im_lo) / ni;
  auto node = [&](int i, int j) {
    return cplx(window.re_lo + (i + 0.5) * dre, window.im_lo + (j + 0.5) * dim);
  };
  std::vector<double> grid(static_cast<size_t>(nr) * ni);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < ni; ++j) grid[static_cast<size_t>(i) * ni + j] = log_sigma(problem, node(i, j));
  auto at = [&](int i, int j) { return grid[static_cast<size_t>(i) * ni + j]; };

  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < ni; ++j) {
      bool is_min = std::isfinite(at(i, j));
      for (int di = -1; di <= 1 && is_min; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const int ii = i + di, jj = j + dj;
          if (ii < 0 || jj < 0 || ii >= nr || jj >= ni) continue;
          if (at(ii, jj) < at(i, j)) is_min = false;
        }
      if (!is_min) continue;
      auto r = refine_resonance(problem, node(i, j), 0.5 * std::min(dre, dim), opts);
      const double margin = 0.25 * std::min(dre, dim);
      r.at_edge = r.omega.real() < window.re_lo + margin || r.omega.real() > window.re_hi - margin ||
                  r.omega.imag() < window.im_lo + margin || r.omega.imag() > window.im_hi - margin;
      if (r.at_edge) r.converged = false;
      bool duplicate = false;
      for (auto& e : out) {
        if (std::abs(e.omega - r.omega) < opts.dedup_radius) {
          if (r.sigma_min < e.sigma_min) e = r;
          duplicate = true;
        }
      }
      if (!duplicate) out.push_back(r);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const OracleResonance& a, const OracleResonance& b) { return a.omega.real() < b.omega.real(); });
  return out;
}

}  // namespace plasmon::oracle
