#pragma once

#include <vector>

#include "plasmon/coupling.hpp"
#include "plasmon/numerics.hpp"
#include "plasmon/sphere_qnm.hpp"

namespace plasmon::oracle {

using material::Background;
using material::DrudeMaterial;
using qnm::Region;
using qnm::SphereGeometry;

struct OracleSphere {
  SphereGeometry geometry;  ///< local z axis of the multipole basis
  DrudeMaterial material;
};

struct OracleProblem {
  std::vector<OracleSphere> spheres;  ///< one or two
  Background background;
  int ell_max = 4;
  std::vector<int> m_set{0};
  int points_per_sphere = 0;  ///< 0 selects 2 M

  int basis_size() const;
  int resolved_points() const { return points_per_sphere > 0 ? points_per_sphere : 2 * basis_size(); }
  /// Empty when valid.
  std::vector<std::string> check() const;
};

struct BasisFunction {
  int sphere = 0;
  Region region = Region::interior;
  special::AngularIndex idx;
};

std::vector<BasisFunction> basis(const OracleProblem& problem);

/// n roughly equidistant unit vectors (Fibonacci lattice).
std::vector<Vec3> fibonacci_points(int n);

/// Two identical spheres at 0 and d x-hat. Both bases use the separation
/// line as local z; m_set is {0} for horizontal and {-1, +1} for vertical.
OracleProblem dimer_problem(double radius, double d, coupling::Orientation orientation,
                            const DrudeMaterial& mat, const Background& bg, int ell_max);

OracleProblem single_sphere_problem(double radius, const DrudeMaterial& mat, const Background& bg,
                                    int ell_max, std::vector<int> m_set = {0});

/// Rows: (sphere, point, [E.theta, E.phi, H.theta, H.phi]); columns: basis
/// functions, interior with +, exterior with -, optionally scaled to unit norm.
CMatrix assemble(const OracleProblem& problem, cplx omega, bool normalize_columns = true);

double sigma_min(const OracleProblem& problem, cplx omega);

struct OracleResonance {
  cplx omega{0.0, 0.0};
  double sigma_min = 0.0;
  int converged_ell = 0;   ///< ell_max at which the re-check at ell_max + 1 agreed
  double ell_shift = 0.0;  ///< |w(ell_max + 1) - w(ell_max)|
  bool converged = false;
  bool at_edge = false;
};

struct SearchOptions {
  numerics::GridCounts grid{24, 10};
  double xtol = 1e-7;
  int max_eval = 400;
  double ell_tolerance = 1e-3;  ///< eV
  double dedup_radius = 1e-4;   ///< eV
};

std::vector<OracleResonance> find_resonances(const OracleProblem& problem,
                                             const numerics::ComplexWindow& window,
                                             const SearchOptions& opts = {});

/// Local refinement from a seed (same minimizer and ell re-check).
OracleResonance refine_resonance(const OracleProblem& problem, cplx seed, double step,
                                 const SearchOptions& opts = {});

}  // namespace plasmon::oracle
