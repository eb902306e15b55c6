#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "plasmon/types.hpp"

namespace plasmon::numerics {

/// Axis-aligned rectangle in the complex plane.
struct ComplexWindow {
  double re_lo = 0.0;
  double re_hi = 0.0;
  double im_lo = 0.0;
  double im_hi = 0.0;

  bool empty() const { return !(re_hi > re_lo) || !(im_hi > im_lo); }
  bool contains(cplx z) const {
    return z.real() >= re_lo && z.real() <= re_hi && z.imag() >= im_lo && z.imag() <= im_hi;
  }
  double diagonal() const;
};

struct GridCounts {
  int n_re = 40;
  int n_im = 20;
};

struct Root {
  cplx z;
  double residual = 0.0;  ///< |f(z)| at the returned point
  bool converged = false;
};

/// Result of a window scan: converged roots plus rejected candidates.
struct ComplexScan {
  ComplexWindow window;
  GridCounts grid;
  std::vector<Root> roots;        ///< converged, deduplicated, sorted by real part
  std::vector<Root> unconverged;  ///< candidates that failed the residual or monotonicity test
};

struct RootOptions {
  int max_iter = 200;
  /// Distance below which two roots are considered identical; <= 0 picks
  /// max(tol, 1e-9 * window diagonal).
  double dedup_radius = -1.0;
};

using HoloFn = std::function<cplx(cplx)>;

/// Muller refinement of a single seed. Converged when |f| < tol and the last
/// three residuals decreased monotonically.
Root refine_muller(const HoloFn& f, cplx seed, double step, double tol, int max_iter = 200);

/// Grid scan of log|f| seeded Muller refinement over `window`.
ComplexScan find_roots(const HoloFn& f, const ComplexWindow& window, GridCounts grid, double tol,
                       const RootOptions& opts = {});

struct EigenDecomposition {
  CVector values;
  CMatrix vectors;  ///< columns, unit 2-norm
};

/// Thrown when the QR iteration does not converge; carries the partial Schur form.
class EigenFailure : public ConvergenceError {
 public:
  EigenFailure(const std::string& what, CMatrix partial_schur)
      : ConvergenceError(what), partial_schur_(std::move(partial_schur)) {}
  const CMatrix& partial_schur() const { return partial_schur_; }

 private:
  CMatrix partial_schur_;
};

EigenDecomposition eig_dense(const CMatrix& m);

/// Closed-form eigen decomposition for 1x1 and 2x2 matrices.
EigenDecomposition eig_closed_form(const CMatrix& m);

double smallest_singular_value(const CMatrix& m);

/// Gauss-Legendre nodes/weights on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

struct BallOrders {
  int n_r = 32;
  int n_theta = 32;
  int n_phi = 32;
};

using PointFn = std::function<cplx(const Vec3&)>;

/// Integral of g over the ball |x - center| < radius. Gauss-Legendre in r and
/// cos(theta), trapezoid in phi. Throws NonFiniteSample on a bad integrand value.
cplx integrate_ball(const PointFn& g, double radius, BallOrders orders = {},
                    const Vec3& center = Vec3::Zero());

/// Same rule over the spherical shell r_lo < |x - center| < r_hi.
cplx integrate_shell(const PointFn& g, double r_lo, double r_hi, BallOrders orders = {},
                     const Vec3& center = Vec3::Zero());

class NonFiniteSample : public Error {
 public:
  NonFiniteSample(const std::string& what, Vec3 point) : Error(what), point_(std::move(point)) {}
  const Vec3& point() const { return point_; }

 private:
  Vec3 point_;
};

/// Nelder-Mead minimization in two real variables.
struct MinimizeResult {
  double x = 0.0;
  double y = 0.0;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

MinimizeResult nelder_mead_2d(const std::function<double(double, double)>& f, double x0, double y0,
                              double step_x, double step_y, double xtol, int max_eval = 400);

/// Thread count from PLASMON_THREADS (default: hardware concurrency, at least 1).
int thread_count();

/// Runs body(i) for i in [0, n). Each index is processed exactly once; callers
/// write results into per-index slots so reductions stay order-deterministic.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace plasmon::numerics
