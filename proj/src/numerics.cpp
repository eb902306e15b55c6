#include "plasmon/numerics.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace plasmon::numerics {

double ComplexWindow::diagonal() const { return std::hypot(re_hi - re_lo, im_hi - im_lo); }

namespace {

double safe_abs(cplx v) {
  const double a = std::abs(v);
  return std::isfinite(a) ? a : std::numeric_limits<double>::infinity();
}

bool monotone_tail(const std::vector<double>& history) {
  if (history.size() < 3) return true;
  const auto n = history.size();
  return history[n - 1] <= history[n - 2] && history[n - 2] <= history[n - 3];
}

}  // namespace

Root refine_muller(const HoloFn& f, cplx seed, double step, double tol, int max_iter) {
  cplx x0 = seed + step;
  cplx x1 = seed - step;
  cplx x2 = seed;
  cplx f0 = f(x0);
  cplx f1 = f(x1);
  cplx f2 = f(x2);

  std::vector<double> history{safe_abs(f0), safe_abs(f1), safe_abs(f2)};
  Root best{x2, safe_abs(f2), false};
  if (best.residual == 0.0) {
    best.converged = true;
    return best;
  }

  for (int it = 0; it < max_iter; ++it) {
    const cplx h1 = x1 - x0;
    const cplx h2 = x2 - x1;
    if (h1 == 0.0 || h2 == 0.0 || h1 + h2 == 0.0) break;
    const cplx d1 = (f1 - f0) / h1;
    const cplx d2 = (f2 - f1) / h2;
    const cplx a = (d2 - d1) / (h2 + h1);
    const cplx b = a * h2 + d2;
    const cplx disc = std::sqrt(b * b - 4.0 * a * f2);
    const cplx den = std::abs(b + disc) >= std::abs(b - disc) ? b + disc : b - disc;
    cplx dx = den != 0.0 ? -2.0 * f2 / den : cplx(step * 0.5, step * 0.5);
    if (!is_finite(dx)) break;

    const cplx x3 = x2 + dx;
    const cplx f3 = f(x3);
    const double r3 = safe_abs(f3);
    history.push_back(r3);

    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f2;
    x2 = x3;
    f2 = f3;

    if (r3 < best.residual || !std::isfinite(best.residual)) best = Root{x3, r3, false};
    if (r3 < tol) {
      best = Root{x3, r3, monotone_tail(history)};
      return best;
    }
    if (std::abs(dx) <= 1e-15 * std::max(1.0, std::abs(x3))) break;
  }
  best.converged = false;
  return best;
}

ComplexScan find_roots(const HoloFn& f, const ComplexWindow& window, GridCounts grid, double tol,
                       const RootOptions& opts) {
  if (!(tol > 0.0)) throw ContractViolation("find_roots: tol must be positive");
  ComplexScan scan;
  scan.window = window;
  scan.grid = grid;
  if (window.empty() || grid.n_re < 1 || grid.n_im < 1) return scan;

  const int nr = grid.n_re;
  const int ni = grid.n_im;
  const double dre = (window.re_hi - window.re_lo) / nr;
  const double dim = (window.im_hi - window.im_lo) / ni;
  auto node = [&](int i, int j) {
    return cplx(window.re_lo + (i + 0.5) * dre, window.im_lo + (j + 0.5) * dim);
  };

  std::vector<double> logabs(static_cast<size_t>(nr) * ni);
  parallel_for(nr * ni, [&](int idx) {
    const int i = idx / ni;
    const int j = idx % ni;
    const double a = safe_abs(f(node(i, j)));
    logabs[idx] = a > 0.0 ? std::log(a) : -std::numeric_limits<double>::infinity();
  });
  auto at = [&](int i, int j) { return logabs[static_cast<size_t>(i) * ni + j]; };

  std::vector<cplx> seeds;
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < ni; ++j) {
      const double v = at(i, j);
      if (!std::isfinite(v) && v > 0) continue;
      bool is_min = true;
      for (int di = -1; di <= 1 && is_min; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const int ii = i + di;
          const int jj = j + dj;
          if (ii < 0 || jj < 0 || ii >= nr || jj >= ni) continue;
          if (at(ii, jj) < v) {
            is_min = false;
            break;
          }
        }
      }
      if (is_min) seeds.push_back(node(i, j));
    }
  }

  const double step = 0.5 * std::min(dre, dim);
  std::vector<Root> refined(seeds.size());
  parallel_for(static_cast<int>(seeds.size()), [&](int s) {
    refined[s] = refine_muller(f, seeds[s], step, tol, opts.max_iter);
  });

  const double radius =
      opts.dedup_radius > 0.0 ? opts.dedup_radius : std::max(tol, 1e-9 * window.diagonal());
  auto merge_into = [radius](std::vector<Root>& list, const Root& r) {
    for (auto& existing : list) {
      if (std::abs(existing.z - r.z) <= radius) {
        if (r.residual < existing.residual) existing = r;
        return;
      }
    }
    list.push_back(r);
  };

  for (const auto& r : refined) {
    if (!window.contains(r.z)) continue;
    if (r.converged) {
      merge_into(scan.roots, r);
    }
  }
  for (const auto& r : refined) {
    if (!window.contains(r.z) || r.converged) continue;
    bool near_root = false;
    for (const auto& good : scan.roots) near_root |= std::abs(good.z - r.z) <= 1e3 * radius;
    if (!near_root) merge_into(scan.unconverged, r);
  }
  auto by_real = [](const Root& a, const Root& b) {
    return a.z.real() != b.z.real() ? a.z.real() < b.z.real() : a.z.imag() < b.z.imag();
  };
  std::sort(scan.roots.begin(), scan.roots.end(), by_real);
  std::sort(scan.unconverged.begin(), scan.unconverged.end(), by_real);
  return scan;
}

EigenDecomposition eig_dense(const CMatrix& m) {
  if (m.rows() != m.cols()) throw ContractViolation("eig_dense: matrix must be square");
  if (m.rows() < 1) throw ContractViolation("eig_dense: empty matrix");
  if (!m.allFinite()) throw ContractViolation("eig_dense: non-finite entries");

  Eigen::ComplexEigenSolver<CMatrix> solver;
  solver.compute(m, true);
  if (solver.info() != Eigen::Success) {
    Eigen::ComplexSchur<CMatrix> schur(m.rows());
    schur.setMaxIterations(30 * m.rows());
    schur.compute(m, false);
    throw EigenFailure("eig_dense: shifted QR failed to converge", schur.matrixT());
  }
  EigenDecomposition out{solver.eigenvalues(), solver.eigenvectors()};
  for (Eigen::Index c = 0; c < out.vectors.cols(); ++c) {
    const double n = out.vectors.col(c).norm();
    if (n > 0) out.vectors.col(c) /= n;
  }
  return out;
}

EigenDecomposition eig_closed_form(const CMatrix& m) {
  if (m.rows() != m.cols()) throw ContractViolation("eig_closed_form: matrix must be square");
  if (m.rows() == 1) {
    EigenDecomposition out;
    out.values = m.col(0);
    out.vectors = CMatrix::Identity(1, 1);
    return out;
  }
  if (m.rows() != 2) throw ContractViolation("eig_closed_form: only sizes 1 and 2");

  const cplx a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  const cplx half_tr = 0.5 * (a + d);
  const cplx disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
  EigenDecomposition out;
  out.values.resize(2);
  out.values << half_tr + disc, half_tr - disc;
  out.vectors.resize(2, 2);
  for (int k = 0; k < 2; ++k) {
    const cplx lam = out.values(k);
    Eigen::Vector2cd v;
    // Pick the better-conditioned row of (M - lam I) v = 0.
    if (std::abs(b) + std::abs(a - lam) >= std::abs(c) + std::abs(d - lam)) {
      v << b, lam - a;
    } else {
      v << lam - d, c;
    }
    if (v.norm() == 0.0) v << (k == 0 ? 1.0 : 0.0), (k == 0 ? 0.0 : 1.0);
    out.vectors.col(k) = v / v.norm();
  }
  return out;
}

double smallest_singular_value(const CMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) throw ContractViolation("smallest_singular_value: empty matrix");
  if (!m.allFinite()) throw ContractViolation("smallest_singular_value: non-finite entries");
  if (m.cols() > m.rows()) {
    // Rank-deficient by shape.
    return 0.0;
  }
  Eigen::BDCSVD<CMatrix> svd(m);
  return svd.singularValues().minCoeff();
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  if (n < 1) throw ContractViolation("gauss_legendre: n must be >= 1");
  std::vector<double> x(n), w(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
  return {x, w};
}

namespace {

cplx integrate_radial_range(const PointFn& g, double r_lo, double r_hi, BallOrders orders,
                            const Vec3& center) {
  if (orders.n_r < 2 || orders.n_theta < 2 || orders.n_phi < 2) {
    throw ContractViolation("integrate_ball: orders must be >= 2");
  }
  if (!(r_hi > r_lo) || r_lo < 0.0) throw ContractViolation("integrate_ball: invalid radial range");

  const auto [xr, wr] = gauss_legendre(orders.n_r);
  const auto [xt, wt] = gauss_legendre(orders.n_theta);
  const double half = 0.5 * (r_hi - r_lo);
  const double mid = 0.5 * (r_hi + r_lo);
  const double dphi = 2.0 * kPi / orders.n_phi;

  std::vector<cplx> partial(orders.n_r, cplx(0.0));
  parallel_for(orders.n_r, [&](int i) {
    const double r = mid + half * xr[i];
    const double radial_w = half * wr[i] * r * r;
    cplx acc = 0.0;
    for (int t = 0; t < orders.n_theta; ++t) {
      const double ct = xt[t];
      const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
      cplx ring = 0.0;
      for (int p = 0; p < orders.n_phi; ++p) {
        const double phi = p * dphi;
        const Vec3 pt = center + r * Vec3(st * std::cos(phi), st * std::sin(phi), ct);
        const cplx v = g(pt);
        if (!is_finite(v)) {
          std::ostringstream msg;
          msg << "integrate_ball: non-finite integrand at (" << pt.x() << ", " << pt.y() << ", "
              << pt.z() << ")";
          throw NonFiniteSample(msg.str(), pt);
        }
        ring += v;
      }
      acc += wt[t] * ring;
    }
    partial[i] = radial_w * dphi * acc;
  });
  cplx total = 0.0;
  for (const auto& p : partial) total += p;
  return total;
}

}  // namespace

cplx integrate_ball(const PointFn& g, double radius, BallOrders orders, const Vec3& center) {
  if (!(radius > 0.0)) throw ContractViolation("integrate_ball: radius must be positive");
  return integrate_radial_range(g, 0.0, radius, orders, center);
}

cplx integrate_shell(const PointFn& g, double r_lo, double r_hi, BallOrders orders,
                     const Vec3& center) {
  return integrate_radial_range(g, r_lo, r_hi, orders, center);
}

MinimizeResult nelder_mead_2d(const std::function<double(double, double)>& f, double x0, double y0,
                              double step_x, double step_y, double xtol, int max_eval) {
  struct Vertex {
    double x, y, v;
  };
  int evals = 0;
  auto eval = [&](double x, double y) {
    ++evals;
    const double v = f(x, y);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };
  std::array<Vertex, 3> s{Vertex{x0, y0, eval(x0, y0)}, Vertex{x0 + step_x, y0, eval(x0 + step_x, y0)},
                          Vertex{x0, y0 + step_y, eval(x0, y0 + step_y)}};
  auto sort_simplex = [&] {
    std::sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.v < b.v; });
  };
  bool converged = false;
  while (evals < max_eval) {
    sort_simplex();
    const double size = std::max({std::abs(s[1].x - s[0].x), std::abs(s[2].x - s[0].x),
                                  std::abs(s[1].y - s[0].y), std::abs(s[2].y - s[0].y)});
    if (size < xtol) {
      converged = true;
      break;
    }
    const double cx = 0.5 * (s[0].x + s[1].x);
    const double cy = 0.5 * (s[0].y + s[1].y);
    const double rx = cx + (cx - s[2].x);
    const double ry = cy + (cy - s[2].y);
    const double rv = eval(rx, ry);
    if (rv < s[0].v) {
      const double ex = cx + 2.0 * (cx - s[2].x);
      const double ey = cy + 2.0 * (cy - s[2].y);
      const double ev = eval(ex, ey);
      s[2] = ev < rv ? Vertex{ex, ey, ev} : Vertex{rx, ry, rv};
    } else if (rv < s[1].v) {
      s[2] = Vertex{rx, ry, rv};
    } else {
      const bool outside = rv < s[2].v;
      const double kx = outside ? cx + 0.5 * (rx - cx) : cx + 0.5 * (s[2].x - cx);
      const double ky = outside ? cy + 0.5 * (ry - cy) : cy + 0.5 * (s[2].y - cy);
      const double kv = eval(kx, ky);
      if (kv < std::min(rv, s[2].v)) {
        s[2] = Vertex{kx, ky, kv};
      } else {
        for (int i = 1; i < 3; ++i) {
          s[i].x = s[0].x + 0.5 * (s[i].x - s[0].x);
          s[i].y = s[0].y + 0.5 * (s[i].y - s[0].y);
          s[i].v = eval(s[i].x, s[i].y);
        }
      }
    }
  }
  sort_simplex();
  return MinimizeResult{s[0].x, s[0].y, s[0].v, evals, converged};
}

int thread_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("PLASMON_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) return std::min(cap, std::max(hw, cap));
  }
  return hw;
}

void parallel_for(int n, const std::function<void(int)>& body) {
  if (n <= 0) return;
  const int threads = std::min(thread_count(), n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  int first_index = n;
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (i < first_index) {
          first_index = i;
          first_error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace plasmon::numerics
