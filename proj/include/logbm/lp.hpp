#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "logbm/linalg.hpp"

namespace logbm {

// Dense primal simplex for  max c.x  s.t.  Ax = b, x >= 0, given a starting
// feasible basis. Sized for a handful of rows and a few thousand columns.
// Bland's rule throughout; no scaling, callers keep data well-conditioned.
struct SimplexResult {
  bool ok = false;
  double objective = 0.0;
  std::vector<double> x;
};

inline SimplexResult simplex_max(const Mat& A, const Vec& b, const Vec& c, std::vector<int> basis,
                                 int max_iter = 20000) {
  const int m = A.rows, ncols = A.cols;
  SimplexResult res;
  Mat B(m, m);
  auto load_basis = [&]() {
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i) B(i, j) = A(i, basis[static_cast<std::size_t>(j)]);
  };
  load_basis();
  Mat Binv;
  if (!invert(B, Binv, 1e-12)) return res;

  Vec xb = mat_vec(Binv, b);
  std::vector<char> in_basis(static_cast<std::size_t>(ncols), 0);
  for (int j : basis) in_basis[static_cast<std::size_t>(j)] = 1;

  for (int iter = 0; iter < max_iter; ++iter) {
    // y = c_B' Binv
    Vec cb(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) cb[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(basis[static_cast<std::size_t>(j)])];
    Vec y(static_cast<std::size_t>(m), 0.0);
    for (int i = 0; i < m; ++i) {
      double s = 0.0;
      for (int j = 0; j < m; ++j) s += cb[static_cast<std::size_t>(j)] * Binv(j, i);
      y[static_cast<std::size_t>(i)] = s;
    }
    // pricing (Bland: first improving column)
    int enter = -1;
    for (int j = 0; j < ncols; ++j) {
      if (in_basis[static_cast<std::size_t>(j)]) continue;
      double rc = c[static_cast<std::size_t>(j)];
      for (int i = 0; i < m; ++i) rc -= y[static_cast<std::size_t>(i)] * A(i, j);
      if (rc > 1e-9) {
        enter = j;
        break;
      }
    }
    if (enter < 0) {
      res.ok = true;
      res.x.assign(static_cast<std::size_t>(ncols), 0.0);
      double obj = 0.0;
      for (int j = 0; j < m; ++j) {
        res.x[static_cast<std::size_t>(basis[static_cast<std::size_t>(j)])] = xb[static_cast<std::size_t>(j)];
        obj += c[static_cast<std::size_t>(basis[static_cast<std::size_t>(j)])] * xb[static_cast<std::size_t>(j)];
      }
      res.objective = obj;
      return res;
    }
    // direction d = Binv * A_enter
    Vec d(static_cast<std::size_t>(m), 0.0);
    for (int i = 0; i < m; ++i) {
      double s = 0.0;
      for (int k = 0; k < m; ++k) s += Binv(i, k) * A(k, enter);
      d[static_cast<std::size_t>(i)] = s;
    }
    int leave = -1;
    double best_t = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      if (d[static_cast<std::size_t>(i)] > 1e-11) {
        double t = xb[static_cast<std::size_t>(i)] / d[static_cast<std::size_t>(i)];
        if (t < best_t - 1e-12 ||
            (t < best_t + 1e-12 && (leave < 0 || basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])))
          {
            best_t = t;
            leave = i;
          }
      }
    }
    if (leave < 0) return res;  // unbounded
    in_basis[static_cast<std::size_t>(basis[static_cast<std::size_t>(leave)])] = 0;
    in_basis[static_cast<std::size_t>(enter)] = 1;
    basis[static_cast<std::size_t>(leave)] = enter;
    load_basis();
    if (!invert(B, Binv, 1e-12)) return res;
    xb = mat_vec(Binv, b);
    for (double& v : xb) v = std::max(v, 0.0);
  }
  return res;
}

}  // namespace logbm
