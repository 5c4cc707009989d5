#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "logbm/errors.hpp"

namespace logbm {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec operator+(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec operator-(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec operator*(double t, const Vec& a) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = t * a[i];
  return r;
}

inline Vec normalized(const Vec& a) {
  double n = norm(a);
  if (n == 0.0) throw invalid_parameter("cannot normalize zero vector");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] / n;
  return r;
}

inline Vec abs_vec(const Vec& a) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::fabs(a[i]);
  return r;
}

inline Vec unit_axis(int n, int i, double s = 1.0) {
  Vec r(static_cast<std::size_t>(n), 0.0);
  r[static_cast<std::size_t>(i)] = s;
  return r;
}

// Dense row-major matrix, sized for desk-scale dimensions (n <= 8 mostly).
struct Mat {
  int rows = 0, cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int r, int c, double fill = 0.0) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, fill) {}

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static Mat diagonal(const Vec& d) {
    Mat m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (int i = 0; i < m.rows; ++i) m(i, i) = d[static_cast<std::size_t>(i)];
    return m;
  }

  static Mat from_columns(const std::vector<Vec>& cols) {
    int n = static_cast<int>(cols[0].size());
    int m = static_cast<int>(cols.size());
    Mat r(n, m);
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < n; ++i) r(i, j) = cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    return r;
  }

  Vec col(int j) const {
    Vec r(static_cast<std::size_t>(rows));
    for (int i = 0; i < rows; ++i) r[static_cast<std::size_t>(i)] = (*this)(i, j);
    return r;
  }

  Mat transposed() const {
    Mat r(cols, rows);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) r(j, i) = (*this)(i, j);
    return r;
  }
};

inline Vec mat_vec(const Mat& m, const Vec& x) {
  Vec r(static_cast<std::size_t>(m.rows), 0.0);
  for (int i = 0; i < m.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < m.cols; ++j) s += m(i, j) * x[static_cast<std::size_t>(j)];
    r[static_cast<std::size_t>(i)] = s;
  }
  return r;
}

inline Mat mat_mul(const Mat& a, const Mat& b) {
  Mat r(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols; ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

// Gaussian elimination with partial pivoting. Returns false when the system is
// singular at the given pivot threshold.
inline bool solve_linear(Mat m, Vec rhs, Vec& out, double pivot_tol = 1e-12) {
  int n = m.rows;
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::fabs(m(k, k));
    for (int i = k + 1; i < n; ++i) {
      double v = std::fabs(m(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best < pivot_tol) return false;
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
      std::swap(rhs[static_cast<std::size_t>(k)], rhs[static_cast<std::size_t>(piv)]);
    }
    for (int i = k + 1; i < n; ++i) {
      double f = m(i, k) / m(k, k);
      if (f == 0.0) continue;
      m(i, k) = 0.0;
      for (int j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
      rhs[static_cast<std::size_t>(i)] -= f * rhs[static_cast<std::size_t>(k)];
    }
  }
  out.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = n - 1; i >= 0; --i) {
    double s = rhs[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n; ++j) s -= m(i, j) * out[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = s / m(i, i);
  }
  return true;
}

inline double determinant(Mat m) {
  int n = m.rows;
  double det = 1.0;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::fabs(m(k, k));
    for (int i = k + 1; i < n; ++i) {
      double v = std::fabs(m(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best == 0.0) return 0.0;
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
      det = -det;
    }
    det *= m(k, k);
    for (int i = k + 1; i < n; ++i) {
      double f = m(i, k) / m(k, k);
      for (int j = k; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return det;
}

inline bool invert(const Mat& m, Mat& out, double pivot_tol = 1e-12) {
  int n = m.rows;
  out = Mat(n, n);
  for (int j = 0; j < n; ++j) {
    Vec e(static_cast<std::size_t>(n), 0.0), x;
    e[static_cast<std::size_t>(j)] = 1.0;
    if (!solve_linear(m, e, x, pivot_tol)) return false;
    for (int i = 0; i < n; ++i) out(i, j) = x[static_cast<std::size_t>(i)];
  }
  return true;
}

// Orthonormal basis of the span of the given vectors (modified Gram-Schmidt).
inline std::vector<Vec> orthonormal_basis(const std::vector<Vec>& vs, double tol = 1e-10) {
  std::vector<Vec> basis;
  for (const Vec& v : vs) {
    Vec w = v;
    for (const Vec& b : basis) {
      double c = dot(w, b);
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= c * b[i];
    }
    double nw = norm(w);
    if (nw > tol) {
      for (double& x : w) x /= nw;
      basis.push_back(w);
    }
  }
  return basis;
}

// Extends a partial orthonormal set to a full basis of R^n.
inline std::vector<Vec> complete_basis(std::vector<Vec> basis, int n) {
  for (int i = 0; i < n && static_cast<int>(basis.size()) < n; ++i) {
    Vec w = unit_axis(n, i);
    for (const Vec& b : basis) {
      double c = dot(w, b);
      for (int j = 0; j < n; ++j) w[static_cast<std::size_t>(j)] -= c * b[static_cast<std::size_t>(j)];
    }
    double nw = norm(w);
    if (nw > 1e-8) {
      for (double& x : w) x /= nw;
      basis.push_back(w);
    }
  }
  return basis;
}

}  // namespace logbm
