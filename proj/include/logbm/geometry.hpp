#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "logbm/errors.hpp"
#include "logbm/linalg.hpp"

namespace logbm {

struct Halfspace {
  Vec u;     // outward normal
  double b;  // <x,u> <= b
};

namespace geom {

constexpr double kFacetTol = 1e-8;          // vertex-on-facet incidence, relative
constexpr double kMembershipSlack = 1e-9;   // boundary slack for contains()
constexpr std::int64_t kComboCap = 60000000;

inline std::int64_t binomial(int m, int n) {
  if (n < 0 || n > m) return 0;
  std::int64_t r = 1;
  for (int i = 1; i <= n; ++i) {
    r = r * (m - n + i) / i;
    if (r > kComboCap) return kComboCap + 1;
  }
  return r;
}

inline int affine_rank(const std::vector<Vec>& pts, double tol = 1e-9) {
  if (pts.empty()) return -1;
  std::size_t d = pts[0].size();
  Vec c(d, 0.0);
  for (const Vec& p : pts)
    for (std::size_t i = 0; i < d; ++i) c[i] += p[i];
  for (double& x : c) x /= static_cast<double>(pts.size());
  std::vector<Vec> diffs;
  diffs.reserve(pts.size());
  double scale = 1e-30;
  for (const Vec& p : pts) {
    diffs.push_back(p - c);
    scale = std::max(scale, norm(diffs.back()));
  }
  return static_cast<int>(orthonormal_basis(diffs, tol * scale).size());
}

inline void dedupe_points(std::vector<Vec>& pts, double tol) {
  std::vector<Vec> out;
  for (const Vec& p : pts) {
    bool dup = false;
    for (const Vec& q : out)
      if (norm(p - q) <= tol) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(p);
  }
  pts.swap(out);
}

// All vertices of the (assumed bounded) intersection of halfspaces, by solving
// every n-subset of boundary hyperplanes and keeping feasible solutions.
inline std::vector<Vec> enumerate_vertices(const std::vector<Halfspace>& hs, int n) {
  int m = static_cast<int>(hs.size());
  if (m < n) return {};
  if (binomial(m, n) > kComboCap)
    throw resource_limit("vertex enumeration: too many halfspace combinations");

  double scale = 1e-30;
  for (const auto& h : hs) scale = std::max(scale, std::fabs(h.b) / std::max(norm(h.u), 1e-30));

  std::vector<Vec> verts;
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  Mat A(n, n);
  Vec rhs(static_cast<std::size_t>(n)), x;
  while (true) {
    for (int r = 0; r < n; ++r) {
      const auto& h = hs[static_cast<std::size_t>(idx[static_cast<std::size_t>(r)])];
      double nu = norm(h.u);
      for (int c = 0; c < n; ++c) A(r, c) = h.u[static_cast<std::size_t>(c)] / nu;
      rhs[static_cast<std::size_t>(r)] = h.b / nu;
    }
    if (solve_linear(A, rhs, x, 1e-10)) {
      bool feas = true;
      double xs = std::max(scale, norm(x));
      for (const auto& h : hs) {
        double nu = norm(h.u);
        if (dot(x, h.u) / nu > h.b / nu + kFacetTol * xs) {
          feas = false;
          break;
        }
      }
      if (feas) verts.push_back(x);
    }
    // next combination
    int k = n - 1;
    while (k >= 0 && idx[static_cast<std::size_t>(k)] == m - n + k) --k;
    if (k < 0) break;
    ++idx[static_cast<std::size_t>(k)];
    for (int j = k + 1; j < n; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  dedupe_points(verts, 1e-9 * std::max(1.0, scale));
  return verts;
}

struct Facet {
  Vec unit_normal;
  double offset = 0.0;  // <x, unit_normal> <= offset
  std::vector<int> vertex_ids;
};

// Hull facets of a full-dimensional point cloud via polarity about the vertex
// centroid.
inline std::vector<Facet> facets_of_points(const std::vector<Vec>& pts) {
  int d = static_cast<int>(pts[0].size());
  Vec c(pts[0].size(), 0.0);
  for (const Vec& p : pts)
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += p[i];
  for (double& x : c) x /= static_cast<double>(pts.size());

  std::vector<Halfspace> polar;
  polar.reserve(pts.size());
  for (const Vec& p : pts) polar.push_back({p - c, 1.0});
  std::vector<Vec> ws = enumerate_vertices(polar, d);

  double scale = 1e-30;
  for (const Vec& p : pts) scale = std::max(scale, norm(p - c));

  std::vector<Facet> facets;
  for (const Vec& w : ws) {
    double nw = norm(w);
    if (nw < 1e-12) continue;
    Facet f;
    f.unit_normal = (1.0 / nw) * w;
    f.offset = 1.0 / nw + dot(c, f.unit_normal);
    for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
      if (std::fabs(dot(pts[static_cast<std::size_t>(i)], f.unit_normal) - f.offset) <=
          kFacetTol * std::max(1.0, scale))
        f.vertex_ids.push_back(i);
    }
    if (static_cast<int>(f.vertex_ids.size()) >= d) facets.push_back(f);
  }
  // drop duplicate normals (degenerate polar vertices)
  std::vector<Facet> out;
  for (auto& f : facets) {
    bool dup = false;
    for (const auto& g : out)
      if (norm(f.unit_normal - g.unit_normal) < 1e-9 && std::fabs(f.offset - g.offset) < 1e-9 * std::max(1.0, scale)) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(std::move(f));
  }
  return out;
}

inline double volume_of_points(std::vector<Vec> pts);

// (d-1)-volume of a facet given its incident points lying on a hyperplane.
inline double facet_volume(const std::vector<Vec>& facet_pts, const Vec& unit_normal) {
  int d = static_cast<int>(unit_normal.size());
  if (d == 1) return 1.0;  // 0-dimensional measure of a point
  std::vector<Vec> basis = complete_basis({unit_normal}, d);
  std::vector<Vec> proj;
  proj.reserve(facet_pts.size());
  for (const Vec& p : facet_pts) {
    Vec q(static_cast<std::size_t>(d - 1));
    for (int j = 1; j < d; ++j) q[static_cast<std::size_t>(j - 1)] = dot(p, basis[static_cast<std::size_t>(j)]);
    proj.push_back(std::move(q));
  }
  return volume_of_points(std::move(proj));
}

// Exact volume of the convex hull of a point cloud, by recursive facet
// decomposition about the vertex centroid.
inline double volume_of_points(std::vector<Vec> pts) {
  if (pts.empty()) return 0.0;
  int d = static_cast<int>(pts[0].size());
  if (d == 0) return 1.0;
  double scale = 1e-30;
  for (const Vec& p : pts) scale = std::max(scale, norm(p));
  dedupe_points(pts, 1e-10 * std::max(1.0, scale));
  if (static_cast<int>(pts.size()) < d + 1) return 0.0;
  if (d == 1) {
    double lo = pts[0][0], hi = pts[0][0];
    for (const Vec& p : pts) {
      lo = std::min(lo, p[0]);
      hi = std::max(hi, p[0]);
    }
    return hi - lo;
  }
  if (affine_rank(pts) < d) return 0.0;

  Vec c(pts[0].size(), 0.0);
  for (const Vec& p : pts)
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += p[i];
  for (double& x : c) x /= static_cast<double>(pts.size());

  double vol = 0.0;
  for (const Facet& f : facets_of_points(pts)) {
    std::vector<Vec> fp;
    fp.reserve(f.vertex_ids.size());
    for (int id : f.vertex_ids) fp.push_back(pts[static_cast<std::size_t>(id)] - c);
    double h = f.offset - dot(c, f.unit_normal);
    if (h <= 0) continue;
    vol += h * facet_volume(fp, f.unit_normal) / d;
  }
  return vol;
}

}  // namespace geom
}  // namespace logbm
