#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "logbm/bodies.hpp"
#include "logbm/rng.hpp"

namespace logbm {

// Canonical-form equality of polytope bodies.
inline bool bodies_equal(const Body& A, const Body& B, double tol = 1e-9) {
  const PolytopeData* pa = A.as_polytope();
  const PolytopeData* pb = B.as_polytope();
  if (!pa || !pb) return false;
  if (pa->n != pb->n) return false;
  if (pa->halfspaces.size() != pb->halfspaces.size()) return false;
  for (std::size_t f = 0; f < pa->halfspaces.size(); ++f) {
    bool found = false;
    for (std::size_t g = 0; g < pb->halfspaces.size(); ++g) {
      if (norm(pa->halfspaces[f].u - pb->halfspaces[g].u) <= tol &&
          std::fabs(pa->halfspaces[f].b - pb->halfspaces[g].b) <=
              tol * std::max(1.0, pa->halfspaces[f].b)) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

// Random origin-symmetric V-polytope: hull of +-k random points.
inline Body random_symmetric_polytope(int n, int k, Rng& rng) {
  std::vector<Vec> pts;
  for (int i = 0; i < k; ++i) {
    Vec p = rng.unit_vector(n);
    double r = rng.uniform(0.6, 1.6);
    pts.push_back(r * p);
    pts.push_back(-r * p);
  }
  for (int i = 0; i < n; ++i) {
    pts.push_back(unit_axis(n, i, 0.4));
    pts.push_back(unit_axis(n, i, -0.4));
  }
  return make_vpolytope(std::move(pts), n);
}

// Random unconditional H-polytope: sign orbits of random positive normals plus
// box bounds. Vertex enumeration stays cheap because facets are few.
inline Body random_unconditional_polytope(int n, int extra_facets, Rng& rng) {
  std::vector<Halfspace> hs;
  Vec hw(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    hw[static_cast<std::size_t>(i)] = rng.uniform(0.5, 1.8);
    hs.push_back({unit_axis(n, i, 1.0), hw[static_cast<std::size_t>(i)]});
    hs.push_back({unit_axis(n, i, -1.0), hw[static_cast<std::size_t>(i)]});
  }
  for (int f = 0; f < extra_facets; ++f) {
    Vec u(static_cast<std::size_t>(n));
    for (auto& c : u) c = rng.uniform(0.15, 1.0);
    u = normalized(u);
    double b = rng.uniform(0.45, 0.95) * dot(u, hw);
    for (int mask = 0; mask < (1 << n); ++mask) {
      Vec v = u;
      for (int i = 0; i < n; ++i)
        if (mask >> i & 1) v[static_cast<std::size_t>(i)] *= -1.0;
      hs.push_back({v, b});
    }
  }
  return make_hpolytope(std::move(hs), n);
}

inline std::vector<Body> test_bodies_sample() {
  Rng rng(4711);
  std::vector<Body> out;
  out.push_back(make_box({1.0, 2.0}));
  out.push_back(make_cross({1.0, 0.5, 2.0}));
  out.push_back(random_symmetric_polytope(3, 6, rng));
  out.push_back(random_unconditional_polytope(2, 2, rng));
  out.push_back(direct_sum({{make_box({1.0}), {0}}, {make_cross({1.0, 1.0}), {1, 2}}}));
  return out;
}

}  // namespace logbm
