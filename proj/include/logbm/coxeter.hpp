#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "logbm/bodies.hpp"
#include "logbm/linalg.hpp"

namespace logbm {

enum class CoxeterType { A, B, D, I2, E6, E7, E8 };

inline std::string coxeter_type_name(CoxeterType t, int rank) {
  switch (t) {
    case CoxeterType::A:
      return "A" + std::to_string(rank);
    case CoxeterType::B:
      return "B" + std::to_string(rank);
    case CoxeterType::D:
      return "D" + std::to_string(rank);
    case CoxeterType::I2:
      return "I2(" + std::to_string(rank) + ")";
    case CoxeterType::E6:
      return "E6";
    case CoxeterType::E7:
      return "E7";
    case CoxeterType::E8:
      return "E8";
  }
  return "?";
}

// Finite irreducible reflection-group data: simple roots u_i paired with the
// chamber generators v_i spanning the closed Weyl chamber pos{v_1..v_d}.
struct RootSystem {
  CoxeterType type;
  int rank = 0;        // d; for I2(m) the polygon order m is stored separately
  int polygon_m = 0;   // only for I2
  std::vector<Vec> roots;       // u_1..u_d
  std::vector<Vec> generators;  // v_1..v_d (empty until chamber_generators)

  int dim() const { return type == CoxeterType::I2 ? 2 : rank; }
};

struct RootSystemChecks {
  bool duality_triangular = false;  // <u_i,v_i> > 0 and <u_i,v_j> = 0 for i < j
  bool duality_all_pairs = false;   // <u_i,v_j> = 0 for every i != j
  bool chamber_angles = false;      // <v_i,v_j> >= |v_i||v_j|/d
  double min_pairwise_vv = 0.0;
  double max_norm_sq_v = 0.0;
};

namespace detail {

// Regular simplex vertices in R^d centered at the origin (Helmert embedding
// of the unit-coordinate simplex of R^{d+1}).
inline std::vector<Vec> regular_simplex_vertices(int d) {
  std::vector<Vec> helmert;
  for (int k = 1; k <= d; ++k) {
    Vec b(static_cast<std::size_t>(d + 1), 0.0);
    double s = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
    for (int i = 0; i < k; ++i) b[static_cast<std::size_t>(i)] = s;
    b[static_cast<std::size_t>(k)] = -static_cast<double>(k) * s;
    helmert.push_back(std::move(b));
  }
  std::vector<Vec> verts;
  for (int v = 0; v <= d; ++v) {
    Vec e(static_cast<std::size_t>(d + 1), -1.0 / (d + 1));
    e[static_cast<std::size_t>(v)] += 1.0;
    Vec p(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) p[static_cast<std::size_t>(k)] = dot(e, helmert[static_cast<std::size_t>(k)]);
    verts.push_back(std::move(p));
  }
  return verts;
}

}  // namespace detail

// Simple systems of roots per type. D and E come as printed lists; A realizes
// the adjacent-transposition roots of the regular simplex in R^d; B uses the
// standard e_i - e_{i+1}, e_d system; I2(m) two unit vectors at angle
// pi - pi/m.
inline RootSystem simple_roots(CoxeterType type, int rank = 0) {
  RootSystem rs;
  rs.type = type;
  switch (type) {
    case CoxeterType::A: {
      if (rank < 1) throw invalid_parameter("simple_roots: A_d needs rank >= 1");
      rs.rank = rank;
      auto p = detail::regular_simplex_vertices(rank);
      for (int i = 1; i <= rank; ++i)
        rs.roots.push_back(p[static_cast<std::size_t>(i - 1)] - p[static_cast<std::size_t>(i)]);
      break;
    }
    case CoxeterType::B: {
      if (rank < 2) throw invalid_parameter("simple_roots: B_d needs rank >= 2");
      rs.rank = rank;
      for (int i = 0; i + 1 < rank; ++i)
        rs.roots.push_back(unit_axis(rank, i) - unit_axis(rank, i + 1));
      rs.roots.push_back(unit_axis(rank, rank - 1));
      break;
    }
    case CoxeterType::D: {
      if (rank < 3) throw invalid_parameter("simple_roots: D_d needs rank >= 3");
      rs.rank = rank;
      for (int i = 0; i + 1 < rank; ++i)
        rs.roots.push_back(unit_axis(rank, i) - unit_axis(rank, i + 1));
      rs.roots.push_back(unit_axis(rank, rank - 2) + unit_axis(rank, rank - 1));
      break;
    }
    case CoxeterType::I2: {
      if (rank < 3) throw invalid_parameter("simple_roots: I2(m) needs m >= 3");
      rs.rank = 2;
      rs.polygon_m = rank;
      const double pi = 3.14159265358979323846264338328;
      double a = pi / rank;
      rs.roots.push_back({std::sin(a), -std::cos(a)});
      rs.roots.push_back({0.0, 1.0});
      break;
    }
    case CoxeterType::E6: {
      rs.rank = 6;
      const double r3 = std::sqrt(3.0);
      for (int i = 0; i < 4; ++i) rs.roots.push_back(unit_axis(6, i) - unit_axis(6, i + 1));
      rs.roots.push_back(unit_axis(6, 3) + unit_axis(6, 4));
      rs.roots.push_back({-1, -1, -1, -1, -1, r3});
      break;
    }
    case CoxeterType::E7: {
      rs.rank = 7;
      const double r2 = std::sqrt(2.0);
      for (int i = 0; i < 5; ++i) rs.roots.push_back(unit_axis(7, i) - unit_axis(7, i + 1));
      rs.roots.push_back(unit_axis(7, 4) + unit_axis(7, 5));
      rs.roots.push_back({-1, -1, -1, -1, -1, -1, r2});
      break;
    }
    case CoxeterType::E8: {
      rs.rank = 8;
      for (int i = 0; i < 7; ++i) rs.roots.push_back(unit_axis(8, i) - unit_axis(8, i + 1));
      rs.roots.push_back({-1, -1, -1, -1, -1, 1, 1, 1});
      break;
    }
  }
  return rs;
}

namespace detail {

// Chamber generators for the regular-polytope types: v_i is the centroid of
// the (i-1)-face in a fixed tower of faces; the simple roots are re-derived
// as the matching dual wall normals.
inline void tower_generators(RootSystem& rs, const std::vector<Vec>& tower_centroids) {
  int d = rs.dim();
  Mat V = Mat::from_columns(tower_centroids);
  Mat Vinv;
  if (!invert(V, Vinv)) throw invalid_parameter("chamber_generators: degenerate tower");
  rs.generators = tower_centroids;
  rs.roots.clear();
  for (int i = 0; i < d; ++i) {
    Vec row(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) row[static_cast<std::size_t>(j)] = Vinv(i, j);
    rs.roots.push_back(normalized(row));
  }
}

}  // namespace detail

// Chamber generators v_1..v_d. D and E types carry the printed tables; A, B
// and I2(m) run the face-tower construction on the regular simplex, cube and
// m-gon. The returned roots always satisfy <u_i,v_i> > 0, <u_i,v_j> = 0.
inline RootSystem chamber_generators(CoxeterType type, int rank = 0) {
  RootSystem rs = simple_roots(type, rank);
  switch (type) {
    case CoxeterType::A: {
      auto p = detail::regular_simplex_vertices(rs.rank);
      std::vector<Vec> tower;
      Vec acc(static_cast<std::size_t>(rs.rank), 0.0);
      for (int i = 0; i < rs.rank; ++i) {
        acc = acc + p[static_cast<std::size_t>(i)];
        tower.push_back((1.0 / (i + 1)) * acc);
      }
      detail::tower_generators(rs, tower);
      break;
    }
    case CoxeterType::B: {
      int d = rs.rank;
      std::vector<Vec> tower;
      for (int i = 0; i < d; ++i) {
        Vec c(static_cast<std::size_t>(d), 0.0);
        for (int j = 0; j < d - i; ++j) c[static_cast<std::size_t>(j)] = 1.0;
        tower.push_back(std::move(c));
      }
      detail::tower_generators(rs, tower);
      break;
    }
    case CoxeterType::I2: {
      const double pi = 3.14159265358979323846264338328;
      double a = pi / rs.polygon_m;
      std::vector<Vec> tower;
      tower.push_back({1.0, 0.0});                                      // vertex
      tower.push_back({std::cos(a) * std::cos(a), std::cos(a) * std::sin(a)});  // edge midpoint
      detail::tower_generators(rs, tower);
      break;
    }
    case CoxeterType::D: {
      int d = rs.rank;
      for (int i = 1; i <= d - 2; ++i) {
        Vec v(static_cast<std::size_t>(d), 0.0);
        for (int j = 0; j < i; ++j) v[static_cast<std::size_t>(j)] = 1.0;
        rs.generators.push_back(std::move(v));
      }
      Vec vd1(static_cast<std::size_t>(d), 1.0);
      vd1[static_cast<std::size_t>(d - 1)] = -1.0;
      rs.generators.push_back(std::move(vd1));
      rs.generators.push_back(Vec(static_cast<std::size_t>(d), 1.0));
      break;
    }
    case CoxeterType::E6: {
      const double r3 = std::sqrt(3.0);
      rs.generators = {{r3, 0, 0, 0, 0, 1},
                       {r3, r3, 0, 0, 0, 2},
                       {r3, r3, r3, 0, 0, 3},
                       {1, 1, 1, 1, -1, r3},
                       {1, 1, 1, 1, 1, 5.0 / r3},
                       {0, 0, 0, 0, 0, 3}};
      break;
    }
    case CoxeterType::E7: {
      const double r2 = std::sqrt(2.0);
      rs.generators = {{2, 0, 0, 0, 0, 0, r2},
                       {1, 1, 0, 0, 0, 0, r2},
                       {1, 1, 1, 0, 0, 0, 3.0 / r2},
                       {1, 1, 1, 1, 0, 0, 2 * r2},
                       {1, 1, 1, 1, 1, -1, 2 * r2},
                       {1, 1, 1, 1, 1, 1, 3 * r2},
                       {0, 0, 0, 0, 0, 0, 4}};
      break;
    }
    case CoxeterType::E8: {
      rs.generators = {{1, -1, -1, -1, -1, -1, -1, -1},
                       {0, 0, -1, -1, -1, -1, -1, -1},
                       {-1, -1, -1, -3, -3, -3, -3, -3},
                       {-1, -1, -1, -1, -2, -2, -2, -2},
                       {-1, -1, -1, -1, -1, -5.0 / 3, -5.0 / 3, -5.0 / 3},
                       {-1, -1, -1, -1, -1, -1, -2, -2},
                       {-1, -1, -1, -1, -1, -1, -1, -3},
                       {-1, -1, -1, -1, -1, -1, -1, -1}};
      break;
    }
  }
  return rs;
}

inline RootSystemChecks check_root_system(const RootSystem& rs, double tol = 1e-10) {
  RootSystemChecks out;
  int d = static_cast<int>(rs.generators.size());
  if (d == 0) return out;
  out.duality_triangular = true;
  out.duality_all_pairs = true;
  for (int i = 0; i < d; ++i) {
    if (dot(rs.roots[static_cast<std::size_t>(i)], rs.generators[static_cast<std::size_t>(i)]) <= 0)
      out.duality_triangular = false;
    for (int j = 0; j < d; ++j) {
      if (i == j) continue;
      double v = std::fabs(dot(rs.roots[static_cast<std::size_t>(i)], rs.generators[static_cast<std::size_t>(j)]));
      if (v > tol) {
        out.duality_all_pairs = false;
        if (i < j) out.duality_triangular = false;
      }
    }
  }
  out.chamber_angles = true;
  out.min_pairwise_vv = std::numeric_limits<double>::infinity();
  for (int i = 0; i < d; ++i) {
    out.max_norm_sq_v = std::max(out.max_norm_sq_v, dot(rs.generators[static_cast<std::size_t>(i)],
                                                        rs.generators[static_cast<std::size_t>(i)]));
    for (int j = i + 1; j < d; ++j) {
      double vv = dot(rs.generators[static_cast<std::size_t>(i)], rs.generators[static_cast<std::size_t>(j)]);
      out.min_pairwise_vv = std::min(out.min_pairwise_vv, vv);
      double bound = norm(rs.generators[static_cast<std::size_t>(i)]) *
                     norm(rs.generators[static_cast<std::size_t>(j)]) / d;
      if (vv < bound - 1e-12) out.chamber_angles = false;
    }
  }
  if (d == 1) out.min_pairwise_vv = 0.0;
  return out;
}

// Orthogonal reflection through the hyperplane orthogonal to the root.
inline Mat reflection_matrix(const Vec& root) {
  double rr = dot(root, root);
  if (rr < 1e-24) throw invalid_parameter("reflection_matrix: zero root");
  int n = static_cast<int>(root.size());
  Mat m = Mat::identity(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m(i, j) -= 2.0 * root[static_cast<std::size_t>(i)] * root[static_cast<std::size_t>(j)] / rr;
  return m;
}

// Closure of the simple roots under the reflections of the generated group,
// deduplicated as unit directions (both signs kept).
inline std::vector<Vec> root_orbit(const RootSystem& rs, std::size_t cap = 1000000) {
  std::vector<Vec> orbit;
  auto push = [&](const Vec& r) {
    Vec u = normalized(r);
    for (const Vec& q : orbit)
      if (norm(q - u) < 1e-8) return false;
    orbit.push_back(u);
    return true;
  };
  for (const Vec& r : rs.roots) {
    push(r);
    push(-1.0 * r);
  }
  bool grew = true;
  while (grew) {
    grew = false;
    std::size_t sz = orbit.size();
    for (std::size_t a = 0; a < sz; ++a) {
      Mat R = reflection_matrix(orbit[a]);
      for (std::size_t b = 0; b < orbit.size(); ++b) {
        if (push(mat_vec(R, orbit[b]))) grew = true;
        if (orbit.size() > cap) throw resource_limit("root_orbit: closure exceeds cap");
      }
    }
  }
  std::sort(orbit.begin(), orbit.end(), [](const Vec& x, const Vec& y) { return detail::lex_less(x, y); });
  return orbit;
}

// ---------------------------------------------------------------------------
// Group enumeration and symmetrization
// ---------------------------------------------------------------------------

struct ReflectionGroupSpec {
  std::vector<Vec> generators_roots;
  std::vector<Mat> elements;  // enumerated when order <= cap
};

namespace detail {

inline std::string matrix_key(const Mat& m) {
  std::string key;
  key.reserve(static_cast<std::size_t>(m.rows * m.cols) * 9);
  char buf[32];
  for (double v : m.a) {
    double q = std::round(v * 1e9) / 1e9;
    if (q == 0.0) q = 0.0;  // normalize -0
    std::snprintf(buf, sizeof buf, "%.9f,", q);
    key += buf;
  }
  return key;
}

}  // namespace detail

constexpr std::size_t kGroupCap = 100000;

// Breadth-first closure of the generator reflections; throws resource_limit
// past the cap.
inline ReflectionGroupSpec enumerate_group(const std::vector<Vec>& roots, std::size_t cap = kGroupCap) {
  ReflectionGroupSpec g;
  g.generators_roots = roots;
  int n = static_cast<int>(roots[0].size());
  std::vector<Mat> gens;
  for (const Vec& r : roots) gens.push_back(reflection_matrix(r));
  std::map<std::string, int> seen;
  std::vector<Mat> frontier{Mat::identity(n)};
  seen[detail::matrix_key(frontier[0])] = 0;
  g.elements.push_back(frontier[0]);
  while (!frontier.empty()) {
    std::vector<Mat> next;
    for (const Mat& m : frontier) {
      for (const Mat& s : gens) {
        Mat p = mat_mul(s, m);
        std::string key = detail::matrix_key(p);
        if (seen.emplace(std::move(key), 1).second) {
          g.elements.push_back(p);
          next.push_back(std::move(p));
          if (g.elements.size() > cap) throw resource_limit("enumerate_group: order exceeds cap");
        }
      }
    }
    frontier = std::move(next);
  }
  return g;
}

// Intersection of the orbit of K under the group; the result is invariant.
inline Body symmetrize(const Body& K, const ReflectionGroupSpec& group) {
  const PolytopeData* pd = K.as_polytope();
  if (!pd) throw unsupported_operation("symmetrize: polytope required");
  std::vector<Halfspace> hs;
  for (const Mat& A : group.elements) {
    // orthogonal A: halfspaces of A K have normals A u
    for (const auto& h : pd->halfspaces) hs.push_back({mat_vec(A, h.u), h.b});
  }
  return make_hpolytope(std::move(hs), pd->n);
}

// ---------------------------------------------------------------------------
// Chamber transfer and unconditionalization
// ---------------------------------------------------------------------------

struct ChamberTransfer {
  Mat phi;                 // Phi v_i = e_i
  Mat phi_inv;             // columns are the v_i
  Mat gram;                // certificate: Phi^{-T} v_j = Gram column j >= 0
  double min_certificate;  // smallest entry of the certificate matrix
};

// Phi with Phi v_i = e_i; the extreme rays of the chamber map into the
// nonnegative orthant under Phi^{-T} exactly when the Gram matrix of the v_i
// is nonnegative entrywise.
inline ChamberTransfer chamber_transfer(const std::vector<Vec>& generators) {
  int d = static_cast<int>(generators.size());
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (dot(generators[static_cast<std::size_t>(i)], generators[static_cast<std::size_t>(j)]) < -1e-12)
        throw precondition_violation("chamber_transfer: generators with negative inner product");
  ChamberTransfer out;
  out.phi_inv = Mat::from_columns(generators);
  if (!invert(out.phi_inv, out.phi)) throw precondition_violation("chamber_transfer: dependent generators");
  out.gram = Mat(d, d);
  out.min_certificate = std::numeric_limits<double>::infinity();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      out.gram(i, j) = dot(generators[static_cast<std::size_t>(i)], generators[static_cast<std::size_t>(j)]);
      out.min_certificate = std::min(out.min_certificate, out.gram(i, j));
    }
  return out;
}

// K cap W for the chamber W = {x : <x,u_i> >= 0}; vertices only (the origin
// sits on the boundary, so this stays outside the Body invariants).
inline std::vector<Vec> chamber_section_vertices(const Body& K, const RootSystem& rs) {
  const PolytopeData* pd = K.as_polytope();
  if (!pd) throw unsupported_operation("chamber section: polytope required");
  std::vector<Halfspace> hs = pd->halfspaces;
  for (const Vec& u : rs.roots) hs.push_back({-1.0 * u, 0.0});
  return geom::enumerate_vertices(hs, pd->n);
}

// Checks invariance of K under the chamber's wall reflections on sampled
// support values.
inline bool is_invariant_under(const Body& K, const std::vector<Vec>& roots, int samples = 64,
                               double tol = 1e-9) {
  auto dirs = sphere_grid(K.dim(), samples);
  for (const Vec& r : roots) {
    Mat R = reflection_matrix(r);
    for (const Vec& u : dirs) {
      double a = K.support(u), b = K.support(mat_vec(R, u));
      if (std::fabs(a - b) > tol * std::max(1.0, std::fabs(a))) return false;
    }
  }
  return true;
}

// The unconditional body with K~ cap orthant = Phi(W cap K).
inline Body unconditionalize(const Body& K, const RootSystem& rs, const ChamberTransfer& ct) {
  if (!is_invariant_under(K, rs.roots))
    throw precondition_violation("unconditionalize: body is not invariant under the chamber walls");
  std::vector<Vec> section = chamber_section_vertices(K, rs);
  std::vector<Vec> mapped;
  mapped.reserve(section.size());
  for (const Vec& v : section) mapped.push_back(mat_vec(ct.phi, v));
  return detail::unconditional_from_orthant_cloud(std::move(mapped), K.dim());
}

// ---------------------------------------------------------------------------
// Invariant subspaces and John radii
// ---------------------------------------------------------------------------

// Connected components of the root graph (edges where <r_i,r_j> != 0) give
// the irreducible invariant subspaces; any orthogonal complement is appended
// as fixed one-dimensional factors.
inline std::vector<std::vector<Vec>> invariant_subspaces(const std::vector<Vec>& roots) {
  int n = roots.empty() ? 0 : static_cast<int>(roots[0].size());
  int m = static_cast<int>(roots.size());
  std::vector<int> comp(static_cast<std::size_t>(m), -1);
  int ncomp = 0;
  for (int i = 0; i < m; ++i) {
    if (comp[static_cast<std::size_t>(i)] >= 0) continue;
    std::vector<int> stack{i};
    comp[static_cast<std::size_t>(i)] = ncomp;
    while (!stack.empty()) {
      int a = stack.back();
      stack.pop_back();
      for (int b = 0; b < m; ++b)
        if (comp[static_cast<std::size_t>(b)] < 0 &&
            std::fabs(dot(roots[static_cast<std::size_t>(a)], roots[static_cast<std::size_t>(b)])) > 1e-10) {
          comp[static_cast<std::size_t>(b)] = ncomp;
          stack.push_back(b);
        }
    }
    ++ncomp;
  }
  std::vector<std::vector<Vec>> bases;
  std::vector<Vec> all_basis;
  for (int c = 0; c < ncomp; ++c) {
    std::vector<Vec> group;
    for (int i = 0; i < m; ++i)
      if (comp[static_cast<std::size_t>(i)] == c) group.push_back(roots[static_cast<std::size_t>(i)]);
    auto basis = orthonormal_basis(group);
    for (const Vec& b : basis) all_basis.push_back(b);
    bases.push_back(std::move(basis));
  }
  // orthogonal complement: fixed directions, one-dimensional each
  auto full = complete_basis(all_basis, n);
  for (std::size_t k = all_basis.size(); k < full.size(); ++k) bases.push_back({full[k]});
  return bases;
}

// Largest r with r (unit ball of the subspace) inside K. Polytopes evaluate
// the facet formula; oracles bisect on membership of sampled sphere points.
inline std::vector<double> john_radii(const Body& K, const std::vector<std::vector<Vec>>& subspaces) {
  std::vector<double> radii;
  const PolytopeData* pd = K.as_polytope();
  for (const auto& basis : subspaces) {
    if (pd) {
      double r = std::numeric_limits<double>::infinity();
      for (const auto& h : pd->halfspaces) {
        double proj = 0.0;
        for (const Vec& b : basis) proj += dot(h.u, b) * dot(h.u, b);
        proj = std::sqrt(proj);
        if (proj > 1e-12) r = std::min(r, h.b / proj);
      }
      radii.push_back(r);
      continue;
    }
    int dsub = static_cast<int>(basis.size());
    auto dirs = sphere_grid(dsub, 256);
    double lo = 0.0, hi = norm(K.bounding_halfwidths()) + 1.0;
    for (int it = 0; it < 50; ++it) {
      double mid = 0.5 * (lo + hi);
      bool inside = true;
      for (const Vec& c : dirs) {
        Vec x(static_cast<std::size_t>(K.dim()), 0.0);
        for (int k = 0; k < dsub; ++k)
          for (std::size_t i = 0; i < x.size(); ++i)
            x[i] += mid * c[static_cast<std::size_t>(k)] * basis[static_cast<std::size_t>(k)][i];
        if (!K.contains(x)) {
          inside = false;
          break;
        }
      }
      (inside ? lo : hi) = mid;
    }
    radii.push_back(lo);
  }
  return radii;
}

}  // namespace logbm
