#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "logbm/errors.hpp"
#include "logbm/geometry.hpp"
#include "logbm/linalg.hpp"
#include "logbm/rng.hpp"

namespace logbm {

enum class BodyKind { Box, Cross, HPoly, VPoly, DirectSum, L0Sum, Product };

// Convex body interface. Implementations are immutable after construction and
// safe to share across threads.
class BodyImpl {
 public:
  virtual ~BodyImpl() = default;
  virtual int dim() const = 0;
  virtual BodyKind kind() const = 0;
  virtual double support(const Vec& u) const = 0;
  virtual bool contains(const Vec& x) const = 0;
  // Largest t with t*w inside the body, for any w != 0.
  virtual double radial_vec(const Vec& w) const = 0;
  virtual Vec bounding_halfwidths() const = 0;
  // Exact volume when the representation carries one, else -1.
  virtual double volume_hint() const { return -1.0; }
};

struct PolytopeData {
  int n = 0;
  std::vector<Halfspace> halfspaces;             // canonical form
  std::vector<Vec> vertices;                     // extreme points
  std::vector<std::vector<int>> facet_vertices;  // per halfspace
  double volume = 0.0;
  Vec box_halfwidths;  // nonempty iff the body is an axis box
};

class Body {
 public:
  Body() = default;
  explicit Body(std::shared_ptr<const BodyImpl> impl) : impl_(std::move(impl)) {}

  bool valid() const { return impl_ != nullptr; }
  int dim() const { return impl_->dim(); }
  BodyKind kind() const { return impl_->kind(); }
  double support(const Vec& u) const {
    if (static_cast<int>(u.size()) != dim()) throw invalid_parameter("support: dimension mismatch");
    return impl_->support(u);
  }
  bool contains(const Vec& x) const {
    if (static_cast<int>(x.size()) != dim()) throw invalid_parameter("contains: dimension mismatch");
    return impl_->contains(x);
  }
  double radial_vec(const Vec& w) const { return impl_->radial_vec(w); }
  double gauge(const Vec& x) const {
    double r = impl_->radial_vec(x);
    return r > 0 ? 1.0 / r : std::numeric_limits<double>::infinity();
  }
  Vec bounding_halfwidths() const { return impl_->bounding_halfwidths(); }
  double volume_hint() const { return impl_->volume_hint(); }
  const BodyImpl& impl() const { return *impl_; }
  std::shared_ptr<const BodyImpl> impl_ptr() const { return impl_; }

  const PolytopeData* as_polytope() const;

 private:
  std::shared_ptr<const BodyImpl> impl_;
};

// ---------------------------------------------------------------------------
// Polytopes
// ---------------------------------------------------------------------------

namespace detail {

inline bool lex_less(const Vec& a, const Vec& b, double tol = 1e-12) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i] - tol) return true;
    if (a[i] > b[i] + tol) return false;
  }
  return false;
}

}  // namespace detail

// Canonical halfspace form: unit normals, duplicates merged with the smaller
// offset, lexicographic order.
inline std::vector<Halfspace> canonicalize_halfspaces(std::vector<Halfspace> hs) {
  for (auto& h : hs) {
    double nu = norm(h.u);
    if (nu < 1e-14) throw invalid_parameter("zero halfspace normal");
    for (auto& c : h.u) c /= nu;
    h.b /= nu;
  }
  std::vector<Halfspace> merged;
  for (auto& h : hs) {
    bool dup = false;
    for (auto& g : merged) {
      if (norm(h.u - g.u) <= 1e-10) {
        g.b = std::min(g.b, h.b);
        dup = true;
        break;
      }
    }
    if (!dup) merged.push_back(h);
  }
  std::sort(merged.begin(), merged.end(),
            [](const Halfspace& a, const Halfspace& b) { return detail::lex_less(a.u, b.u); });
  return merged;
}

class PolytopeBody : public BodyImpl {
 public:
  PolytopeBody(PolytopeData data, BodyKind kind) : d_(std::move(data)), kind_(kind) {}

  int dim() const override { return d_.n; }
  BodyKind kind() const override { return kind_; }

  double support(const Vec& u) const override {
    double best = -std::numeric_limits<double>::infinity();
    for (const Vec& v : d_.vertices) best = std::max(best, dot(v, u));
    return best;
  }

  bool contains(const Vec& x) const override {
    for (const auto& h : d_.halfspaces)
      if (dot(x, h.u) > h.b + geom::kMembershipSlack) return false;
    return true;
  }

  double radial_vec(const Vec& w) const override {
    double g = 0.0;
    for (const auto& h : d_.halfspaces) g = std::max(g, dot(w, h.u) / h.b);
    return g > 0 ? 1.0 / g : std::numeric_limits<double>::infinity();
  }

  Vec bounding_halfwidths() const override {
    Vec r(static_cast<std::size_t>(d_.n), 0.0);
    for (const Vec& v : d_.vertices)
      for (int i = 0; i < d_.n; ++i)
        r[static_cast<std::size_t>(i)] = std::max(r[static_cast<std::size_t>(i)], std::fabs(v[static_cast<std::size_t>(i)]));
    return r;
  }

  double volume_hint() const override { return d_.volume; }
  const PolytopeData& data() const { return d_; }

 private:
  PolytopeData d_;
  BodyKind kind_;
};

inline const PolytopeData* Body::as_polytope() const {
  const auto* p = dynamic_cast<const PolytopeBody*>(impl_.get());
  return p ? &p->data() : nullptr;
}

namespace detail {

inline void check_origin_interior(const std::vector<Halfspace>& hs) {
  for (const auto& h : hs)
    if (h.b <= 0) throw invalid_parameter("origin not interior: nonpositive offset");
}

inline void check_bounded(const std::vector<Halfspace>& hs, int n) {
  auto dirs = sphere_grid(n, n <= 3 ? 512 : 4096);
  for (const Vec& d : dirs) {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& h : hs) m = std::max(m, dot(d, h.u));
    if (m <= 1e-9) throw invalid_parameter("halfspace normals do not positively span: unbounded body");
  }
}

inline std::vector<std::vector<int>> incidence(const std::vector<Halfspace>& hs,
                                               const std::vector<Vec>& verts) {
  double scale = 1.0;
  for (const Vec& v : verts) scale = std::max(scale, norm(v));
  std::vector<std::vector<int>> inc(hs.size());
  for (std::size_t f = 0; f < hs.size(); ++f)
    for (int i = 0; i < static_cast<int>(verts.size()); ++i)
      if (std::fabs(dot(verts[static_cast<std::size_t>(i)], hs[f].u) - hs[f].b) <= geom::kFacetTol * scale)
        inc[f].push_back(i);
  return inc;
}

inline double volume_from_incidence(const std::vector<Halfspace>& hs, const std::vector<Vec>& verts,
                                    const std::vector<std::vector<int>>& inc, int n) {
  double vol = 0.0;
  for (std::size_t f = 0; f < hs.size(); ++f) {
    if (static_cast<int>(inc[f].size()) < n) continue;
    std::vector<Vec> fp;
    fp.reserve(inc[f].size());
    for (int id : inc[f]) fp.push_back(verts[static_cast<std::size_t>(id)]);
    vol += hs[f].b * geom::facet_volume(fp, hs[f].u) / n;
  }
  return vol;
}

inline PolytopeData polytope_from_halfspaces(std::vector<Halfspace> hs, int n) {
  PolytopeData d;
  d.n = n;
  d.halfspaces = canonicalize_halfspaces(std::move(hs));
  check_origin_interior(d.halfspaces);
  check_bounded(d.halfspaces, n);
  d.vertices = geom::enumerate_vertices(d.halfspaces, n);
  if (d.vertices.empty()) throw invalid_parameter("empty polytope");
  auto inc = incidence(d.halfspaces, d.vertices);
  // prune redundant halfspaces (not supporting a full facet)
  std::vector<Halfspace> kept;
  std::vector<std::vector<int>> kept_inc;
  for (std::size_t f = 0; f < d.halfspaces.size(); ++f) {
    if (static_cast<int>(inc[f].size()) < n) continue;
    std::vector<Vec> fp;
    for (int id : inc[f]) fp.push_back(d.vertices[static_cast<std::size_t>(id)]);
    if (geom::affine_rank(fp) < n - 1) continue;
    kept.push_back(d.halfspaces[f]);
    kept_inc.push_back(inc[f]);
  }
  d.halfspaces = std::move(kept);
  d.facet_vertices = std::move(kept_inc);
  d.volume = volume_from_incidence(d.halfspaces, d.vertices, d.facet_vertices, n);
  return d;
}

inline PolytopeData polytope_from_vertices(std::vector<Vec> pts, int n) {
  double scale = 1.0;
  for (const Vec& p : pts) scale = std::max(scale, norm(p));
  geom::dedupe_points(pts, 1e-10 * scale);
  if (static_cast<int>(pts.size()) < n + 1) throw invalid_parameter("too few vertices");
  if (geom::affine_rank(pts) < n) throw invalid_parameter("vertex set is not full-dimensional");
  auto facets = geom::facets_of_points(pts);
  PolytopeData d;
  d.n = n;
  for (const auto& f : facets) {
    if (f.offset <= 0) throw invalid_parameter("origin not interior to vertex hull");
    d.halfspaces.push_back({f.unit_normal, f.offset});
  }
  d.halfspaces = canonicalize_halfspaces(std::move(d.halfspaces));
  // keep only extreme input points: those on at least n facets of full rank
  std::vector<Vec> verts;
  for (const Vec& p : pts) {
    std::vector<Vec> normals;
    for (const auto& h : d.halfspaces)
      if (std::fabs(dot(p, h.u) - h.b) <= geom::kFacetTol * scale) normals.push_back(h.u);
    if (static_cast<int>(normals.size()) >= n &&
        static_cast<int>(orthonormal_basis(normals).size()) == n)
      verts.push_back(p);
  }
  std::sort(verts.begin(), verts.end(), [](const Vec& a, const Vec& b) { return lex_less(a, b); });
  d.vertices = std::move(verts);
  d.facet_vertices = incidence(d.halfspaces, d.vertices);
  d.volume = volume_from_incidence(d.halfspaces, d.vertices, d.facet_vertices, n);
  return d;
}

}  // namespace detail

inline Body make_hpolytope(std::vector<Halfspace> hs, int n) {
  return Body(std::make_shared<PolytopeBody>(detail::polytope_from_halfspaces(std::move(hs), n),
                                             BodyKind::HPoly));
}

inline Body make_vpolytope(std::vector<Vec> pts, int n) {
  return Body(std::make_shared<PolytopeBody>(detail::polytope_from_vertices(std::move(pts), n),
                                             BodyKind::VPoly));
}

// Axis box with the given halfwidths; volume is the product of side lengths.
inline Body make_box(const Vec& halfwidths) {
  int n = static_cast<int>(halfwidths.size());
  if (n == 0) throw invalid_parameter("make_box: empty halfwidths");
  for (double a : halfwidths)
    if (!(a > 0)) throw invalid_parameter("make_box: halfwidths must be positive");
  PolytopeData d;
  d.n = n;
  for (int i = 0; i < n; ++i) {
    d.halfspaces.push_back({unit_axis(n, i, -1.0), halfwidths[static_cast<std::size_t>(i)]});
    d.halfspaces.push_back({unit_axis(n, i, 1.0), halfwidths[static_cast<std::size_t>(i)]});
  }
  d.halfspaces = canonicalize_halfspaces(std::move(d.halfspaces));
  d.volume = 1.0;
  for (double a : halfwidths) d.volume *= 2.0 * a;
  for (int mask = 0; mask < (1 << n); ++mask) {
    Vec v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      v[static_cast<std::size_t>(i)] = (mask >> i & 1) ? halfwidths[static_cast<std::size_t>(i)]
                                                       : -halfwidths[static_cast<std::size_t>(i)];
    d.vertices.push_back(std::move(v));
  }
  std::sort(d.vertices.begin(), d.vertices.end(),
            [](const Vec& a, const Vec& b) { return detail::lex_less(a, b); });
  d.facet_vertices = detail::incidence(d.halfspaces, d.vertices);
  d.box_halfwidths = halfwidths;
  return Body(std::make_shared<PolytopeBody>(std::move(d), BodyKind::Box));
}

// Cross polytope conv{±scale_i e_i}; volume 2^n prod(scale)/n!.
inline Body make_cross(const Vec& scales) {
  int n = static_cast<int>(scales.size());
  if (n == 0) throw invalid_parameter("make_cross: empty scales");
  for (double s : scales)
    if (!(s > 0)) throw invalid_parameter("make_cross: scales must be positive");
  PolytopeData d;
  d.n = n;
  for (int i = 0; i < n; ++i) {
    d.vertices.push_back(unit_axis(n, i, scales[static_cast<std::size_t>(i)]));
    d.vertices.push_back(unit_axis(n, i, -scales[static_cast<std::size_t>(i)]));
  }
  std::sort(d.vertices.begin(), d.vertices.end(),
            [](const Vec& a, const Vec& b) { return detail::lex_less(a, b); });
  for (int mask = 0; mask < (1 << n); ++mask) {
    Vec u(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      u[static_cast<std::size_t>(i)] =
          ((mask >> i & 1) ? 1.0 : -1.0) / scales[static_cast<std::size_t>(i)];
    double nu = norm(u);
    for (auto& c : u) c /= nu;
    d.halfspaces.push_back({std::move(u), 1.0 / nu});
  }
  d.halfspaces = canonicalize_halfspaces(std::move(d.halfspaces));
  d.volume = 1.0;
  for (double s : scales) d.volume *= 2.0 * s;
  for (int k = 2; k <= n; ++k) d.volume /= k;
  d.facet_vertices = detail::incidence(d.halfspaces, d.vertices);
  return Body(std::make_shared<PolytopeBody>(std::move(d), BodyKind::Cross));
}

// Box with every corner cut by <x, sign> <= sum(halfwidths) - depth.
inline Body cut_corners(const Body& box, double depth) {
  const PolytopeData* pd = box.as_polytope();
  if (!pd || pd->box_halfwidths.empty())
    throw invalid_parameter("cut_corners: input must be an axis box");
  const Vec& a = pd->box_halfwidths;
  int n = pd->n;
  double amin = *std::min_element(a.begin(), a.end());
  double asum = 0.0;
  for (double ai : a) asum += ai;
  if (!(depth > 0) || depth > amin) throw invalid_parameter("cut_corners: depth out of (0, min halfwidth]");
  std::vector<Halfspace> hs = pd->halfspaces;
  for (int mask = 0; mask < (1 << n); ++mask) {
    Vec u(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) u[static_cast<std::size_t>(i)] = (mask >> i & 1) ? 1.0 : -1.0;
    hs.push_back({std::move(u), asum - depth});
  }
  return make_hpolytope(std::move(hs), n);
}

// Intersection of two polytopes with a common interior origin.
inline Body intersect_polytopes(const Body& A, const Body& B) {
  const PolytopeData* pa = A.as_polytope();
  const PolytopeData* pb = B.as_polytope();
  if (!pa || !pb) throw unsupported_operation("intersect: polytope bodies required");
  if (pa->n != pb->n) throw invalid_parameter("intersect: dimension mismatch");
  std::vector<Halfspace> hs = pa->halfspaces;
  hs.insert(hs.end(), pb->halfspaces.begin(), pb->halfspaces.end());
  return make_hpolytope(std::move(hs), pa->n);
}

// ---------------------------------------------------------------------------
// Direct sums
// ---------------------------------------------------------------------------

class DirectSumBody : public BodyImpl {
 public:
  DirectSumBody(std::vector<std::pair<Body, std::vector<int>>> parts, int n)
      : parts_(std::move(parts)), n_(n) {
    std::vector<int> seen(static_cast<std::size_t>(n), 0);
    for (const auto& [body, idx] : parts_) {
      if (static_cast<int>(idx.size()) != body.dim())
        throw invalid_parameter("direct_sum: part dimension mismatch");
      for (int i : idx) {
        if (i < 0 || i >= n || seen[static_cast<std::size_t>(i)]++)
          throw invalid_parameter("direct_sum: coordinate sets must partition the dimensions");
      }
    }
    for (int s : seen)
      if (!s) throw invalid_parameter("direct_sum: coordinate sets must cover all dimensions");
  }

  int dim() const override { return n_; }
  BodyKind kind() const override { return BodyKind::DirectSum; }

  double support(const Vec& u) const override {
    double s = 0.0;
    for (const auto& [body, idx] : parts_) s += body.support(restrict(u, idx));
    return s;
  }

  bool contains(const Vec& x) const override {
    for (const auto& [body, idx] : parts_)
      if (!body.contains(restrict(x, idx))) return false;
    return true;
  }

  double radial_vec(const Vec& w) const override {
    double t = std::numeric_limits<double>::infinity();
    for (const auto& [body, idx] : parts_) {
      Vec wr = restrict(w, idx);
      if (norm(wr) < 1e-15) continue;
      t = std::min(t, body.radial_vec(wr));
    }
    return t;
  }

  Vec bounding_halfwidths() const override {
    Vec r(static_cast<std::size_t>(n_), 0.0);
    for (const auto& [body, idx] : parts_) {
      Vec hw = body.bounding_halfwidths();
      for (std::size_t j = 0; j < idx.size(); ++j) r[static_cast<std::size_t>(idx[j])] = hw[j];
    }
    return r;
  }

  double volume_hint() const override {
    double v = 1.0;
    for (const auto& [body, idx] : parts_) {
      double h = body.volume_hint();
      if (h < 0) return -1.0;
      v *= h;
    }
    return v;
  }

  const std::vector<std::pair<Body, std::vector<int>>>& parts() const { return parts_; }

  static Vec restrict(const Vec& x, const std::vector<int>& idx) {
    Vec r(idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j) r[j] = x[static_cast<std::size_t>(idx[j])];
    return r;
  }

 private:
  std::vector<std::pair<Body, std::vector<int>>> parts_;
  int n_;
};

inline Body direct_sum(std::vector<std::pair<Body, std::vector<int>>> parts) {
  int n = 0;
  for (const auto& [body, idx] : parts) n += static_cast<int>(idx.size());
  return Body(std::make_shared<DirectSumBody>(std::move(parts), n));
}

// ---------------------------------------------------------------------------
// Linear images and symmetry checks
// ---------------------------------------------------------------------------

inline Body linear_image(const Body& body, const Mat& A) {
  int n = body.dim();
  if (A.rows != n || A.cols != n) throw invalid_parameter("linear_image: matrix dimension mismatch");
  double det = determinant(A);
  if (std::fabs(det) < 1e-12) throw invalid_parameter("linear_image: singular matrix");
  const PolytopeData* pd = body.as_polytope();
  if (!pd) throw unsupported_operation("linear_image: oracle bodies transform through their generators");

  bool diagonal = true;
  for (int i = 0; i < n && diagonal; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && A(i, j) != 0.0) {
        diagonal = false;
        break;
      }
  if (!pd->box_halfwidths.empty() && diagonal) {
    Vec hw = pd->box_halfwidths;
    for (int i = 0; i < n; ++i) hw[static_cast<std::size_t>(i)] *= std::fabs(A(i, i));
    return make_box(hw);
  }

  Mat Ainv;
  if (!invert(A, Ainv)) throw invalid_parameter("linear_image: singular matrix");
  Mat AinvT = Ainv.transposed();
  PolytopeData d;
  d.n = n;
  for (const auto& h : pd->halfspaces) {
    Vec u = mat_vec(AinvT, h.u);
    double nu = norm(u);
    for (auto& c : u) c /= nu;
    d.halfspaces.push_back({std::move(u), h.b / nu});
  }
  for (const Vec& v : pd->vertices) d.vertices.push_back(mat_vec(A, v));
  // canonical order with incidence preserved
  std::vector<int> order(d.halfspaces.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return detail::lex_less(d.halfspaces[static_cast<std::size_t>(a)].u,
                            d.halfspaces[static_cast<std::size_t>(b)].u);
  });
  std::vector<Halfspace> hs;
  std::vector<std::vector<int>> inc;
  for (int i : order) {
    hs.push_back(d.halfspaces[static_cast<std::size_t>(i)]);
    inc.push_back(pd->facet_vertices[static_cast<std::size_t>(i)]);
  }
  d.halfspaces = std::move(hs);
  d.facet_vertices = std::move(inc);
  d.volume = pd->volume * std::fabs(det);
  return Body(std::make_shared<PolytopeBody>(std::move(d), BodyKind::HPoly));
}

inline Body dilate(const Body& body, double s) {
  if (!(s > 0)) throw invalid_parameter("dilate: nonpositive factor");
  Mat A = Mat::identity(body.dim());
  for (int i = 0; i < body.dim(); ++i) A(i, i) = s;
  return linear_image(body, A);
}

inline bool is_origin_symmetric(const Body& body, int samples = 64, double tol = 1e-9) {
  auto dirs = sphere_grid(body.dim(), samples);
  for (const Vec& u : dirs) {
    double a = body.support(u), b = body.support(-1.0 * u);
    if (std::fabs(a - b) > tol * std::max(1.0, std::fabs(a))) return false;
  }
  return true;
}

inline bool is_unconditional(const Body& body, int samples = 64, double tol = 1e-9) {
  const PolytopeData* pd = body.as_polytope();
  if (pd) {
    // structural test: halfspace set closed under coordinate sign flips
    int n = pd->n;
    for (const auto& h : pd->halfspaces) {
      for (int i = 0; i < n; ++i) {
        if (std::fabs(h.u[static_cast<std::size_t>(i)]) < 1e-12) continue;
        Vec flipped = h.u;
        flipped[static_cast<std::size_t>(i)] *= -1.0;
        bool found = false;
        for (const auto& g : pd->halfspaces)
          if (norm(g.u - flipped) <= 1e-9 && std::fabs(g.b - h.b) <= tol * std::max(1.0, h.b)) {
            found = true;
            break;
          }
        if (!found) return false;
      }
    }
    return true;
  }
  auto dirs = sphere_grid(body.dim(), samples);
  Rng rng(12345);
  for (const Vec& u : dirs) {
    double base = body.support(u);
    Vec v = u;
    for (int k = 0; k < 2; ++k) {
      for (auto& c : v) c = (rng.uniform() < 0.5 ? -1.0 : 1.0) * std::fabs(c);
      if (std::fabs(body.support(v) - base) > tol * std::max(1.0, std::fabs(base))) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Unconditional closure
// ---------------------------------------------------------------------------

namespace detail {

// Builds the unconditional polytope whose positive-orthant part is the hull of
// the given orthant cloud. Volume and facets come from the orthant piece, so
// no full-dimensional enumeration over the sign orbit is needed.
inline Body unconditional_from_orthant_cloud(std::vector<Vec> cloud, int n) {
  for (auto& p : cloud)
    for (auto& c : p) c = std::max(c, 0.0);
  // include coordinate projections so the hull of the cloud is down-closed
  std::vector<Vec> pts;
  for (const Vec& p : cloud) {
    pts.push_back(p);
    for (int i = 0; i < n; ++i) {
      Vec q = p;
      q[static_cast<std::size_t>(i)] = 0.0;
      pts.push_back(std::move(q));
    }
  }
  pts.push_back(Vec(static_cast<std::size_t>(n), 0.0));
  double scale = 1.0;
  for (const Vec& p : pts) scale = std::max(scale, norm(p));
  geom::dedupe_points(pts, 1e-10 * scale);
  if (geom::affine_rank(pts) < n)
    throw invalid_parameter("unconditional closure: orthant piece is not full-dimensional");
  double pos_volume = geom::volume_of_points(pts);
  auto facets = geom::facets_of_points(pts);

  PolytopeData d;
  d.n = n;
  std::vector<Halfspace> outer;
  for (const auto& f : facets) {
    if (f.offset <= 1e-10 * scale) continue;  // coordinate facet through the origin
    Vec u = f.unit_normal;
    for (auto& c : u)
      if (c < 0) {
        if (c < -1e-7) throw precondition_violation("unconditional closure: outer facet with negative normal");
        c = 0.0;
      }
    outer.push_back({normalized(u), f.offset});
  }
  for (const auto& h : outer) {
    int nz = 0;
    std::vector<int> support_idx;
    for (int i = 0; i < n; ++i)
      if (h.u[static_cast<std::size_t>(i)] > 1e-12) {
        ++nz;
        support_idx.push_back(i);
      }
    int total = 1 << nz;
    for (int mask = 0; mask < total; ++mask) {
      Vec u = h.u;
      for (int j = 0; j < nz; ++j)
        if (mask >> j & 1) u[static_cast<std::size_t>(support_idx[static_cast<std::size_t>(j)])] *= -1.0;
      d.halfspaces.push_back({std::move(u), h.b});
    }
  }
  d.halfspaces = canonicalize_halfspaces(std::move(d.halfspaces));
  check_origin_interior(d.halfspaces);

  // vertices: sign orbit of extreme cloud points
  std::vector<Vec> vcand;
  for (const Vec& p : pts) {
    std::vector<int> nzidx;
    for (int i = 0; i < n; ++i)
      if (p[static_cast<std::size_t>(i)] > 1e-12 * scale) nzidx.push_back(i);
    int total = 1 << static_cast<int>(nzidx.size());
    for (int mask = 0; mask < total; ++mask) {
      Vec q = p;
      for (std::size_t j = 0; j < nzidx.size(); ++j)
        if (mask >> j & 1) q[static_cast<std::size_t>(nzidx[j])] *= -1.0;
      vcand.push_back(std::move(q));
    }
  }
  geom::dedupe_points(vcand, 1e-10 * scale);
  for (const Vec& p : vcand) {
    std::vector<Vec> normals;
    for (const auto& h : d.halfspaces) {
      if (dot(p, h.u) > h.b + geom::kFacetTol * scale) {
        normals.clear();
        break;
      }
      if (std::fabs(dot(p, h.u) - h.b) <= geom::kFacetTol * scale) normals.push_back(h.u);
    }
    if (static_cast<int>(normals.size()) >= n && static_cast<int>(orthonormal_basis(normals).size()) == n)
      d.vertices.push_back(p);
  }
  std::sort(d.vertices.begin(), d.vertices.end(),
            [](const Vec& a, const Vec& b) { return lex_less(a, b); });
  d.facet_vertices = incidence(d.halfspaces, d.vertices);
  d.volume = pos_volume * static_cast<double>(1 << n);
  return Body(std::make_shared<PolytopeBody>(std::move(d), BodyKind::HPoly));
}

}  // namespace detail

// Unconditional body whose positive-orthant part matches the input's; the
// input must be down-closed in the positive orthant.
inline Body unconditional_closure(const Body& body) {
  const PolytopeData* pd = body.as_polytope();
  if (!pd) throw unsupported_operation("unconditional_closure: polytope required");
  int n = pd->n;
  // orthant piece vertices
  std::vector<Halfspace> hs = pd->halfspaces;
  for (int i = 0; i < n; ++i) hs.push_back({unit_axis(n, i, -1.0), 0.0});
  std::vector<Vec> cloud = geom::enumerate_vertices(hs, n);
  if (cloud.empty()) throw invalid_parameter("unconditional_closure: empty orthant piece");

  // down-closedness spot check on the sampled boundary
  Rng rng(7130);
  auto dirs = orthant_grid(n, 64);
  for (const Vec& d : dirs) {
    double r = body.radial_vec(d);
    if (!std::isfinite(r) || r <= 0) continue;
    Vec x = (r * 0.999) * d;
    for (int k = 0; k < 2; ++k) {
      Vec y = x;
      for (auto& c : y) c *= rng.uniform();
      if (!body.contains(y))
        throw precondition_violation("unconditional_closure: body is not down-closed on the orthant");
    }
  }
  return detail::unconditional_from_orthant_cloud(std::move(cloud), n);
}

}  // namespace logbm
