#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <vector>

#include "logbm/bodies.hpp"
#include "logbm/lp.hpp"
#include "logbm/rng.hpp"

namespace logbm {

// Positive diagonal transformation with entrywise powers.
struct DiagonalMap {
  Vec entries;

  explicit DiagonalMap(Vec e) : entries(std::move(e)) {
    for (double t : entries)
      if (!(t > 0)) throw invalid_parameter("DiagonalMap: entries must be positive");
  }

  int dim() const { return static_cast<int>(entries.size()); }

  DiagonalMap power(double eta) const {
    Vec e(entries.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::pow(entries[i], eta);
    return DiagonalMap(std::move(e));
  }

  Vec apply(const Vec& x) const {
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = entries[i] * x[i];
    return r;
  }

  Vec apply_inverse(const Vec& x) const {
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] / entries[i];
    return r;
  }

  Mat matrix() const { return Mat::diagonal(entries); }

  double det() const {
    double d = 1.0;
    for (double t : entries) d *= t;
    return d;
  }
};

inline DiagonalMap diag_power(const DiagonalMap& T, double eta) { return T.power(eta); }

inline Body apply_diagonal(const Body& body, const DiagonalMap& T) {
  return linear_image(body, T.matrix());
}

// ---------------------------------------------------------------------------
// L0 (logarithmic) sum as a Wulff-shape oracle
// ---------------------------------------------------------------------------

inline int default_wulff_grid(int n) {
  switch (n) {
    case 1:
      return 2;
    case 2:
      return 2048;
    case 3:
      return 4096;
    default:
      return 8192;
  }
}


namespace detail {

// facet normals of polytope-backed bodies (direct sums included), used to pin
// the kink directions of support-function envelopes on direction grids
inline void collect_facet_normals(const Body& B, std::vector<Vec>& out) {
  if (const PolytopeData* pd = B.as_polytope()) {
    for (const auto& h : pd->halfspaces) out.push_back(h.u);
    return;
  }
  if (const auto* ds = dynamic_cast<const DirectSumBody*>(&B.impl())) {
    for (const auto& [part, idx] : ds->parts()) {
      std::vector<Vec> sub;
      collect_facet_normals(part, sub);
      for (const Vec& u : sub) {
        Vec e(static_cast<std::size_t>(B.dim()), 0.0);
        for (std::size_t j = 0; j < idx.size(); ++j) e[static_cast<std::size_t>(idx[j])] = u[j];
        out.push_back(normalized(e));
      }
    }
  }
}

}  // namespace detail

// The set {x : <x,u> <= h_K(u)^{1-l} h_C(u)^l for all u}. Membership evaluates
// the defining sup on a deterministic direction grid, then refines the top
// candidates by coordinate ascent on the sphere. Decisions outside the grid
// margin are certain; inside the margin the refined value decides.
class WulffBody : public BodyImpl {
 public:
  WulffBody(Body K, Body C, double lambda, int grid)
      : K_(std::move(K)), C_(std::move(C)), lambda_(lambda) {
    n_ = K_.dim();
    dirs_ = sphere_grid(n_, grid > 0 ? grid : default_wulff_grid(n_));
    detail::collect_facet_normals(K_, dirs_);
    detail::collect_facet_normals(C_, dirs_);
    f_.reserve(dirs_.size());
    flat_.reserve(dirs_.size() * static_cast<std::size_t>(n_));
    double fmin = std::numeric_limits<double>::infinity();
    for (const Vec& u : dirs_) {
      double v = envelope(u);
      f_.push_back(v);
      fmin = std::min(fmin, v);
      flat_.insert(flat_.end(), u.begin(), u.end());
    }
    f_min_ = fmin;
    // angular covering estimate: nearest-neighbour distance over a probe set
    auto probes = sphere_grid(n_, static_cast<int>(dirs_.size()) / 3 + 7);
    double cov = 0.0;
    for (const Vec& p : probes) {
      double best = std::numeric_limits<double>::infinity();
      for (const Vec& u : dirs_) best = std::min(best, norm(p - u));
      cov = std::max(cov, best);
    }
    covering_ = 1.5 * cov;
    // calibrated decision band: the observed gap between the grid envelope
    // and the refined sup along probe boundary directions
    double worst = 0.0;
    for (const Vec& d : sphere_grid(n_, 96)) {
      double r = std::numeric_limits<double>::infinity();
      for (std::size_t g = 0; g < dirs_.size(); ++g) {
        double c = dot(d, dirs_[g]);
        if (c > 1e-14) r = std::min(r, f_[g] / c);
      }
      if (!std::isfinite(r)) continue;
      Vec x = r * d;
      int top[4];
      top_indices(x, top);
      for (int k = 0; k < 4; ++k)
        if (top[k] >= 0) worst = std::max(worst, refine_max(x, dirs_[static_cast<std::size_t>(top[k])]));
    }
    band_ = 1.5 * worst + 1e-12;
    inner_scale_ = 1.0 - band_ / f_min_;
  }

  int dim() const override { return n_; }
  BodyKind kind() const override { return BodyKind::L0Sum; }

  double envelope(const Vec& u) const {
    return std::pow(K_.support(u), 1.0 - lambda_) * std::pow(C_.support(u), lambda_);
  }

  double support(const Vec& u) const override { return envelope(u); }

  bool contains(const Vec& x) const override {
    double xs = norm(x);
    if (xs == 0.0) return true;
    double slack = geom::kMembershipSlack * std::max(1.0, xs);
    double best = -std::numeric_limits<double>::infinity();
    const double* D = flat_.data();
    const double* xp = x.data();
    for (std::size_t g = 0; g < f_.size(); ++g) {
      double s = 0.0;
      for (int i = 0; i < n_; ++i) s += xp[i] * D[g * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i)];
      double v = s - f_[g];
      if (v > slack) return false;
      if (v > best) best = v;
    }
    if (best < -band_) return true;
    int top[4];
    top_indices(x, top);
    for (int k = 0; k < 4; ++k) {
      if (top[k] < 0) continue;
      if (refine_max(x, dirs_[static_cast<std::size_t>(top[k])]) > slack) return false;
    }
    return true;
  }

  double radial_vec(const Vec& w) const override {
    double best[4] = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                      std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    int idx[4] = {-1, -1, -1, -1};
    for (std::size_t g = 0; g < dirs_.size(); ++g) {
      double c = dot(w, dirs_[g]);
      if (c <= 1e-14) continue;
      double v = f_[g] / c;
      for (int k = 0; k < 4; ++k) {
        if (v < best[k]) {
          for (int j = 3; j > k; --j) {
            best[j] = best[j - 1];
            idx[j] = idx[j - 1];
          }
          best[k] = v;
          idx[k] = static_cast<int>(g);
          break;
        }
      }
    }
    double r = best[0];
    for (int k = 0; k < 4; ++k)
      if (idx[k] >= 0) r = std::min(r, refine_radial(w, dirs_[static_cast<std::size_t>(idx[k])]));
    return r;
  }

  Vec bounding_halfwidths() const override {
    Vec r(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) {
      double a = envelope(unit_axis(n_, i));
      double b = envelope(unit_axis(n_, i, -1.0));
      r[static_cast<std::size_t>(i)] = std::max(a, b);
    }
    return r;
  }

  const Body& left() const { return K_; }
  const Body& right() const { return C_; }
  double lambda() const { return lambda_; }
  int grid_size() const { return static_cast<int>(dirs_.size()); }
  double sandwich_inner_scale() const { return inner_scale_; }

 private:
  // four best grid directions for <x,u> - f(u)
  void top_indices(const Vec& x, int out[4]) const {
    double best[4] = {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
                      -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (int k = 0; k < 4; ++k) out[k] = -1;
    for (std::size_t g = 0; g < dirs_.size(); ++g) {
      double v = dot(x, dirs_[g]) - f_[g];
      for (int k = 0; k < 4; ++k) {
        if (v > best[k]) {
          for (int j = 3; j > k; --j) {
            best[j] = best[j - 1];
            out[j] = out[j - 1];
          }
          best[k] = v;
          out[k] = static_cast<int>(g);
          break;
        }
      }
    }
  }

  // coordinate ascent on the sphere for  <x,u> - f(u)
  double refine_max(const Vec& x, Vec u) const {
    auto value = [&](const Vec& v) { return dot(x, v) - envelope(v); };
    double cur = value(u);
    for (int sweep = 0; sweep < 2; ++sweep) {
      for (int i = 0; i < n_; ++i) {
        double lo = -2.0 * covering_, hi = 2.0 * covering_;
        for (int it = 0; it < 12; ++it) {
          double m1 = lo + (hi - lo) * 0.381966, m2 = hi - (hi - lo) * 0.381966;
          Vec u1 = u, u2 = u;
          u1[static_cast<std::size_t>(i)] += m1;
          u2[static_cast<std::size_t>(i)] += m2;
          if (value(normalized(u1)) > value(normalized(u2)))
            hi = m2;
          else
            lo = m1;
        }
        Vec cand = u;
        cand[static_cast<std::size_t>(i)] += 0.5 * (lo + hi);
        cand = normalized(cand);
        double cv = value(cand);
        if (cv > cur) {
          cur = cv;
          u = cand;
        }
      }
    }
    return cur;
  }

  // coordinate descent for  f(u)/<w,u>
  double refine_radial(const Vec& w, Vec u) const {
    auto value = [&](const Vec& v) {
      double c = dot(w, v);
      return c > 1e-14 ? envelope(v) / c : std::numeric_limits<double>::infinity();
    };
    double cur = value(u);
    for (int sweep = 0; sweep < 2; ++sweep) {
      for (int i = 0; i < n_; ++i) {
        double lo = -2.0 * covering_, hi = 2.0 * covering_;
        for (int it = 0; it < 12; ++it) {
          double m1 = lo + (hi - lo) * 0.381966, m2 = hi - (hi - lo) * 0.381966;
          Vec u1 = u, u2 = u;
          u1[static_cast<std::size_t>(i)] += m1;
          u2[static_cast<std::size_t>(i)] += m2;
          if (value(normalized(u1)) < value(normalized(u2)))
            hi = m2;
          else
            lo = m1;
        }
        Vec cand = u;
        cand[static_cast<std::size_t>(i)] += 0.5 * (lo + hi);
        cand = normalized(cand);
        double cv = value(cand);
        if (cv < cur) {
          cur = cv;
          u = cand;
        }
      }
    }
    return cur;
  }

  Body K_, C_;
  double lambda_;
  int n_ = 0;
  std::vector<Vec> dirs_;
  std::vector<double> f_;
  std::vector<double> flat_;
  double f_min_ = 0.0, covering_ = 0.0, band_ = 0.0, inner_scale_ = 0.0;
};

namespace detail {

// C = s*K detection through sampled support ratios.
inline bool detect_dilate(const Body& K, const Body& C, double& s_out) {
  auto dirs = sphere_grid(K.dim(), 48);
  double ratio = 0.0;
  for (const Vec& u : dirs) {
    double hk = K.support(u), hc = C.support(u);
    if (!(hk > 0) || !(hc > 0)) return false;
    double r = hc / hk;
    if (ratio == 0.0)
      ratio = r;
    else if (std::fabs(r - ratio) > 1e-10 * ratio)
      return false;
  }
  s_out = ratio;
  return true;
}

inline const DirectSumBody* as_direct_sum(const Body& b) {
  return dynamic_cast<const DirectSumBody*>(&b.impl());
}

}  // namespace detail

// (1-l)K +_0 lC. Exact for boxes, global dilates and direct sums of
// blockwise dilates; otherwise a Wulff-shape oracle over a direction grid.
inline Body l0_sum(const Body& K, const Body& C, double lambda, int grid = 0) {
  if (lambda < 0.0 || lambda > 1.0) throw invalid_parameter("l0_sum: lambda outside (0,1)");
  if (K.dim() != C.dim()) throw invalid_parameter("l0_sum: dimension mismatch");
  if (lambda == 0.0) return K;
  if (lambda == 1.0) return C;
  if (!is_origin_symmetric(K) || !is_origin_symmetric(C))
    throw precondition_violation("l0_sum: bodies must be origin-symmetric");

  const PolytopeData* pk = K.as_polytope();
  const PolytopeData* pc = C.as_polytope();
  if (pk && pc && !pk->box_halfwidths.empty() && !pc->box_halfwidths.empty()) {
    Vec hw(pk->box_halfwidths.size());
    for (std::size_t i = 0; i < hw.size(); ++i)
      hw[i] = std::pow(pk->box_halfwidths[i], 1.0 - lambda) * std::pow(pc->box_halfwidths[i], lambda);
    return make_box(hw);
  }
  double s = 0.0;
  if (detail::detect_dilate(K, C, s)) return dilate(K, std::pow(s, lambda));

  const auto* dk = detail::as_direct_sum(K);
  const auto* dc = detail::as_direct_sum(C);
  if (dk && dc && dk->parts().size() == dc->parts().size()) {
    bool match = true;
    std::vector<std::pair<Body, std::vector<int>>> parts;
    for (std::size_t p = 0; p < dk->parts().size() && match; ++p) {
      if (dk->parts()[p].second != dc->parts()[p].second) {
        match = false;
        break;
      }
      double sp = 0.0;
      if (!detail::detect_dilate(dk->parts()[p].first, dc->parts()[p].first, sp)) {
        match = false;
        break;
      }
      parts.emplace_back(dilate(dk->parts()[p].first, std::pow(sp, lambda)), dk->parts()[p].second);
    }
    if (match) return direct_sum(std::move(parts));
  }
  return Body(std::make_shared<WulffBody>(K, C, lambda, grid));
}

// ---------------------------------------------------------------------------
// Coordinatewise product of unconditional bodies
// ---------------------------------------------------------------------------

inline int default_product_grid(int n) { return n <= 2 ? 512 : (n == 3 ? 1024 : 4096); }
inline int default_product_cloud(int n) { return n <= 2 ? 192 : (n == 3 ? 768 : 2048); }

// Gauge resolution of the product oracle at default grids; membership
// comparisons against exact bodies should excuse a band of this width.
constexpr double kProductGaugeTol = 0.02;

// K^{1-l} C^l for unconditional polytopes. The positive parts are handled in
// logarithmic coordinates, where both bodies become convex down-closed sets:
// membership tests a cached support table of the Minkowski combination, and
// radial queries solve a small LP over boundary clouds, which keeps sampled
// boundary points certified inner points.
class ProductBody : public BodyImpl {
 public:
  ProductBody(Body K, Body C, double lambda, int grid = 0, int cloud = 0)
      : K_(std::move(K)), C_(std::move(C)), lambda_(lambda) {
    n_ = K_.dim();
    if (!K_.as_polytope() || !C_.as_polytope())
      throw unsupported_operation("coordinatewise product: polytope generators required");
    int G = grid > 0 ? grid : default_product_grid(n_);
    int N = cloud > 0 ? cloud : default_product_cloud(n_);

    std::vector<Vec> cloud_dirs;
    for (const Vec& d : orthant_grid(n_, N)) {
      double mn = *std::min_element(d.begin(), d.end());
      if (mn > 1e-8) cloud_dirs.push_back(d);
    }
    for (int i = 0; i < n_; ++i) {
      Vec d(static_cast<std::size_t>(n_), 1e-4);
      d[static_cast<std::size_t>(i)] = 1.0;
      cloud_dirs.push_back(normalized(d));
    }
    logA_ = log_cloud(K_, cloud_dirs);
    logB_ = log_cloud(C_, cloud_dirs);

    dirs_ = orthant_grid(n_, G);
    table_.reserve(dirs_.size());
    for (const Vec& u : dirs_)
      table_.push_back((1.0 - lambda_) * cloud_support(logA_, u) + lambda_ * cloud_support(logB_, u));
  }

  int dim() const override { return n_; }
  BodyKind kind() const override { return BodyKind::Product; }

  // Envelope bound (exact in the axis directions).
  double support(const Vec& u) const override {
    return std::pow(K_.support(u), 1.0 - lambda_) * std::pow(C_.support(u), lambda_);
  }

  bool contains(const Vec& x) const override {
    std::vector<int> zero, nonzero;
    for (int i = 0; i < n_; ++i)
      (std::fabs(x[static_cast<std::size_t>(i)]) == 0.0 ? zero : nonzero).push_back(i);
    if (!zero.empty()) {
      if (nonzero.empty()) return true;
      return face(nonzero).contains(DirectSumBody::restrict(x, nonzero));
    }
    Vec w(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) w[i] = std::log(std::fabs(x[i]));
    for (std::size_t g = 0; g < dirs_.size(); ++g)
      if (dot(w, dirs_[g]) > table_[g] + geom::kMembershipSlack) return false;
    return true;
  }

  double radial_vec(const Vec& wdir) const override {
    std::vector<int> zero, nonzero;
    for (int i = 0; i < n_; ++i)
      (std::fabs(wdir[static_cast<std::size_t>(i)]) == 0.0 ? zero : nonzero).push_back(i);
    if (!zero.empty()) {
      if (nonzero.empty()) return std::numeric_limits<double>::infinity();
      return face(nonzero).radial_vec(DirectSumBody::restrict(wdir, nonzero));
    }
    // certified inner candidates: the ray product point and the cloud LP
    double rk = K_.radial_vec(wdir), rc = C_.radial_vec(wdir);
    double r = std::pow(rk, 1.0 - lambda_) * std::pow(rc, lambda_);
    Vec w0(wdir.size());
    for (std::size_t i = 0; i < wdir.size(); ++i) w0[i] = std::log(std::fabs(wdir[i]));
    double s = inner_lp(w0);
    if (std::isfinite(s)) r = std::max(r, std::exp(s));
    return r;
  }

  Vec bounding_halfwidths() const override {
    Vec r(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) {
      Vec e = unit_axis(n_, i);
      r[static_cast<std::size_t>(i)] = support(e);
    }
    return r;
  }

  const Body& left() const { return K_; }
  const Body& right() const { return C_; }
  double lambda() const { return lambda_; }

 private:
  static std::vector<Vec> log_cloud(const Body& B, const std::vector<Vec>& dirs) {
    std::vector<Vec> pts;
    pts.reserve(dirs.size());
    for (const Vec& d : dirs) {
      double r = B.radial_vec(d);
      Vec w(d.size());
      for (std::size_t i = 0; i < d.size(); ++i) w[i] = std::log(r * d[i]);
      pts.push_back(std::move(w));
    }
    return pts;
  }

  static double cloud_support(const std::vector<Vec>& cloud, const Vec& u) {
    double best = -std::numeric_limits<double>::infinity();
    for (const Vec& p : cloud) best = std::max(best, dot(p, u));
    return best;
  }

  // max s with w0 + s*1 in (1-l)conv(A) + l conv(B) - R^n_{>=0}
  double inner_lp(const Vec& w0) const {
    int NA = static_cast<int>(logA_.size()), NB = static_cast<int>(logB_.size());
    int m = n_ + 2;
    int cols = NA + NB + n_ + 1;
    Mat A(m, cols);
    Vec b(static_cast<std::size_t>(m), 0.0), c(static_cast<std::size_t>(cols), 0.0);
    for (int j = 0; j < NA; ++j) {
      for (int i = 0; i < n_; ++i) A(i, j) = (1.0 - lambda_) * logA_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
      A(n_, j) = 1.0;
    }
    for (int j = 0; j < NB; ++j) {
      for (int i = 0; i < n_; ++i) A(i, NA + j) = lambda_ * logB_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
      A(n_ + 1, NA + j) = 1.0;
    }
    for (int i = 0; i < n_; ++i) A(i, NA + NB + i) = -1.0;  // slack
    // shifted objective variable s' = s + M >= 0
    double s0 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_; ++i)
      s0 = std::min(s0, (1.0 - lambda_) * logA_[0][static_cast<std::size_t>(i)] +
                            lambda_ * logB_[0][static_cast<std::size_t>(i)] - w0[static_cast<std::size_t>(i)]);
    double M = std::max(0.0, -s0) + 1.0;
    int scol = NA + NB + n_;
    for (int i = 0; i < n_; ++i) {
      A(i, scol) = -1.0;
      b[static_cast<std::size_t>(i)] = w0[static_cast<std::size_t>(i)] - M;
    }
    b[static_cast<std::size_t>(n_)] = 1.0;
    b[static_cast<std::size_t>(n_ + 1)] = 1.0;
    c[static_cast<std::size_t>(scol)] = 1.0;

    // starting basis: alpha_0, beta_0, s', and n-1 slacks
    int istar = 0;
    double sfeas = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_; ++i) {
      double v = (1.0 - lambda_) * logA_[0][static_cast<std::size_t>(i)] +
                 lambda_ * logB_[0][static_cast<std::size_t>(i)] - w0[static_cast<std::size_t>(i)];
      if (v < sfeas) {
        sfeas = v;
        istar = i;
      }
    }
    std::vector<int> basis = {0, NA, scol};
    for (int i = 0; i < n_; ++i)
      if (i != istar) basis.push_back(NA + NB + i);
    SimplexResult res = simplex_max(A, b, c, std::move(basis));
    if (!res.ok) return -std::numeric_limits<double>::infinity();
    return res.objective - M;
  }

  Body face(const std::vector<int>& keep) const {
    auto section = [&](const Body& B) {
      const PolytopeData* pd = B.as_polytope();
      std::vector<Halfspace> hs;
      for (const auto& h : pd->halfspaces) {
        Vec u = DirectSumBody::restrict(h.u, keep);
        if (norm(u) > 1e-12) hs.push_back({u, h.b});
      }
      return make_hpolytope(std::move(hs), static_cast<int>(keep.size()));
    };
    return Body(std::make_shared<ProductBody>(section(K_), section(C_), lambda_));
  }

  Body K_, C_;
  double lambda_;
  int n_ = 0;
  std::vector<Vec> logA_, logB_;
  std::vector<Vec> dirs_;
  std::vector<double> table_;
};

// K^{1-l} C^l for unconditional bodies; exact for box pairs.
inline Body coordinatewise_product(const Body& K, const Body& C, double lambda, int grid = 0,
                                   int cloud = 0) {
  if (lambda < 0.0 || lambda > 1.0) throw invalid_parameter("coordinatewise_product: lambda outside (0,1)");
  if (K.dim() != C.dim()) throw invalid_parameter("coordinatewise_product: dimension mismatch");
  if (lambda == 0.0) return K;
  if (lambda == 1.0) return C;
  if (!is_unconditional(K) || !is_unconditional(C))
    throw precondition_violation("coordinatewise_product: bodies must be unconditional");

  const PolytopeData* pk = K.as_polytope();
  const PolytopeData* pc = C.as_polytope();
  if (pk && pc && !pk->box_halfwidths.empty() && !pc->box_halfwidths.empty()) {
    Vec hw(pk->box_halfwidths.size());
    for (std::size_t i = 0; i < hw.size(); ++i)
      hw[i] = std::pow(pk->box_halfwidths[i], 1.0 - lambda) * std::pow(pc->box_halfwidths[i], lambda);
    return make_box(hw);
  }
  return Body(std::make_shared<ProductBody>(K, C, lambda, grid, cloud));
}

// ---------------------------------------------------------------------------
// Containment
// ---------------------------------------------------------------------------

struct ContainmentResult {
  bool contained = false;
  double worst_ratio = 0.0;
};

// Samples boundary points of `inner` and reports the largest dilation of
// `outer` needed to absorb them.
inline ContainmentResult containment_check(const Body& inner, const Body& outer, int samples,
                                           std::uint64_t seed) {
  if (inner.dim() != outer.dim()) throw invalid_parameter("containment_check: dimension mismatch");
  Rng rng(seed);
  double worst = 0.0;
  auto probe = [&](const Vec& d) {
    double ri = inner.radial_vec(d);
    if (!std::isfinite(ri) || ri <= 0) return;
    Vec x = ri * d;
    double ro = outer.radial_vec(x);
    if (!(ro > 0)) return;
    worst = std::max(worst, 1.0 / ro);
  };
  for (int s = 0; s < samples; ++s) probe(rng.unit_vector(inner.dim()));
  if (const PolytopeData* pd = inner.as_polytope())
    for (const Vec& v : pd->vertices) probe(normalized(v));
  return {worst <= 1.0 + 1e-7, worst};
}

}  // namespace logbm
