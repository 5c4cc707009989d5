#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "logbm/bodies.hpp"
#include "logbm/logops.hpp"
#include "logbm/rng.hpp"

namespace logbm {

struct MCEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  long long samples = 0;
  std::uint64_t seed = 0;
};

namespace detail {

constexpr long long kShardSize = 1 << 16;

inline int mc_workers() {
  if (const char* env = std::getenv("LOGBM_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 4;
}

// One accumulation call per shard (seeded seed + shard index); results merge
// in shard order, so the estimate does not depend on the worker count.
inline Accum sharded_mc(long long samples, std::uint64_t seed,
                        const std::function<void(Rng&, long long, Accum&)>& shard_fn) {
  long long shards = (samples + kShardSize - 1) / kShardSize;
  std::vector<Accum> acc(static_cast<std::size_t>(shards));
  int workers = static_cast<int>(std::min<long long>(mc_workers(), shards));
  std::atomic<long long> next{0};
  auto run = [&]() {
    while (true) {
      long long j = next.fetch_add(1);
      if (j >= shards) break;
      long long count = std::min(kShardSize, samples - j * kShardSize);
      Rng rng(seed + static_cast<std::uint64_t>(j));
      shard_fn(rng, count, acc[static_cast<std::size_t>(j)]);
    }
  };
  if (workers <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }
  Accum total;
  for (const Accum& a : acc) total.merge(a);
  return total;
}

}  // namespace detail

// Hit-rate volume estimate over the body's bounding box.
inline MCEstimate volume_mc(const Body& B, long long samples, std::uint64_t seed) {
  Vec hw = B.bounding_halfwidths();
  double box_vol = 1.0;
  for (double a : hw) box_vol *= 2.0 * a;
  Accum acc = detail::sharded_mc(samples, seed, [&](Rng& rng, long long count, Accum& a) {
    for (long long s = 0; s < count; ++s)
      a.add(B.contains(rng.point_in_box(hw)) ? box_vol : 0.0);
  });
  return {acc.mean, acc.stderr_of_mean(), acc.count, seed};
}

inline MCEstimate symm_diff_volume(const Body& A, const Body& B, long long samples,
                                   std::uint64_t seed) {
  if (A.dim() != B.dim()) throw invalid_parameter("symm_diff_volume: dimension mismatch");
  Vec ha = A.bounding_halfwidths(), hb = B.bounding_halfwidths();
  Vec hw(ha.size());
  for (std::size_t i = 0; i < hw.size(); ++i) hw[i] = std::max(ha[i], hb[i]);
  double box_vol = 1.0;
  for (double a : hw) box_vol *= 2.0 * a;
  Accum acc = detail::sharded_mc(samples, seed, [&](Rng& rng, long long count, Accum& a) {
    for (long long s = 0; s < count; ++s) {
      Vec x = rng.point_in_box(hw);
      a.add(A.contains(x) != B.contains(x) ? box_vol : 0.0);
    }
  });
  return {acc.mean, acc.stderr_of_mean(), acc.count, seed};
}

// Exact volume; available for polytope variants and their direct sums.
inline double volume_exact(const Body& P) {
  double v = P.volume_hint();
  if (v < 0) throw unsupported_operation("volume_exact: oracle body has no exact volume");
  return v;
}

// Exact symmetric-difference volume for polytopes sharing the interior origin.
inline double symm_diff_exact(const Body& A, const Body& B) {
  double v_int = volume_exact(intersect_polytopes(A, B));
  return volume_exact(A) + volume_exact(B) - 2.0 * v_int;
}

// Homothetic distance V(aK delta bC) of the volume-one normalizations, with
// the translation fixed at the origin, plus sigma = max volume ratio.
struct HomotheticDistance {
  double distance = 0.0;
  double sigma = 1.0;
  double stderr_ = 0.0;
};

inline HomotheticDistance homothetic_distance(const Body& K, const Body& C, long long samples = 0,
                                              std::uint64_t seed = 0) {
  int n = K.dim();
  double vk = K.volume_hint(), vc = C.volume_hint();
  if (vk <= 0) {
    if (samples <= 0) throw invalid_parameter("homothetic_distance: samples required for oracle body");
    vk = volume_mc(K, samples, seed).value;
  }
  if (vc <= 0) {
    if (samples <= 0) throw invalid_parameter("homothetic_distance: samples required for oracle body");
    vc = volume_mc(C, samples, seed + 1).value;
  }
  double alpha = std::pow(vk, -1.0 / n), beta = std::pow(vc, -1.0 / n);
  HomotheticDistance out;
  out.sigma = std::max(vc / vk, vk / vc);
  if (K.as_polytope() && C.as_polytope()) {
    out.distance = symm_diff_exact(dilate(K, alpha), dilate(C, beta));
    return out;
  }
  // oracle path: scale inside the membership tests
  Vec ha = K.bounding_halfwidths(), hb = C.bounding_halfwidths();
  Vec hw(ha.size());
  for (std::size_t i = 0; i < hw.size(); ++i) hw[i] = std::max(alpha * ha[i], beta * hb[i]);
  double box_vol = 1.0;
  for (double a : hw) box_vol *= 2.0 * a;
  Accum acc = detail::sharded_mc(samples, seed + 2, [&](Rng& rng, long long count, Accum& a) {
    for (long long s = 0; s < count; ++s) {
      Vec x = rng.point_in_box(hw);
      bool in_a = K.contains((1.0 / alpha) * x);
      bool in_b = C.contains((1.0 / beta) * x);
      a.add(in_a != in_b ? box_vol : 0.0);
    }
  });
  out.distance = acc.mean;
  out.stderr_ = acc.stderr_of_mean();
  return out;
}

// ---------------------------------------------------------------------------
// Surface-area and cone-volume measures
// ---------------------------------------------------------------------------

struct MeasureAtom {
  Vec unit_normal;
  double mass = 0.0;
};

struct FacetMeasure {
  std::vector<MeasureAtom> atoms;
  double total() const {
    double s = 0.0;
    for (const auto& a : atoms) s += a.mass;
    return s;
  }
};

using SurfaceAreaMeasure = FacetMeasure;
using ConeVolumeMeasure = FacetMeasure;

inline SurfaceAreaMeasure surface_area_measure(const Body& P) {
  const PolytopeData* pd = P.as_polytope();
  if (!pd) throw unsupported_operation("surface_area_measure: polytope required");
  SurfaceAreaMeasure m;
  for (std::size_t f = 0; f < pd->halfspaces.size(); ++f) {
    std::vector<Vec> fp;
    for (int id : pd->facet_vertices[f]) fp.push_back(pd->vertices[static_cast<std::size_t>(id)]);
    m.atoms.push_back({pd->halfspaces[f].u, geom::facet_volume(fp, pd->halfspaces[f].u)});
  }
  return m;
}

// Facet cone masses h_K(u) area(u) / n; they sum to the volume.
inline ConeVolumeMeasure cone_volume_measure(const Body& P) {
  const PolytopeData* pd = P.as_polytope();
  if (!pd) throw unsupported_operation("cone_volume_measure: polytope required");
  ConeVolumeMeasure m;
  SurfaceAreaMeasure s = surface_area_measure(P);
  for (std::size_t f = 0; f < s.atoms.size(); ++f)
    m.atoms.push_back({s.atoms[f].unit_normal, pd->halfspaces[f].b * s.atoms[f].mass / pd->n});
  return m;
}

// ---------------------------------------------------------------------------
// Inequality gaps
// ---------------------------------------------------------------------------

// int log(h_C/h_K) dV_K / V(K) - (1/n) log(V(C)/V(K)).
inline double log_minkowski_gap(const Body& K, const Body& C, double volume_c = -1.0) {
  const PolytopeData* pd = K.as_polytope();
  if (!pd) throw unsupported_operation("log_minkowski_gap: polytope K required");
  double vc = volume_c > 0 ? volume_c : C.volume_hint();
  if (vc <= 0) throw invalid_parameter("log_minkowski_gap: volume of C unavailable");
  ConeVolumeMeasure cone = cone_volume_measure(K);
  double vk = volume_exact(K);
  double s = 0.0;
  for (std::size_t f = 0; f < cone.atoms.size(); ++f) {
    double hk = pd->halfspaces[f].b;
    double hc = C.support(cone.atoms[f].unit_normal);
    if (!(hk > 0) || !(hc > 0)) throw invalid_parameter("log_minkowski_gap: zero support value");
    s += std::log(hc / hk) * cone.atoms[f].mass;
  }
  return s / vk - std::log(vc / vk) / pd->n;
}

// int h_C dS_K - int h_K dS_K with C rescaled to the volume of K.
inline double minkowski_gap(const Body& K, const Body& C, double volume_c = -1.0) {
  const PolytopeData* pd = K.as_polytope();
  if (!pd) throw unsupported_operation("minkowski_gap: polytope K required");
  double vk = volume_exact(K);
  double vc = volume_c > 0 ? volume_c : C.volume_hint();
  if (vc <= 0) throw invalid_parameter("minkowski_gap: volume of C unavailable");
  double scale = std::pow(vk / vc, 1.0 / pd->n);
  SurfaceAreaMeasure sa = surface_area_measure(K);
  double s = 0.0;
  for (std::size_t f = 0; f < sa.atoms.size(); ++f)
    s += (scale * C.support(sa.atoms[f].unit_normal) - pd->halfspaces[f].b) * sa.atoms[f].mass;
  return s;
}

// ---------------------------------------------------------------------------
// Minkowski sums (exact, n <= 3) and the Brunn-Minkowski gap
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::pair<int, int>> polytope_edges(const PolytopeData& pd) {
  std::vector<std::pair<int, int>> edges;
  int V = static_cast<int>(pd.vertices.size());
  std::vector<std::vector<int>> facets_of_vertex(static_cast<std::size_t>(V));
  for (int f = 0; f < static_cast<int>(pd.facet_vertices.size()); ++f)
    for (int id : pd.facet_vertices[static_cast<std::size_t>(f)])
      facets_of_vertex[static_cast<std::size_t>(id)].push_back(f);
  for (int a = 0; a < V; ++a)
    for (int b = a + 1; b < V; ++b) {
      int common = 0;
      for (int f : facets_of_vertex[static_cast<std::size_t>(a)])
        for (int g : facets_of_vertex[static_cast<std::size_t>(b)])
          if (f == g) ++common;
      if (common >= pd.n - 1) edges.emplace_back(a, b);
    }
  return edges;
}

inline std::vector<Vec> argmax_vertices(const PolytopeData& pd, const Vec& u) {
  double best = -std::numeric_limits<double>::infinity();
  for (const Vec& v : pd.vertices) best = std::max(best, dot(v, u));
  std::vector<Vec> out;
  double scale = std::max(1.0, std::fabs(best));
  for (const Vec& v : pd.vertices)
    if (dot(v, u) >= best - geom::kFacetTol * scale) out.push_back(v);
  return out;
}

}  // namespace detail

// Exact Minkowski sum of two polytopes with interior origin, n <= 3. Facet
// normals come from the two normal fans plus edge-pair cross products; each
// candidate is kept when the touching faces span an (n-1)-dimensional set.
inline Body minkowski_sum_polytope(const Body& A, const Body& B) {
  const PolytopeData* pa = A.as_polytope();
  const PolytopeData* pb = B.as_polytope();
  if (!pa || !pb) throw unsupported_operation("minkowski_sum: polytopes required");
  int n = pa->n;
  if (n > 3) throw unsupported_operation("minkowski_sum: supported for n <= 3");
  std::vector<Vec> candidates;
  for (const auto& h : pa->halfspaces) candidates.push_back(h.u);
  for (const auto& h : pb->halfspaces) candidates.push_back(h.u);
  if (n == 3) {
    auto ea = detail::polytope_edges(*pa);
    auto eb = detail::polytope_edges(*pb);
    auto cross3 = [](const Vec& a, const Vec& b) {
      return Vec{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
    };
    for (const auto& [a0, a1] : ea) {
      Vec da = pa->vertices[static_cast<std::size_t>(a1)] - pa->vertices[static_cast<std::size_t>(a0)];
      for (const auto& [b0, b1] : eb) {
        Vec db = pb->vertices[static_cast<std::size_t>(b1)] - pb->vertices[static_cast<std::size_t>(b0)];
        Vec u = cross3(da, db);
        if (norm(u) > 1e-12) {
          candidates.push_back(normalized(u));
          candidates.push_back(-1.0 * normalized(u));
        }
      }
    }
  }
  geom::dedupe_points(candidates, 1e-10);
  std::vector<Halfspace> hs;
  for (const Vec& u : candidates) {
    auto fa = detail::argmax_vertices(*pa, u);
    auto fb = detail::argmax_vertices(*pb, u);
    std::vector<Vec> diffs;
    for (std::size_t i = 1; i < fa.size(); ++i) diffs.push_back(fa[i] - fa[0]);
    for (std::size_t i = 1; i < fb.size(); ++i) diffs.push_back(fb[i] - fb[0]);
    int rank = diffs.empty() ? 0 : static_cast<int>(orthonormal_basis(diffs).size());
    if (rank >= n - 1) hs.push_back({u, A.support(u) + B.support(u)});
  }
  return make_hpolytope(std::move(hs), n);
}

// V(aK + bC)^{1/n} - a V(K)^{1/n} - b V(C)^{1/n}  (>= 0 by Brunn-Minkowski).
inline double bm_gap(const Body& K, const Body& C, double alpha, double beta) {
  if (!(alpha > 0) || !(beta > 0)) throw invalid_parameter("bm_gap: weights must be positive");
  int n = K.dim();
  Body sum = minkowski_sum_polytope(dilate(K, alpha), dilate(C, beta));
  return std::pow(volume_exact(sum), 1.0 / n) - alpha * std::pow(volume_exact(K), 1.0 / n) -
         beta * std::pow(volume_exact(C), 1.0 / n);
}

// ---------------------------------------------------------------------------
// The L0 interpolation curve phi(t) = V((1-t)K +_0 tC) and its derivative
// ---------------------------------------------------------------------------

// Exact-ish area of a planar Wulff shape by radial quadrature: the radial
// function of the Wulff body of f is the directional minimum of f(u)/<d,u>.
inline double wulff_area_2d(const std::function<double(const Vec&)>& f, int theta_grid = 4096,
                            int scan = 160) {
  const double pi = 3.14159265358979323846264338328;
  auto radial = [&](double theta) {
    Vec d{std::cos(theta), std::sin(theta)};
    double lo = theta - 0.5 * pi + 1e-7, hi = theta + 0.5 * pi - 1e-7;
    double best = std::numeric_limits<double>::infinity();
    double best_phi = theta;
    for (int k = 0; k <= scan; ++k) {
      double phi = lo + (hi - lo) * k / scan;
      Vec u{std::cos(phi), std::sin(phi)};
      double c = dot(d, u);
      if (c <= 1e-12) continue;
      double v = f(u) / c;
      if (v < best) {
        best = v;
        best_phi = phi;
      }
    }
    double wl = best_phi - (hi - lo) / scan, wh = best_phi + (hi - lo) / scan;
    for (int it = 0; it < 40; ++it) {
      double m1 = wl + (wh - wl) * 0.381966, m2 = wh - (wh - wl) * 0.381966;
      auto val = [&](double phi) {
        Vec u{std::cos(phi), std::sin(phi)};
        double c = dot(d, u);
        return c > 1e-12 ? f(u) / c : std::numeric_limits<double>::infinity();
      };
      if (val(m1) < val(m2))
        wh = m2;
      else
        wl = m1;
    }
    {
      double phi = 0.5 * (wl + wh);
      Vec u{std::cos(phi), std::sin(phi)};
      double c = dot(d, u);
      if (c > 1e-12) best = std::min(best, f(u) / c);
    }
    return best;
  };
  double area = 0.0;
  for (int k = 0; k < theta_grid; ++k) {
    double theta = 2.0 * pi * (k + 0.5) / theta_grid;
    double r = radial(theta);
    area += 0.5 * r * r * (2.0 * pi / theta_grid);
  }
  return area;
}

inline double l0_volume_quadrature_2d(const Body& K, const Body& C, double t, int theta_grid = 4096) {
  return wulff_area_2d(
      [&](const Vec& u) {
        return std::pow(K.support(u), 1.0 - t) * std::pow(C.support(u), t);
      },
      theta_grid);
}

struct CurvePoint {
  double t = 0.0;
  double volume = 0.0;
  double stderr_ = 0.0;
};

// Volumes of (1-t)K +_0 tC along a grid; exact where the L0 shortcut applies,
// Monte-Carlo otherwise with per-point derived seeds.
inline std::vector<CurvePoint> phi_curve(const Body& K, const Body& C, const std::vector<double>& ts,
                                         long long samples, std::uint64_t seed) {
  std::vector<CurvePoint> out;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    double t = ts[i];
    Body W = l0_sum(K, C, t);
    double hint = W.volume_hint();
    if (hint >= 0) {
      out.push_back({t, hint, 0.0});
    } else {
      MCEstimate e = volume_mc(W, samples, seed + 7919 * static_cast<std::uint64_t>(i));
      out.push_back({t, e.value, e.stderr_});
    }
  }
  return out;
}

struct PhiPrimeZero {
  double finite_difference = 0.0;  // d/dt log phi at 0, times V(K)
  double stderr_ = 0.0;
  double facet_formula = 0.0;  // n sum log(h_C/h_K) V_K(facet)
};

// phi'(0) both ways: a finite difference of log phi (Richardson h, h/2) and
// the facet sum n int log(h_C/h_K) dV_K. Planar polytope pairs integrate by
// quadrature; higher dimensions share samples across the t values so the
// difference noise stays small.
inline PhiPrimeZero phi_prime_zero(const Body& K, const Body& C, double h = 1e-3,
                                   long long samples = 1 << 20, std::uint64_t seed = 1) {
  const PolytopeData* pd = K.as_polytope();
  if (!pd) throw unsupported_operation("phi_prime_zero: polytope K required");
  int n = pd->n;
  double vk = volume_exact(K);
  PhiPrimeZero out;
  {
    ConeVolumeMeasure cone = cone_volume_measure(K);
    double s = 0.0;
    for (std::size_t f = 0; f < cone.atoms.size(); ++f)
      s += std::log(C.support(cone.atoms[f].unit_normal) / pd->halfspaces[f].b) * cone.atoms[f].mass;
    out.facet_formula = n * s;
  }
  if (n == 2) {
    double v0 = l0_volume_quadrature_2d(K, C, 0.0);
    double v1 = l0_volume_quadrature_2d(K, C, h);
    double v2 = l0_volume_quadrature_2d(K, C, 0.5 * h);
    double d1 = (std::log(v1) - std::log(v0)) / h;
    double d2 = (std::log(v2) - std::log(v0)) / (0.5 * h);
    out.finite_difference = (2.0 * d2 - d1) * vk;
    out.stderr_ = 1e-4 * std::fabs(out.finite_difference) + 1e-7;
    return out;
  }
  Body Wh = l0_sum(K, C, h);
  Body Wh2 = l0_sum(K, C, 0.5 * h);
  Vec ha = K.bounding_halfwidths(), hb = C.bounding_halfwidths();
  Vec hw(ha.size());
  for (std::size_t i = 0; i < hw.size(); ++i) hw[i] = std::max(ha[i], hb[i]);
  // shared samples: indicators of the three bodies per point
  long long shards = (samples + detail::kShardSize - 1) / detail::kShardSize;
  std::vector<Accum> a0(static_cast<std::size_t>(shards)), d1(static_cast<std::size_t>(shards)),
      d2(static_cast<std::size_t>(shards));
  for (long long j = 0; j < shards; ++j) {
    long long count = std::min(detail::kShardSize, samples - j * detail::kShardSize);
    Rng rng(seed + static_cast<std::uint64_t>(j));
    for (long long s = 0; s < count; ++s) {
      Vec x = rng.point_in_box(hw);
      double i0 = K.contains(x) ? 1.0 : 0.0;
      double ih = Wh.contains(x) ? 1.0 : 0.0;
      double ih2 = Wh2.contains(x) ? 1.0 : 0.0;
      a0[static_cast<std::size_t>(j)].add(i0);
      d1[static_cast<std::size_t>(j)].add(ih - i0);
      d2[static_cast<std::size_t>(j)].add(ih2 - i0);
    }
  }
  Accum A0, D1, D2;
  for (long long j = 0; j < shards; ++j) {
    A0.merge(a0[static_cast<std::size_t>(j)]);
    D1.merge(d1[static_cast<std::size_t>(j)]);
    D2.merge(d2[static_cast<std::size_t>(j)]);
  }
  double p0 = A0.mean;
  if (p0 <= 0) throw invalid_parameter("phi_prime_zero: no hits on K");
  double fd1 = std::log1p(D1.mean / p0) / h * vk;
  double fd2 = std::log1p(D2.mean / p0) / (0.5 * h) * vk;
  out.finite_difference = 2.0 * fd2 - fd1;
  double s1 = D1.stderr_of_mean() / p0 / h * vk;
  double s2 = D2.stderr_of_mean() / p0 / (0.5 * h) * vk;
  out.stderr_ = 2.0 * s2 + s1;
  return out;
}

}  // namespace logbm
