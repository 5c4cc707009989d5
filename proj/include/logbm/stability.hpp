#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "logbm/bodies.hpp"
#include "logbm/coxeter.hpp"
#include "logbm/logops.hpp"
#include "logbm/measure.hpp"

namespace logbm {

// theta = 8 n^2 eps^{1/(5n)} / tau^{1/5}
inline double theta(double eps, double tau, int n) {
  if (!(eps > 0)) throw invalid_parameter("theta: eps must be positive");
  if (!(tau > 0) || tau > 0.5) throw invalid_parameter("theta: tau outside (0, 1/2]");
  return 8.0 * n * n * std::pow(eps, 1.0 / (5.0 * n)) / std::pow(tau, 0.2);
}

inline double stab_bound(double eps, double tau, int n, double c) {
  return std::pow(c, n) * std::pow(eps / tau, 1.0 / (95.0 * n));
}

inline double omega_lambda(double eps, double lambda, int n, double c) {
  return std::pow(c, n) * std::pow(static_cast<double>(n), n) *
         std::pow(eps / std::min(lambda, 1.0 - lambda), 1.0 / 19.0);
}

// Equivalence classes of indices whose entry ratios stay within exp(theta),
// closed transitively.
inline std::vector<std::vector<int>> bowtie_partition(const Vec& entries, double theta_value) {
  if (theta_value < 0) throw invalid_parameter("bowtie_partition: negative theta");
  int n = static_cast<int>(entries.size());
  for (double a : entries)
    if (!(a > 0)) throw invalid_parameter("bowtie_partition: entries must be positive");
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double r = std::fabs(std::log(entries[static_cast<std::size_t>(i)] / entries[static_cast<std::size_t>(j)]));
      if (r <= theta_value + 1e-15) {
        int a = find(i), b = find(j);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
      }
    }
  std::vector<std::vector<int>> blocks;
  std::vector<int> root_of(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    int r = find(i);
    if (root_of[static_cast<std::size_t>(r)] < 0) {
      root_of[static_cast<std::size_t>(r)] = static_cast<int>(blocks.size());
      blocks.emplace_back();
    }
    blocks[static_cast<std::size_t>(root_of[static_cast<std::size_t>(r)])].push_back(i);
  }
  return blocks;
}

namespace detail {

// Direct sums flatten into H-polytopes: the halfspaces are the embedded part
// halfspaces.
inline Body polytope_cast(const Body& B) {
  if (B.as_polytope()) return B;
  const auto* ds = dynamic_cast<const DirectSumBody*>(&B.impl());
  if (!ds) throw unsupported_operation("polytope_cast: oracle body");
  std::vector<Halfspace> hs;
  for (const auto& [part, idx] : ds->parts()) {
    Body p = polytope_cast(part);
    for (const auto& h : p.as_polytope()->halfspaces) {
      Vec u(static_cast<std::size_t>(B.dim()), 0.0);
      for (std::size_t j = 0; j < idx.size(); ++j) u[static_cast<std::size_t>(idx[j])] = h.u[j];
      hs.push_back({std::move(u), h.b});
    }
  }
  return make_hpolytope(std::move(hs), B.dim());
}

// Coordinate section K cap L_J as a polytope in the J coordinates.
inline Body coordinate_section(const Body& K, const std::vector<int>& J) {
  const PolytopeData* pd = K.as_polytope();
  if (!pd) return coordinate_section(polytope_cast(K), J);
  std::vector<Halfspace> hs;
  for (const auto& h : pd->halfspaces) {
    Vec u = DirectSumBody::restrict(h.u, J);
    if (norm(u) > 1e-12) hs.push_back({u, h.b});
  }
  return make_hpolytope(std::move(hs), static_cast<int>(J.size()));
}

}  // namespace detail

// Smallest s and dev with sA inside B inside (1+dev)sA, from sampled radial
// ratios plus both vertex direction sets.
struct DilateFit {
  double scale = 1.0;
  double dev = 0.0;
};

inline DilateFit dilate_fit(const Body& A, const Body& B, int samples = 4096) {
  if (A.dim() != B.dim()) throw invalid_parameter("dilate_fit: dimension mismatch");
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  auto probe = [&](const Vec& d) {
    double ra = A.radial_vec(d), rb = B.radial_vec(d);
    if (!std::isfinite(ra) || !std::isfinite(rb) || ra <= 0 || rb <= 0) return;
    double rho = rb / ra;
    lo = std::min(lo, rho);
    hi = std::max(hi, rho);
  };
  for (const Vec& d : sphere_grid(A.dim(), samples)) probe(d);
  if (const PolytopeData* pa = A.as_polytope())
    for (const Vec& v : pa->vertices) probe(normalized(v));
  if (const PolytopeData* pb = B.as_polytope())
    for (const Vec& v : pb->vertices) probe(normalized(v));
  DilateFit out;
  out.scale = lo;
  out.dev = std::max(0.0, hi / lo - 1.0);
  return out;
}

// Minimal delta with the direct sum of the coordinate sections inside
// (1+delta)K; extremes of the sum are probed at section-vertex combinations.
inline double decomposition_delta(const Body& K, const std::vector<std::vector<int>>& partition) {
  Body P = detail::polytope_cast(K);
  int n = P.dim();
  {
    std::vector<int> seen(static_cast<std::size_t>(n), 0);
    for (const auto& J : partition)
      for (int i : J) {
        if (i < 0 || i >= n || seen[static_cast<std::size_t>(i)]++)
          throw invalid_parameter("decomposition_delta: not a partition");
      }
    for (int s : seen)
      if (!s) throw invalid_parameter("decomposition_delta: not a partition");
  }
  std::vector<std::pair<Body, std::vector<int>>> parts;
  for (const auto& J : partition) parts.emplace_back(detail::coordinate_section(P, J), J);
  Body sum = direct_sum(parts);
  double worst = 0.0;
  auto probe = [&](const Vec& d) {
    double rs = sum.radial_vec(d);
    if (!std::isfinite(rs) || rs <= 0) return;
    worst = std::max(worst, P.gauge(rs * d));
  };
  for (const Vec& d : sphere_grid(n, 4096)) probe(d);
  // vertex combinations across blocks, capped
  std::vector<std::vector<Vec>> verts;
  long long combos = 1;
  for (const auto& [body, idx] : parts) {
    verts.push_back(body.as_polytope()->vertices);
    combos *= static_cast<long long>(verts.back().size());
    if (combos > 16384) break;
  }
  if (combos <= 16384 && verts.size() == parts.size()) {
    std::vector<std::size_t> pick(parts.size(), 0);
    while (true) {
      Vec x(static_cast<std::size_t>(n), 0.0);
      for (std::size_t p = 0; p < parts.size(); ++p) {
        const auto& idx = parts[p].second;
        const Vec& v = verts[p][pick[p]];
        for (std::size_t j = 0; j < idx.size(); ++j) x[static_cast<std::size_t>(idx[j])] = v[j];
      }
      worst = std::max(worst, P.gauge(x));
      std::size_t k = 0;
      while (k < pick.size() && ++pick[k] == verts[k].size()) {
        pick[k] = 0;
        ++k;
      }
      if (k == pick.size()) break;
    }
  }
  return std::max(0.0, worst - 1.0);
}

// ---------------------------------------------------------------------------
// Diagonal fitting
// ---------------------------------------------------------------------------

struct DiagonalFit {
  DiagonalMap phi{Vec{1.0}};
  double residual = 0.0;  // V((Phi K) delta C) / V(K)
  std::string status = "ok";
};

// Phi with Phi K close to C, minimizing the symmetric-difference volume over
// log entries by coordinate descent with a scan-plus-golden line search. The
// sample set is fixed up front, so the objective is deterministic in Phi and
// exactly zero on dilates.
inline DiagonalFit best_diagonal_fit(const Body& K, const Body& C, long long samples,
                                     std::uint64_t seed) {
  int n = K.dim();
  Vec x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double hk = K.support(unit_axis(n, i)), hc = C.support(unit_axis(n, i));
    if (!(hk > 0) || !(hc > 0)) throw invalid_parameter("best_diagonal_fit: degenerate axis support");
    x[static_cast<std::size_t>(i)] = std::log(hc / hk);
  }
  Vec hk_box = K.bounding_halfwidths(), hc_box = C.bounding_halfwidths();
  Vec hw(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    hw[static_cast<std::size_t>(i)] =
        std::max(hc_box[static_cast<std::size_t>(i)],
                 std::exp(x[static_cast<std::size_t>(i)] + 1.0) * hk_box[static_cast<std::size_t>(i)]);
  double box_vol = 1.0;
  for (double a : hw) box_vol *= 2.0 * a;

  long long N = std::max<long long>(samples, 4096);
  std::vector<Vec> pts;
  std::vector<char> in_c;
  pts.reserve(static_cast<std::size_t>(N));
  Rng rng(seed);
  for (long long s = 0; s < N; ++s) {
    Vec p = rng.point_in_box(hw);
    in_c.push_back(C.contains(p) ? 1 : 0);
    pts.push_back(std::move(p));
  }
  auto objective = [&](const Vec& logphi) {
    long long bad = 0;
    Vec q(static_cast<std::size_t>(n));
    for (std::size_t s = 0; s < pts.size(); ++s) {
      for (int i = 0; i < n; ++i)
        q[static_cast<std::size_t>(i)] =
            pts[s][static_cast<std::size_t>(i)] * std::exp(-logphi[static_cast<std::size_t>(i)]);
      if (K.contains(q) != static_cast<bool>(in_c[s])) ++bad;
    }
    return box_vol * static_cast<double>(bad) / static_cast<double>(N);
  };

  double cur = objective(x);
  double window = 0.7;
  for (int sweep = 0; sweep < 3 && cur > 0.0; ++sweep) {
    for (int i = 0; i < n; ++i) {
      double base = x[static_cast<std::size_t>(i)];
      double best_t = 0.0, best_v = cur;
      for (int k = -4; k <= 4; ++k) {
        if (k == 0) continue;
        double t = window * k / 4.0;
        Vec xx = x;
        xx[static_cast<std::size_t>(i)] = base + t;
        double v = objective(xx);
        if (v < best_v) {
          best_v = v;
          best_t = t;
        }
      }
      double lo = best_t - window / 4.0, hi = best_t + window / 4.0;
      for (int it = 0; it < 12; ++it) {
        double m1 = lo + (hi - lo) * 0.381966, m2 = hi - (hi - lo) * 0.381966;
        Vec x1 = x, x2 = x;
        x1[static_cast<std::size_t>(i)] = base + m1;
        x2[static_cast<std::size_t>(i)] = base + m2;
        if (objective(x1) < objective(x2))
          hi = m2;
        else
          lo = m1;
      }
      double t = 0.5 * (lo + hi);
      Vec xx = x;
      xx[static_cast<std::size_t>(i)] = base + t;
      double v = objective(xx);
      if (v < best_v) {
        best_v = v;
        best_t = t;
      }
      if (best_v < cur) {
        cur = best_v;
        x[static_cast<std::size_t>(i)] = base + best_t;
      }
    }
    window *= 0.4;
  }
  DiagonalFit out;
  Vec entries(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) entries[static_cast<std::size_t>(i)] = std::exp(x[static_cast<std::size_t>(i)]);
  out.phi = DiagonalMap(entries);
  double vk = K.volume_hint();
  if (vk <= 0) vk = volume_mc(K, N, seed + 7).value;
  out.residual = cur / vk;
  if (!std::isfinite(out.residual)) out.status = "diverged";
  return out;
}

// ---------------------------------------------------------------------------
// The stability pipeline
// ---------------------------------------------------------------------------

struct StabilityReport {
  int n = 0;
  double lambda = 0.5, tau = 0.5, c = 10.0;
  double epsilon = 0.0;
  double epsilon_sigma = 0.0;
  bool equality_case = false;
  Vec phi_entries;
  double fit_residual = 0.0;
  double theta_used = 0.0;
  std::vector<std::vector<int>> partition;
  Vec scales;
  double delta = 0.0;
  double bound = 0.0;
  double ratio = 0.0;  // delta / eps^{1/(95n)}
  std::string status = "ok";
};

struct StabilityOptions {
  long long samples = 1 << 17;
  std::uint64_t seed = 1;
  int refine_rounds = 1;
  double theta_floor = 1e-7;  // used in the equality-case branch
  int grid = 0;               // l0 direction grid override
};

inline StabilityReport stability_report(const Body& K_in, const Body& C_in, double lambda, double tau,
                                        double c, const StabilityOptions& opt = {},
                                        const RootSystem* rs = nullptr) {
  if (!(lambda > 0) || !(lambda < 1)) throw invalid_parameter("stability_report: lambda outside (0,1)");
  if (!(tau > 0) || tau > 0.5) throw invalid_parameter("stability_report: tau outside (0,1/2]");
  Body K = K_in, C = C_in;
  if (rs) {
    ChamberTransfer ct = chamber_transfer(rs->generators);
    K = unconditionalize(K_in, *rs, ct);
    C = unconditionalize(C_in, *rs, ct);
  }
  // the flattened polytopes drive intersections and sections; the originals
  // keep their direct-sum structure so the exact L0 shortcuts stay visible
  Body Kp = detail::polytope_cast(K);
  Body Cp = detail::polytope_cast(C);
  if (!is_unconditional(Kp) || !is_unconditional(Cp))
    throw precondition_violation("stability_report: unconditional bodies required (or supply a root system)");
  int n = K.dim();

  StabilityReport rep;
  rep.n = n;
  rep.lambda = lambda;
  rep.tau = tau;
  rep.c = c;

  double vk = volume_exact(Kp), vc = volume_exact(Cp);
  double denom = std::pow(vk, 1.0 - lambda) * std::pow(vc, lambda);
  Body W = l0_sum(K, C, lambda, opt.grid);
  double vw = W.volume_hint(), sw = 0.0;
  if (vw < 0) {
    MCEstimate e = volume_mc(W, opt.samples, opt.seed);
    vw = e.value;
    sw = e.stderr_;
  }
  rep.epsilon = vw / denom - 1.0;
  rep.epsilon_sigma = sw / denom;
  rep.equality_case = rep.epsilon <= 3.0 * rep.epsilon_sigma + 1e-12;

  DiagonalFit fit = best_diagonal_fit(Kp, Cp, opt.samples / 4, opt.seed + 101);
  Body M = intersect_polytopes(Kp, apply_diagonal(Cp, fit.phi.power(-1.0)));
  for (int round = 1; round < opt.refine_rounds + 1; ++round) {
    DiagonalFit refit = best_diagonal_fit(M, Cp, opt.samples / 4, opt.seed + 101 + static_cast<std::uint64_t>(round));
    if (refit.residual <= fit.residual + 1e-15) fit = refit;
    M = intersect_polytopes(Kp, apply_diagonal(Cp, fit.phi.power(-1.0)));
  }
  rep.phi_entries = fit.phi.entries;
  rep.fit_residual = fit.residual;
  if (fit.status != "ok") rep.status = fit.status;

  rep.theta_used = rep.equality_case ? opt.theta_floor
                                     : theta(std::max(rep.epsilon, 1e-300), tau, n);
  rep.partition = bowtie_partition(rep.phi_entries, rep.theta_used);

  // blockwise dilates and the decomposition containments
  double delta = decomposition_delta(M, rep.partition);
  std::vector<std::pair<Body, std::vector<int>>> parts;
  std::vector<std::pair<Body, std::vector<int>>> parts_scaled;
  for (const auto& J : rep.partition) {
    Body S = detail::coordinate_section(M, J);
    Vec phi_j = DirectSumBody::restrict(rep.phi_entries, J);
    Body PhiS = apply_diagonal(S, DiagonalMap(phi_j));
    DilateFit df = dilate_fit(S, PhiS);
    rep.scales.push_back(df.scale);
    delta = std::max(delta, df.dev);
    parts.emplace_back(S, J);
    parts_scaled.emplace_back(dilate(S, df.scale), J);
  }
  Body A = direct_sum(parts);
  Body B = direct_sum(parts_scaled);
  delta = std::max(delta, dilate_fit(A, Kp).dev);
  delta = std::max(delta, dilate_fit(B, Cp).dev);
  rep.delta = delta;
  rep.bound = stab_bound(std::max(rep.epsilon, 0.0), tau, n, c);
  rep.ratio = rep.epsilon > 0 ? rep.delta / std::pow(rep.epsilon, 1.0 / (95.0 * n)) : 0.0;
  return rep;
}

}  // namespace logbm
