#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "logbm/errors.hpp"
#include "logbm/linalg.hpp"

namespace logbm {

// Nonnegative density sampled at cell centers of a box grid (midpoint rule).
struct GridDensity {
  int dim = 1;
  Vec lo, hi;
  std::vector<int> res;
  std::vector<double> values;

  static GridDensity zeros(Vec lo_, Vec hi_, std::vector<int> res_) {
    GridDensity g;
    g.dim = static_cast<int>(lo_.size());
    g.lo = std::move(lo_);
    g.hi = std::move(hi_);
    g.res = std::move(res_);
    long long total = 1;
    for (int r : g.res) {
      if (r < 1) throw invalid_parameter("GridDensity: resolution must be positive");
      total *= r;
    }
    g.values.assign(static_cast<std::size_t>(total), 0.0);
    return g;
  }

  double step(int axis) const {
    return (hi[static_cast<std::size_t>(axis)] - lo[static_cast<std::size_t>(axis)]) /
           res[static_cast<std::size_t>(axis)];
  }

  double cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= step(a);
    return v;
  }

  long long cell_count() const { return static_cast<long long>(values.size()); }

  // row-major flattening, axis 0 slowest
  long long flatten(const std::vector<int>& idx) const {
    long long f = 0;
    for (int a = 0; a < dim; ++a) f = f * res[static_cast<std::size_t>(a)] + idx[static_cast<std::size_t>(a)];
    return f;
  }

  std::vector<int> unflatten(long long f) const {
    std::vector<int> idx(static_cast<std::size_t>(dim));
    for (int a = dim - 1; a >= 0; --a) {
      idx[static_cast<std::size_t>(a)] = static_cast<int>(f % res[static_cast<std::size_t>(a)]);
      f /= res[static_cast<std::size_t>(a)];
    }
    return idx;
  }

  Vec center(const std::vector<int>& idx) const {
    Vec x(static_cast<std::size_t>(dim));
    for (int a = 0; a < dim; ++a)
      x[static_cast<std::size_t>(a)] =
          lo[static_cast<std::size_t>(a)] + (idx[static_cast<std::size_t>(a)] + 0.5) * step(a);
    return x;
  }

  // floor-convention cell of a point; -1 when outside
  long long cell_of(const Vec& x) const {
    long long f = 0;
    for (int a = 0; a < dim; ++a) {
      double t = (x[static_cast<std::size_t>(a)] - lo[static_cast<std::size_t>(a)]) / step(a);
      int i = static_cast<int>(std::floor(t));
      if (i < 0 || i >= res[static_cast<std::size_t>(a)]) return -1;
      f = f * res[static_cast<std::size_t>(a)] + i;
    }
    return f;
  }

  double mass() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s * cell_volume();
  }

  double value_at(const Vec& x) const {
    long long c = cell_of(x);
    return c < 0 ? 0.0 : values[static_cast<std::size_t>(c)];
  }

  // discrete midpoint log-concavity along every axis, relative tolerance
  bool is_log_concave(double rel_tol = 1e-6) const {
    for (long long f = 0; f < cell_count(); ++f) {
      auto idx = unflatten(f);
      for (int a = 0; a < dim; ++a) {
        if (idx[static_cast<std::size_t>(a)] == 0 ||
            idx[static_cast<std::size_t>(a)] + 1 >= res[static_cast<std::size_t>(a)])
          continue;
        auto left = idx, right = idx;
        --left[static_cast<std::size_t>(a)];
        ++right[static_cast<std::size_t>(a)];
        double mid = values[static_cast<std::size_t>(f)];
        double prod = values[static_cast<std::size_t>(flatten(left))] *
                      values[static_cast<std::size_t>(flatten(right))];
        if (prod > mid * mid * (1.0 + rel_tol) + 1e-300) return false;
      }
    }
    return true;
  }
};

namespace detail {

inline GridDensity resample(const GridDensity& f, const std::vector<int>& res) {
  if (f.res == res) return f;
  GridDensity out = GridDensity::zeros(f.lo, f.hi, res);
  for (long long c = 0; c < out.cell_count(); ++c)
    out.values[static_cast<std::size_t>(c)] = f.value_at(out.center(out.unflatten(c)));
  return out;
}

}  // namespace detail

// h(z) = sup over grid pairs with (1-l)x + l y in z's cell of f(x)^{1-l} g(y)^l.
// Brute force over all cell pairs in 1D/2D; 3D seeds from stride-4 coarse pairs
// and refines the winning blocks.
inline GridDensity sup_convolution(const GridDensity& f_in, const GridDensity& g_in, double lambda) {
  if (f_in.dim != g_in.dim) throw invalid_parameter("sup_convolution: dimension mismatch");
  if (!(lambda > 0) || !(lambda < 1)) throw invalid_parameter("sup_convolution: lambda outside (0,1)");
  int d = f_in.dim;
  if (d > 3) throw unsupported_operation("sup_convolution: dimensions above 3 are out of scope");
  std::vector<int> res(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a)
    res[static_cast<std::size_t>(a)] =
        std::max(f_in.res[static_cast<std::size_t>(a)], g_in.res[static_cast<std::size_t>(a)]);
  GridDensity f = detail::resample(f_in, res);
  GridDensity g = detail::resample(g_in, res);
  Vec lo(static_cast<std::size_t>(d)), hi(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) {
    lo[static_cast<std::size_t>(a)] = (1.0 - lambda) * f.lo[static_cast<std::size_t>(a)] +
                                      lambda * g.lo[static_cast<std::size_t>(a)];
    hi[static_cast<std::size_t>(a)] = (1.0 - lambda) * f.hi[static_cast<std::size_t>(a)] +
                                      lambda * g.hi[static_cast<std::size_t>(a)];
  }
  GridDensity h = GridDensity::zeros(lo, hi, res);

  auto combine = [&](long long cf, long long cg) {
    double vf = f.values[static_cast<std::size_t>(cf)];
    double vg = g.values[static_cast<std::size_t>(cg)];
    if (vf <= 0.0 || vg <= 0.0) return;
    Vec x = f.center(f.unflatten(cf));
    Vec y = g.center(g.unflatten(cg));
    Vec z(x.size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = (1.0 - lambda) * x[i] + lambda * y[i];
    long long cz = h.cell_of(z);
    if (cz < 0) {
      // boundary roundoff: clamp into the closed domain
      for (int a = 0; a < d; ++a) {
        z[static_cast<std::size_t>(a)] = std::min(std::max(z[static_cast<std::size_t>(a)],
                                                           lo[static_cast<std::size_t>(a)] + 1e-12),
                                                  hi[static_cast<std::size_t>(a)] - 1e-12);
      }
      cz = h.cell_of(z);
      if (cz < 0) return;
    }
    double v = std::pow(vf, 1.0 - lambda) * std::pow(vg, lambda);
    double& slot = h.values[static_cast<std::size_t>(cz)];
    if (v > slot) slot = v;
  };

  if (d <= 2) {
    for (long long cf = 0; cf < f.cell_count(); ++cf) {
      if (f.values[static_cast<std::size_t>(cf)] <= 0.0) continue;
      for (long long cg = 0; cg < g.cell_count(); ++cg) combine(cf, cg);
    }
    return h;
  }

  // 3D: coarse pass on stride-4 representatives, then refine block pairs that
  // produced a winner
  const int stride = 4;
  std::vector<std::pair<long long, long long>> winners(h.values.size(), {-1, -1});
  auto coarse_combine = [&](long long cf, long long cg) {
    double vf = f.values[static_cast<std::size_t>(cf)];
    double vg = g.values[static_cast<std::size_t>(cg)];
    if (vf <= 0.0 || vg <= 0.0) return;
    Vec x = f.center(f.unflatten(cf));
    Vec y = g.center(g.unflatten(cg));
    Vec z(x.size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = (1.0 - lambda) * x[i] + lambda * y[i];
    long long cz = h.cell_of(z);
    if (cz < 0) return;
    double v = std::pow(vf, 1.0 - lambda) * std::pow(vg, lambda);
    if (v > h.values[static_cast<std::size_t>(cz)]) {
      h.values[static_cast<std::size_t>(cz)] = v;
      winners[static_cast<std::size_t>(cz)] = {cf, cg};
    }
  };
  std::vector<long long> reps_f, reps_g;
  for (long long c = 0; c < f.cell_count(); ++c) {
    auto idx = f.unflatten(c);
    bool rep = true;
    for (int a = 0; a < d; ++a)
      if (idx[static_cast<std::size_t>(a)] % stride != stride / 2) rep = false;
    if (rep) {
      reps_f.push_back(c);
      reps_g.push_back(c);
    }
  }
  for (long long cf : reps_f) {
    if (f.values[static_cast<std::size_t>(cf)] <= 0.0) continue;
    for (long long cg : reps_g) coarse_combine(cf, cg);
  }
  // refinement: all fine pairs inside the winning blocks of each output cell
  std::vector<std::pair<long long, long long>> snapshot = winners;
  for (std::size_t cz = 0; cz < snapshot.size(); ++cz) {
    auto [cf0, cg0] = snapshot[cz];
    if (cf0 < 0) continue;
    auto base_f = f.unflatten(cf0);
    auto base_g = g.unflatten(cg0);
    std::vector<int> fi(3), gi(3);
    for (int a0 = -stride / 2; a0 < stride / 2 + stride; ++a0)
      for (int a1 = -stride / 2; a1 < stride / 2 + stride; ++a1)
        for (int a2 = -stride / 2; a2 < stride / 2 + stride; ++a2) {
          fi[0] = base_f[0] + a0;
          fi[1] = base_f[1] + a1;
          fi[2] = base_f[2] + a2;
          bool ok = true;
          for (int a = 0; a < 3; ++a)
            if (fi[static_cast<std::size_t>(a)] < 0 ||
                fi[static_cast<std::size_t>(a)] >= f.res[static_cast<std::size_t>(a)])
              ok = false;
          if (!ok) continue;
          for (int b0 = -stride / 2; b0 < stride / 2 + stride; ++b0)
            for (int b1 = -stride / 2; b1 < stride / 2 + stride; ++b1)
              for (int b2 = -stride / 2; b2 < stride / 2 + stride; ++b2) {
                gi[0] = base_g[0] + b0;
                gi[1] = base_g[1] + b1;
                gi[2] = base_g[2] + b2;
                bool ok2 = true;
                for (int a = 0; a < 3; ++a)
                  if (gi[static_cast<std::size_t>(a)] < 0 ||
                      gi[static_cast<std::size_t>(a)] >= g.res[static_cast<std::size_t>(a)])
                    ok2 = false;
                if (!ok2) continue;
                combine(f.flatten(fi), g.flatten(gi));
              }
        }
  }
  return h;
}

// mass(h) / (mass(f)^{1-l} mass(g)^l) - 1; nonnegative up to grid error.
inline double pl_excess(const GridDensity& f, const GridDensity& g, double lambda) {
  double mf = f.mass(), mg = g.mass();
  if (!(mf > 0) || !(mg > 0)) throw invalid_parameter("pl_excess: zero mass");
  GridDensity h = sup_convolution(f, g, lambda);
  return h.mass() / (std::pow(mf, 1.0 - lambda) * std::pow(mg, lambda)) - 1.0;
}

struct ShiftFit {
  Vec shift;
  double distance = 0.0;
};

// Best shift w over the search grid minimizing int |f(x) - g(x+w)| dx.
inline ShiftFit pl_stability_distance(const GridDensity& f, const GridDensity& g,
                                      const std::vector<Vec>& shifts) {
  if (std::fabs(f.mass() - 1.0) > 1e-6 || std::fabs(g.mass() - 1.0) > 1e-6)
    throw precondition_violation("pl_stability_distance: probability-normalized inputs required");
  if (shifts.empty()) throw invalid_parameter("pl_stability_distance: empty shift grid");
  ShiftFit best;
  best.distance = std::numeric_limits<double>::infinity();
  double mg = g.mass();
  for (const Vec& w : shifts) {
    double inside = 0.0, covered = 0.0;
    for (long long c = 0; c < f.cell_count(); ++c) {
      Vec xw = f.center(f.unflatten(c)) + w;
      double gv = g.value_at(xw);
      inside += std::fabs(f.values[static_cast<std::size_t>(c)] - gv);
      covered += gv;
    }
    // g mass never reached by the shifted window counts fully
    double dist = f.cell_volume() * inside + std::max(0.0, mg - f.cell_volume() * covered);
    if (dist < best.distance) {
      best.distance = dist;
      best.shift = w;
    }
  }
  return best;
}

// Uniform 1D shift grid at cell granularity.
inline std::vector<Vec> default_shift_grid(const GridDensity& f, const GridDensity& g) {
  std::vector<Vec> shifts;
  if (f.dim == 1) {
    double lo = g.lo[0] - f.hi[0], hi = g.hi[0] - f.lo[0];
    double step = std::min(f.step(0), g.step(0));
    for (double w = lo; w <= hi; w += step) shifts.push_back({w});
    return shifts;
  }
  // multi-d: coarse axis-aligned grid
  std::vector<Vec> axes{Vec(static_cast<std::size_t>(f.dim), 0.0)};
  for (int a = 0; a < f.dim; ++a) {
    std::vector<Vec> next;
    double lo = g.lo[static_cast<std::size_t>(a)] - f.hi[static_cast<std::size_t>(a)];
    double hi = g.hi[static_cast<std::size_t>(a)] - f.lo[static_cast<std::size_t>(a)];
    int steps = 33;
    for (const Vec& base : axes)
      for (int k = 0; k < steps; ++k) {
        Vec w = base;
        w[static_cast<std::size_t>(a)] = lo + (hi - lo) * k / (steps - 1);
        next.push_back(std::move(w));
      }
    axes = std::move(next);
  }
  return axes;
}

}  // namespace logbm
