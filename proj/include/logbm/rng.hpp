#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "logbm/linalg.hpp"

namespace logbm {

// Deterministic RNG. Doubles are derived from raw mt19937_64 output directly,
// not through std distributions, so streams are identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Box-Muller; second value cached.
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  std::uint64_t integer(std::uint64_t bound) { return eng_() % bound; }

  Vec point_in_box(const Vec& halfwidths) {
    Vec x(halfwidths.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = uniform(-halfwidths[i], halfwidths[i]);
    return x;
  }

  Vec unit_vector(int n) {
    Vec v(static_cast<std::size_t>(n));
    double s = 0.0;
    do {
      for (auto& c : v) c = normal();
      s = norm(v);
    } while (s < 1e-12);
    for (auto& c : v) c /= s;
    return v;
  }

 private:
  std::mt19937_64 eng_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

namespace detail {

// Acklam-style rational approximation of the standard normal quantile,
// adequate for quasi-uniform direction grids.
inline double norm_quantile(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                             1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                             6.680131188771972e+01,  -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                             -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                             3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1 - plow;
  if (p < plow) {
    double q = std::sqrt(-2 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  if (p > phigh) {
    double q = std::sqrt(-2 * std::log(1 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  double q = p - 0.5, r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}

}  // namespace detail

// Deterministic quasi-uniform grid of unit directions: equal angles for n = 2,
// a Fibonacci spiral for n = 3 and a Weyl lattice pushed through the normal
// quantile for higher dimensions.
inline std::vector<Vec> sphere_grid(int n, int count) {
  std::vector<Vec> dirs;
  dirs.reserve(static_cast<std::size_t>(count));
  const double pi = 3.14159265358979323846264338328;
  if (n == 1) {
    dirs.push_back({1.0});
    dirs.push_back({-1.0});
    return dirs;
  }
  if (n == 2) {
    for (int k = 0; k < count; ++k) {
      double th = 2.0 * pi * (static_cast<double>(k) + 0.5) / count;
      dirs.push_back({std::cos(th), std::sin(th)});
    }
    return dirs;
  }
  if (n == 3) {
    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    for (int k = 0; k < count; ++k) {
      double z = 1.0 - 2.0 * (static_cast<double>(k) + 0.5) / count;
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      double th = 2.0 * pi * static_cast<double>(k) / golden;
      dirs.push_back({r * std::cos(th), r * std::sin(th), z});
    }
    return dirs;
  }
  static const double primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
  for (int k = 0; k < count; ++k) {
    Vec v(static_cast<std::size_t>(n));
    bool ok = true;
    for (int j = 0; j < n; ++j) {
      double alpha = std::sqrt(primes[j % 10]);
      double u = std::fmod((static_cast<double>(k) + 0.5) * alpha, 1.0);
      u = std::min(std::max(u, 1e-9), 1.0 - 1e-9);
      v[static_cast<std::size_t>(j)] = detail::norm_quantile(u);
    }
    double s = norm(v);
    if (s < 1e-9) ok = false;
    if (ok) {
      for (auto& c : v) c /= s;
      dirs.push_back(v);
    }
  }
  return dirs;
}

// Directions in the closed positive orthant (unit length, strictly positive
// components), plus the coordinate axes.
inline std::vector<Vec> orthant_grid(int n, int count) {
  std::vector<Vec> dirs = sphere_grid(n, count);
  for (auto& d : dirs) {
    for (auto& c : d) c = std::max(std::fabs(c), 1e-9);
    d = normalized(d);
  }
  for (int i = 0; i < n; ++i) dirs.push_back(unit_axis(n, i));
  return dirs;
}

// Streaming mean/variance accumulator with deterministic pairwise merge.
struct Accum {
  long long count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    double d = x - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (x - mean);
  }

  void merge(const Accum& o) {
    if (o.count == 0) return;
    if (count == 0) {
      *this = o;
      return;
    }
    double d = o.mean - mean;
    long long tot = count + o.count;
    mean += d * static_cast<double>(o.count) / static_cast<double>(tot);
    m2 += o.m2 + d * d * static_cast<double>(count) * static_cast<double>(o.count) / static_cast<double>(tot);
    count = tot;
  }

  double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
  double stderr_of_mean() const {
    return count > 0 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
  }
};

}  // namespace logbm
