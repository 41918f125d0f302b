#pragma once

// Brute-force reference computations used only by the tests. Each one is
// written independently of the library code it checks.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "stratakit/linalg.hpp"

namespace oracle {

using stratakit::Vec;

inline double dist(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

/// Points on the circle |x - c| = r at angular spacing h / r.
inline std::vector<Vec> circle_points(const Vec& c, double r, double h) {
  const int count = static_cast<int>(std::ceil(2.0 * std::numbers::pi * r / h));
  std::vector<Vec> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const double t = 2.0 * std::numbers::pi * k / count;
    pts.push_back(Vec{c[0] + r * std::cos(t), c[1] + r * std::sin(t)});
  }
  return pts;
}

/// Filled disk sampled on a grid of spacing h plus its boundary circle.
inline std::vector<Vec> disk_points(const Vec& c, double r, double h) {
  std::vector<Vec> pts = circle_points(c, r, h);
  for (double x = -r; x <= r; x += h) {
    for (double y = -r; y <= r; y += h) {
      if (x * x + y * y <= r * r) pts.push_back(Vec{c[0] + x, c[1] + y});
    }
  }
  return pts;
}

inline double min_dist(const std::vector<Vec>& pts, const Vec& x) {
  double best = std::numeric_limits<double>::infinity();
  for (const Vec& p : pts) best = std::min(best, dist(p, x));
  return best;
}

/// Determinant of the Gram matrix in long double (Gaussian elimination).
inline long double gram_det(const std::vector<Vec>& v) {
  const std::size_t k = v.size();
  std::vector<std::vector<long double>> g(k, std::vector<long double>(k));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      long double s = 0;
      for (int t = 0; t < v[i].dim(); ++t) s += static_cast<long double>(v[i][t]) * v[j][t];
      g[i][j] = s;
    }
  }
  long double det = 1;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < k; ++r) {
      if (std::fabs(g[r][c]) > std::fabs(g[p][c])) p = r;
    }
    if (g[p][c] == 0) return 0;
    if (p != c) {
      std::swap(g[p], g[c]);
      det = -det;
    }
    det *= g[c][c];
    for (std::size_t r = c + 1; r < k; ++r) {
      const long double f = g[r][c] / g[c][c];
      for (std::size_t t = c; t < k; ++t) g[r][t] -= f * g[c][t];
    }
  }
  return det;
}

/// max over a of min over b of |a - b|, both directions.
inline double hausdorff(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  double h = 0.0;
  for (const Vec& p : a) h = std::max(h, min_dist(b, p));
  for (const Vec& p : b) h = std::max(h, min_dist(a, p));
  return h;
}

inline Vec cross(const Vec& a, const Vec& b) {
  return Vec{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

/// Extreme rays of the polar {d : d . g <= 0} of a full-dimensional cone in
/// R^3: every cross product of two generators (either sign) that satisfies
/// all constraints and is tight on at least two independent ones.
inline std::vector<Vec> polar_rays_r3(const std::vector<Vec>& gens) {
  std::vector<Vec> out;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      Vec c = cross(gens[i], gens[j]);
      const double len = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
      if (len < 1e-12) continue;
      for (double sign : {1.0, -1.0}) {
        Vec d{sign * c[0] / len, sign * c[1] / len, sign * c[2] / len};
        bool ok = true;
        for (const Vec& g : gens) {
          const double gd = d[0] * g[0] + d[1] * g[1] + d[2] * g[2];
          if (gd > 1e-10) ok = false;
        }
        if (!ok) continue;
        const bool seen = std::any_of(out.begin(), out.end(), [&](const Vec& e) { return dist(e, d) < 1e-9; });
        if (!seen) out.push_back(d);
      }
    }
  }
  return out;
}

/// Nearest point of the axis-aligned box [lo, hi] to x (coordinate clamp).
inline Vec clamp_box(const Vec& x, const Vec& lo, const Vec& hi) {
  Vec y(x.dim());
  for (int i = 0; i < x.dim(); ++i) y[i] = std::clamp(x[i], lo[i], hi[i]);
  return y;
}

}  // namespace oracle
