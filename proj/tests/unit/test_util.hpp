#pragma once

#include "fejercert/approximation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <random>
#include <vector>

namespace fejercert {

inline Point vec(std::initializer_list<double> xs) {
  Point p(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) p[i++] = x;
  return p;
}

// Sweep along the first coordinate; exact answer to "is some pair within eps".
inline bool has_close_pair(std::vector<Point> pts, double eps) {
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a[0] < b[0]; });
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size() && pts[j][0] - pts[i][0] <= eps; ++j)
      if ((pts[i] - pts[j]).norm() <= eps) return true;
  return false;
}

inline Point sample_ball(std::size_t dim, double radius, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Point p(static_cast<Eigen::Index>(dim));
  do {
    for (auto& x : p) x = normal(rng);
  } while (p.norm() == 0.0);
  return p / p.norm() * radius * std::pow(u(rng), 1.0 / static_cast<double>(dim));
}

// Largest subset with all pairwise distances > eps, by subset enumeration.
inline std::size_t max_separated_set(const std::vector<Point>& pts, double eps) {
  const std::size_t n = pts.size();
  std::size_t best = 0;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    const auto size = static_cast<std::size_t>(__builtin_popcount(mask));
    if (size <= best) continue;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = i + 1; j < n && ok; ++j)
        if ((mask >> i & 1) && (mask >> j & 1) && (pts[i] - pts[j]).norm() <= eps) ok = false;
    if (ok) best = size;
  }
  return best;
}

// Smallest subset that is an eps-net of the whole set.
inline std::size_t min_net_size(const std::vector<Point>& pts, double eps) {
  const std::size_t n = pts.size();
  std::size_t best = n;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    const auto size = static_cast<std::size_t>(__builtin_popcount(mask));
    if (size >= best) continue;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      bool covered = false;
      for (std::size_t j = 0; j < n && !covered; ++j) covered = (mask >> j & 1) && (pts[i] - pts[j]).norm() <= eps;
      ok = covered;
    }
    if (ok) best = size;
  }
  return best;
}

}  // namespace fejercert
