#pragma once

// Independent reference formulas for the tests. Deliberately written without
// calling into the library's field code.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "pushbutton/geometry.hpp"

namespace oracle {

using pushbutton::Vec3;
using C = std::complex<double>;

inline double dist(const Vec3& a, const Vec3& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

inline double piston(double ka, const Vec3& n, const Vec3& from, const Vec3& to) {
  const double r = dist(from, to);
  const double c = ((to.x - from.x) * n.x + (to.y - from.y) * n.y + (to.z - from.z) * n.z) / r;
  const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  const double x = ka * s;
  if (x < 1e-8) return 1.0;
  return 2.0 * std::cyl_bessel_j(1.0, x) / x;
}

struct Source {
  Vec3 pos;
  Vec3 normal;
  C weight;
};

inline C field(const std::vector<Source>& sources, double k, double ka, bool use_piston, const Vec3& p) {
  C sum = 0.0;
  for (const auto& s : sources) {
    const double r = dist(s.pos, p);
    const double d = use_piston ? piston(ka, s.normal, s.pos, p) : 1.0;
    sum += s.weight * d / r * std::exp(C(0.0, -k * r));
  }
  return sum;
}

// Plane z = z0 with normal +z: explicit mirrored copy of every source.
inline std::vector<Source> with_mirror(const std::vector<Source>& direct, double z0, double R) {
  std::vector<Source> all = direct;
  for (const auto& s : direct) {
    all.push_back({{s.pos.x, s.pos.y, 2.0 * z0 - s.pos.z}, {s.normal.x, s.normal.y, -s.normal.z},
                   s.weight * R});
  }
  return all;
}

// Smallest arc containing all angles on the circle.
inline double phase_spread(std::vector<double> angles) {
  const double two_pi = 2.0 * std::numbers::pi;
  for (auto& a : angles) a = std::fmod(std::fmod(a, two_pi) + two_pi, two_pi);
  std::sort(angles.begin(), angles.end());
  double largest_gap = angles.front() + two_pi - angles.back();
  for (std::size_t i = 1; i < angles.size(); ++i) largest_gap = std::max(largest_gap, angles[i] - angles[i - 1]);
  return two_pi - largest_gap;
}

// Circle-segment fraction of a unit-radius disc below a chord at height d (in radii)
// computed by brute-force midpoint integration.
inline double segment_fraction_numeric(double d, int n = 200000) {
  if (d <= -1.0) return 1.0;
  if (d >= 1.0) return 0.0;
  double area = 0.0;
  const double h = (1.0 - d) / n;
  for (int i = 0; i < n; ++i) {
    const double y = d + (i + 0.5) * h;
    area += 2.0 * std::sqrt(std::max(0.0, 1.0 - y * y)) * h;
  }
  return area / std::numbers::pi;
}

}  // namespace oracle
