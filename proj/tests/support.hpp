#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "cauchyfact/cauchyfact.hpp"

namespace testsupport {

using namespace cauchyfact;

// The three curves every identity is checked on.
inline std::vector<LipschitzCurve> corpus_curves() {
  return {flat_curve(), tent_curve(), random_curve(8, 0.5, 20240607)};
}

inline const char* curve_name(std::size_t k) {
  static const char* names[] = {"flat", "tent", "random"};
  return names[k];
}

// Random complex samples on the nodes inside I, zero elsewhere.
inline GridFunction random_function(const UniformGrid& grid, const Interval& I,
                                    std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  return GridFunction::sample(grid, I, [&](double) { return cplx{nd(rng), nd(rng)}; });
}

// Random interval with node-aligned centre and radius inside [lo, hi].
inline Interval random_interval(const UniformGrid& grid, double lo, double hi,
                                std::mt19937_64& rng) {
  const double h = grid.spacing();
  std::uniform_int_distribution<int> rad(4, 64);
  double r = rad(rng) * h;
  auto n0 = static_cast<long long>(std::ceil((lo + r - grid.left()) / h));
  auto n1 = static_cast<long long>(std::floor((hi - r - grid.left()) / h));
  std::uniform_int_distribution<long long> pos(n0, n1);
  return {grid.node(static_cast<std::size_t>(pos(rng))), r};
}

inline double max_abs_diff(const GridFunction& a, const GridFunction& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace testsupport
