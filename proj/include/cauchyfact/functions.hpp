#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "cauchyfact/curve.hpp"
#include "cauchyfact/grid.hpp"
#include "cauchyfact/spaces.hpp"

// Sample functions, curves and atoms used by tests, the CLI and the samples.
namespace cauchyfact {

// exp(-1 / (1 - x^2)) on (-1, 1), zero outside.
inline double smooth_bump(double x) {
  return std::abs(x) < 1.0 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0;
}

// Unit-period sawtooth x - floor(x) on (-half, half), zero outside.
inline double sawtooth(double x, double half = 4.0) {
  return std::abs(x) < half ? x - std::floor(x) : 0.0;
}

// log|x| with the singularity cut at `floor`.
inline double clamped_log(double x, double floor) {
  return std::log(std::max(std::abs(x), floor));
}

// Random piecewise-linear curve: `segments` interior segments on [-span, span]
// with slopes uniform in [-L, L]; tails carry the end slopes.
inline LipschitzCurve random_curve(int segments, double L, std::uint64_t seed,
                                   double span = 8.0) {
  detail::require(segments >= 1, "random_curve: need at least one segment");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> slope(-L, L);
  std::vector<double> bp(static_cast<std::size_t>(segments) + 1);
  for (std::size_t k = 0; k < bp.size(); ++k)
    bp[k] = -span + 2.0 * span * static_cast<double>(k) / segments;
  std::vector<double> s(bp.size() + 1);
  for (auto& v : s) v = slope(rng);
  return make_curve(std::move(bp), std::move(s), 0.0);
}

// Odd-type atom on I(x0, r): +1/(2r) on the left half, a negative constant on
// the right half chosen so that ∫ a b = 0, then scaled to ||a||_inf |I| = 1.
inline GridFunction odd_atom(const AccretiveWeight& weight, const UniformGrid& grid,
                             double x0, double r) {
  const Interval left{x0 - 0.5 * r, 0.5 * r}, right{x0 + 0.5 * r, 0.5 * r};
  auto bl = integrate(multiply_by_b(weight, indicator(grid, left)));
  auto br = integrate(multiply_by_b(weight, indicator(grid, right)));
  cplx beta = bl / br;
  IndexRange L = grid.inside(left), R = grid.inside(right);
  std::vector<cplx> s(grid.count());
  for (std::size_t i = L.begin; i < L.end; ++i) s[i] = 1.0;
  for (std::size_t i = R.begin; i < R.end; ++i) s[i] = -beta;
  double m = std::max(1.0, std::abs(beta)) * 2.0 * r;
  for (auto& v : s) v /= m;
  return {grid, std::move(s), Interval{x0, r}};
}

// χ_{I(x0,r)} - β χ_{I(y0,r)} with β making ∫ f b = 0, scaled so |f| <= 1.
inline GridFunction two_bump_function(const AccretiveWeight& weight, const UniformGrid& grid,
                                      double x0, double y0, double r) {
  const Interval I0{x0, r}, I1{y0, r};
  auto b0 = integrate(multiply_by_b(weight, indicator(grid, I0)));
  auto b1 = integrate(multiply_by_b(weight, indicator(grid, I1)));
  cplx beta = b0 / b1;
  double m = std::max(1.0, std::abs(beta));
  IndexRange R0 = grid.inside(I0), R1 = grid.inside(I1);
  std::vector<cplx> s(grid.count());
  for (std::size_t i = R0.begin; i < R0.end; ++i) s[i] = 1.0 / m;
  for (std::size_t i = R1.begin; i < R1.end; ++i) s[i] = -beta / m;
  return {grid, std::move(s), hull(I0, I1)};
}

// One-term decomposition holding a certified atom.
inline AtomicDecomposition single_atom(const AccretiveWeight& weight, const GridFunction& a,
                                       const Interval& support, cplx lambda = 1.0) {
  AtomicDecomposition dec;
  AtomTerm t;
  t.coefficient = lambda;
  t.support = support;
  t.certificate = check_atom(a, support, weight, 1e-8);
  detail::require(t.certificate.accepted, "single_atom: function is not a certified atom");
  t.atom = restrict_to_support(a);
  dec.terms.push_back(std::move(t));
  dec.r = support.radius;
  dec.b_sup = weight.sup_norm();
  return dec;
}

}  // namespace cauchyfact
