#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "cauchyfact/curve.hpp"
#include "cauchyfact/grid.hpp"

namespace cauchyfact {

// (1 / pi i) / (dx + i dA), written out so that (dx, dA) -> (-dx, -dA)
// negates the result bit for bit.
inline cplx related_kernel_value(double dx, double dA) {
  double d = std::numbers::pi * (dx * dx + dA * dA);
  return {-dA / d, -dx / d};
}

struct CauchyKernelSample {
  double x = 0.0;
  double y = 0.0;
  cplx value;
};

// Kernel of the related operator at (x, y), x != y.
inline cplx related_cauchy_kernel(const LipschitzCurve& curve, double x, double y) {
  return related_kernel_value(y - x, curve.eval_A(y) - curve.eval_A(x));
}

inline CauchyKernelSample sample_related_kernel(const LipschitzCurve& curve, double x,
                                                double y) {
  detail::require(x != y, "kernel: x == y");
  return {x, y, related_cauchy_kernel(curve, x, y)};
}

// Full Cauchy kernel b(y) times the related kernel.
inline cplx cauchy_kernel(const AccretiveWeight& weight, double x, double y) {
  return weight.eval_b(y) * related_cauchy_kernel(weight.curve(), x, y);
}

namespace detail {

struct NodeGeometry {
  std::vector<double> x;
  std::vector<double> A;
};

inline NodeGeometry geometry(const LipschitzCurve& curve, const UniformGrid& grid,
                             IndexRange r) {
  NodeGeometry g;
  g.x.resize(r.size());
  g.A.resize(r.size());
  for (std::size_t k = 0; k < r.size(); ++k) {
    g.x[k] = grid.node(r.begin + k);
    g.A[k] = curve.eval_A(g.x[k]);
  }
  return g;
}

// Punctured trapezoid sum of the related operator, evaluated at the target
// nodes. Sources are the nodes in src; the diagonal j == i is skipped. Each
// row is summed left to right.
inline void related_cauchy_rows(const LipschitzCurve& curve, const GridFunction& f,
                                IndexRange src, IndexRange targets,
                                std::span<cplx> out) {
  const auto& grid = f.grid();
  if (src.empty() || targets.empty()) return;
  NodeGeometry s = geometry(curve, grid, src);
  NodeGeometry t = geometry(curve, grid, targets);
  std::vector<cplx> fw(src.size());
  for (std::size_t k = 0; k < src.size(); ++k)
    fw[k] = f[src.begin + k] * grid.weight(src.begin + k);

  for (std::size_t ti = 0; ti < targets.size(); ++ti) {
    const std::size_t i = targets.begin + ti;
    const double xi = t.x[ti];
    const double Ai = t.A[ti];
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < src.size(); ++k) {
      if (src.begin + k == i) continue;
      const double dx = s.x[k] - xi;
      const double dA = s.A[k] - Ai;
      const double d = std::numbers::pi * (dx * dx + dA * dA);
      // (fw.re + i fw.im) * (-dA - i dx) / d
      const double kr = -dA / d, ki = -dx / d;
      re += fw[k].real() * kr - fw[k].imag() * ki;
      im += fw[k].real() * ki + fw[k].imag() * kr;
    }
    out[i] = {re, im};
  }
}

}  // namespace detail

// Related operator evaluated at every node; the output carries full-grid
// support.
inline GridFunction apply_related_cauchy(const LipschitzCurve& curve,
                                         const GridFunction& f) {
  const auto& grid = f.grid();
  std::vector<cplx> out(grid.count());
  detail::related_cauchy_rows(curve, f, f.support_range(), {0, grid.count()}, out);
  return {grid, std::move(out), grid.span()};
}

// Related operator evaluated only at nodes inside the target intervals;
// zero elsewhere. Node-for-node equal to the full application there.
inline GridFunction apply_related_cauchy(const LipschitzCurve& curve,
                                         const GridFunction& f,
                                         std::span<const Interval> targets) {
  const auto& grid = f.grid();
  std::vector<cplx> out(grid.count());
  detail::require(!targets.empty(), "apply_related_cauchy: no target intervals");
  Interval support = targets[0];
  std::vector<IndexRange> done;
  for (const auto& I : targets) {
    support = hull(support, I);
    IndexRange r = grid.inside(I);
    // Skip nodes already evaluated through an overlapping interval.
    for (const auto& d : done) {
      if (r.begin >= d.begin && r.begin < d.end) r.begin = d.end;
      if (r.end > d.begin && r.end <= d.end) r.end = d.begin;
    }
    if (r.empty()) continue;
    detail::related_cauchy_rows(curve, f, f.support_range(), r, out);
    done.push_back(r);
  }
  return {grid, std::move(out), support};
}

// Cauchy integral along the curve, implemented as C(f) = C~(b f).
inline GridFunction apply_cauchy(const AccretiveWeight& weight, const GridFunction& f) {
  return apply_related_cauchy(weight.curve(), multiply_by_b(weight, f));
}

inline GridFunction apply_cauchy(const AccretiveWeight& weight, const GridFunction& f,
                                 std::span<const Interval> targets) {
  return apply_related_cauchy(weight.curve(), multiply_by_b(weight, f), targets);
}

// Adjoint for the bilinear pairing: C*(g) = b (C~)*(g) = -b C~(g).
inline GridFunction apply_cauchy_adjoint(const AccretiveWeight& weight,
                                         const GridFunction& g) {
  GridFunction t = apply_related_cauchy(weight.curve(), g);
  return scale(multiply_by_b(weight, t), -1.0);
}

inline GridFunction apply_cauchy_adjoint(const AccretiveWeight& weight,
                                         const GridFunction& g,
                                         std::span<const Interval> targets) {
  GridFunction t = apply_related_cauchy(weight.curve(), g, targets);
  return scale(multiply_by_b(weight, t), -1.0);
}

struct KernelBoundsReport {
  double size_constant = 0.0;        // max |K(x,y)| |x-y|
  double smoothness_constant = 0.0;  // max of the Hormander-type quotient
  int trials = 0;
};

// Empirical size and smoothness constants of the related kernel over random
// triples (x, x0, y) with |x - x0| <= |y - x| / 2, drawn from [-range, range].
inline KernelBoundsReport kernel_bounds_check(const LipschitzCurve& curve, int trials,
                                              std::uint64_t seed = 1,
                                              double range = 0.0) {
  detail::require(trials >= 1, "kernel_bounds_check: trials must be >= 1");
  if (range <= 0.0) {
    range = 4.0;
    for (double b : curve.breakpoints()) range = std::max(range, 2.0 * std::abs(b) + 2.0);
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(-range, range);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  KernelBoundsReport rep;
  rep.trials = trials;
  for (int t = 0; t < trials; ++t) {
    double x = pos(rng);
    double y = pos(rng);
    double x0 = x + unit(rng) * std::abs(y - x) / 2.0;
    if (x == y || x0 == x) continue;
    double dxy = std::abs(x - y);
    rep.size_constant =
        std::max(rep.size_constant, std::abs(related_cauchy_kernel(curve, x, y)) * dxy);
    double diff = std::abs(related_cauchy_kernel(curve, x, y) -
                           related_cauchy_kernel(curve, x0, y)) +
                  std::abs(related_cauchy_kernel(curve, y, x) -
                           related_cauchy_kernel(curve, y, x0));
    rep.smoothness_constant =
        std::max(rep.smoothness_constant, diff * dxy * dxy / std::abs(x - x0));
  }
  return rep;
}

}  // namespace cauchyfact
