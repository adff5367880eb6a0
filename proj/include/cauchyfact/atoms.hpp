#pragma once

#include <cmath>
#include <vector>

#include "cauchyfact/curve.hpp"
#include "cauchyfact/grid.hpp"
#include "cauchyfact/spaces.hpp"

namespace cauchyfact {

// Smallest i with 2^i >= M + 1, i.e. I(y0, r) inside I(x0, 2^i r).
inline int two_bump_levels(double M) {
  int i = 0;
  while (std::ldexp(1.0, i) < M + 1.0) ++i;
  return i;
}

namespace detail {

// ∫_I b on the grid, with the same trapezoid weights as integrate().
inline cplx integral_of_b(const AccretiveWeight& weight, const UniformGrid& grid,
                          const Interval& I) {
  return integrate(multiply_by_b(weight, indicator(grid, I)));
}

inline bool grid_holds(const UniformGrid& grid, const Interval& I) {
  double tol = 1e-9 * grid.spacing();
  return I.left() >= grid.left() - tol && I.right() <= grid.right() + tol;
}

}  // namespace detail

// Constructive decomposition of a b-cancelling two-bump function into
// 2(i0 + 1) atoms. x0, y0 and r must sit on the grid lattice, and the grid
// must contain the tail interval of radius 2^{i0+1} r around (x0 + y0) / 2.
inline AtomicDecomposition decompose_two_bump(const AccretiveWeight& weight,
                                              const GridFunction& f, double x0,
                                              double y0, double r) {
  const auto& grid = f.grid();
  detail::require(r > 0 && std::isfinite(r), "two-bump: r must be positive");
  detail::require(grid.is_node(x0) && grid.is_node(y0) && grid.is_multiple_of_spacing(r),
                  "two-bump: x0, y0 and r must be aligned with the grid");
  const double M = std::abs(y0 - x0) / r;
  detail::require(M > 100.0, "two-bump: M = |x0 - y0| / r must exceed 100");
  const int i0 = two_bump_levels(M);
  const Interval tail{0.5 * (x0 + y0), std::ldexp(r, i0 + 1)};
  if (!detail::grid_holds(grid, tail))
    throw GridError("two-bump: grid does not contain the tail interval");

  const Interval bump[2] = {{x0, r}, {y0, r}};
  IndexRange in0 = grid.inside(bump[0]);
  IndexRange in1 = grid.inside(bump[1]);
  for (std::size_t i = 0; i < f.size(); ++i) {
    double cap = (in0.contains(i) ? 1.0 : 0.0) + (in1.contains(i) ? 1.0 : 0.0);
    detail::require(std::norm(f[i]) <= cap * cap * (1.0 + 1e-12),
                    "two-bump: |f| must be bounded by the two bump indicators");
  }
  const double b_sup = weight.sup_norm();
  const double l1 = lp_norm(f, 1.0);
  const cplx total = integrate(multiply_by_b(weight, f));
  detail::require(std::abs(total) <= 1e-8 * l1 * b_sup,
                  "two-bump: f must satisfy the cancellation condition");

  AtomicDecomposition dec;
  dec.i0 = i0;
  dec.M = M;
  dec.r = r;
  dec.b_sup = b_sup;

  // Everything below touches only the nodes of each interval.
  std::vector<cplx> bw(f.size());
  for (std::size_t k = 0; k < bw.size(); ++k)
    bw[k] = grid.weight(k) * weight.eval_b(grid.node(k));
  auto integral_b = [&](IndexRange rg) {
    return detail::pairwise_sum<cplx>(rg.begin, rg.end, [&](std::size_t k) { return bw[k]; });
  };
  const IndexRange tail_range = grid.inside(tail);
  const cplx tail_b = integral_b(tail_range);

  for (int j = 0; j < 2; ++j) {
    const Interval& B = bump[j];
    IndexRange prev_range = grid.inside(B);
    std::vector<cplx> prev(f.size());  // g^{i-1} on prev_range, g^0 = f_j
    for (std::size_t k = prev_range.begin; k < prev_range.end; ++k) prev[k] = f[k];
    const cplx F = detail::pairwise_sum<cplx>(
        prev_range.begin, prev_range.end, [&](std::size_t k) { return bw[k] * prev[k]; });

    for (int i = 1; i <= i0 + 1; ++i) {
      const Interval I = i <= i0 ? Interval{B.center, std::ldexp(r, i)} : tail;
      const IndexRange range = i <= i0 ? grid.inside(I) : tail_range;
      const cplx Ib = i <= i0 ? integral_b(range) : tail_b;
      detail::ensure(std::abs(Ib) >= I.length() - 2.0 * grid.spacing(),
                     "two-bump: |∫_I b| >= |I| up to one cell");
      detail::ensure(range.begin <= prev_range.begin && prev_range.end <= range.end,
                     "two-bump: nested supports");
      const cplx level = F / Ib;

      // f^i = g^{i-1} - g^i on a window with one zero node each side.
      const std::size_t lo = range.begin > 0 ? range.begin - 1 : 0;
      const std::size_t hi = std::min(range.end + 1, grid.count());
      UniformGrid win = grid.window({lo, hi});
      std::vector<cplx> piece(hi - lo);
      double sup = 0.0;
      for (std::size_t k = range.begin; k < range.end; ++k) {
        piece[k - lo] = prev[k] - level;
        sup = std::max(sup, std::abs(piece[k - lo]));
      }
      const double alpha = sup * I.length();

      AtomTerm t;
      t.j = j + 1;
      t.i = i;
      t.support = I;
      t.coefficient = alpha;
      if (alpha > 0)
        for (auto& v : piece) v /= alpha;
      t.atom = GridFunction(win, std::move(piece), I);
      t.certificate = check_atom(t.atom, I, weight, 1e-8);
      detail::ensure(alpha <= 6.0 * b_sup * r + 1e-9,
                     "two-bump: |alpha| <= 6 ||b||_inf r");
      detail::ensure(t.certificate.accepted,
                     "two-bump: emitted atom passes check_atom at tol 1e-8");
      dec.terms.push_back(std::move(t));

      if (i <= i0) {
        for (std::size_t k = prev_range.begin; k < prev_range.end; ++k) prev[k] = 0.0;
        for (std::size_t k = range.begin; k < range.end; ++k) prev[k] = level;
        prev_range = range;
      }
    }
  }
  return dec;
}

// Sum |alpha|, asserted against 12 ||b||_inf r (i0 + 1).
inline double two_bump_norm_bound(const AtomicDecomposition& dec) {
  double s = 0.0;
  for (const auto& t : dec.terms) s += std::abs(t.coefficient);
  detail::ensure(s <= 12.0 * dec.b_sup * dec.r * (dec.i0 + 1) * (1.0 + 1e-12),
                 "two-bump: sum |alpha| <= 12 ||b||_inf r (i0 + 1)");
  return s;
}

// Sum of coefficient * atom on the given grid; atoms must share its lattice.
inline GridFunction reconstruct(const AtomicDecomposition& dec, const UniformGrid& grid) {
  std::vector<cplx> s(grid.count());
  Interval support = grid.span();
  for (const auto& t : dec.terms) {
    if (t.coefficient == cplx{}) continue;
    GridFunction e = embed(t.atom, grid);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += t.coefficient * e[i];
  }
  return {grid, std::move(s), support};
}

}  // namespace cauchyfact
