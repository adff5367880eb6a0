#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "cauchyfact/atoms.hpp"
#include "cauchyfact/cauchy.hpp"
#include "cauchyfact/curve.hpp"
#include "cauchyfact/grid.hpp"
#include "cauchyfact/spaces.hpp"

namespace cauchyfact {

namespace detail {

// Nodes in the union of the two supports, each evaluated once.
inline std::vector<IndexRange> support_ranges(const GridFunction& g, const GridFunction& h) {
  IndexRange a = g.support_range();
  IndexRange b = h.support_range();
  if (a.begin > b.begin) std::swap(a, b);
  if (b.begin < a.end) return {{a.begin, std::max(a.end, b.end)}};
  return {a, b};
}

inline std::vector<Interval> target_intervals(const GridFunction& g, const GridFunction& h) {
  return {g.support(), h.support()};
}

}  // namespace detail

// (1/b) (g C(h) - h C*(g)), evaluated and kept only on supp g ∪ supp h.
inline GridFunction pi_b(const AccretiveWeight& weight, const GridFunction& g,
                         const GridFunction& h) {
  detail::require_same_grid(g, h);
  auto targets = detail::target_intervals(g, h);
  GridFunction Ch = apply_cauchy(weight, h, targets);
  GridFunction Cg = apply_cauchy_adjoint(weight, g, targets);
  std::vector<cplx> s(g.size());
  for (IndexRange r : detail::support_ranges(g, h))
    for (std::size_t i = r.begin; i < r.end; ++i)
      s[i] = (g[i] * Ch[i] - h[i] * Cg[i]) / weight.eval_b(g.grid().node(i));
  return {g.grid(), std::move(s), hull(g.support(), h.support())};
}

// G C~(H) - H (C~)*(G) = G C~(H) + H C~(G), same truncation as pi_b.
inline GridFunction pi_classic(const AccretiveWeight& weight, const GridFunction& G,
                               const GridFunction& H) {
  detail::require_same_grid(G, H);
  auto targets = detail::target_intervals(G, H);
  GridFunction CH = apply_related_cauchy(weight.curve(), H, targets);
  GridFunction CG = apply_related_cauchy(weight.curve(), G, targets);
  std::vector<cplx> s(G.size());
  for (IndexRange r : detail::support_ranges(G, H))
    for (std::size_t i = r.begin; i < r.end; ++i) s[i] = G[i] * CH[i] + H[i] * CG[i];
  return {G.grid(), std::move(s), hull(G.support(), H.support())};
}

struct FactorPair {
  GridFunction g;
  GridFunction h;
  double M = 0.0;
  double x0 = 0.0;
  double y0 = 0.0;
  double r = 0.0;
  cplx denom;                 // (C~)*(g)(x0)
  double norm_product = 0.0;  // ||g||_2 ||h||_2
};

// Smallest power of two >= 128 with ln(M) / M < eps.
inline double select_M(double eps) {
  detail::require(eps > 0 && std::isfinite(eps), "approx_factor_atom: eps must be positive");
  double M = 128.0;
  while (std::log(M) / M >= eps) {
    M *= 2.0;
    detail::require(M <= 0x1p40, "approx_factor_atom: eps too small");
  }
  return M;
}

// Grid of spacing r / q holding the factorization of an atom on I(x0, r)
// with partner bump at x0 + M r and the residual's tail interval, with x0 on
// a node.
inline UniformGrid factor_grid(const Interval& support, double M, int q) {
  detail::require(q >= 1, "factor_grid: nodes per radius must be >= 1");
  const double r = support.radius;
  const double h = r / q;
  const int i0 = two_bump_levels(M);
  const double mid = support.center + 0.5 * M * r;
  const double R = std::ldexp(r, i0 + 1);
  auto below = static_cast<long long>(std::ceil((support.center - (mid - R)) / h - 1e-9)) + 2;
  auto above = static_cast<long long>(std::ceil((mid + R - support.center) / h - 1e-9)) + 2;
  return UniformGrid(support.center - static_cast<double>(below) * h, h,
                     static_cast<std::size_t>(below + above + 1));
}

// g = χ_{I(y0, r)}, h = -a / (C~)*(g)(x0) with y0 = x0 + M r.
inline FactorPair approx_factor_atom_with_M(const AccretiveWeight& weight,
                                            const GridFunction& a, const Interval& support,
                                            double M) {
  const auto& grid = a.grid();
  const double r = support.radius;
  const double x0 = support.center;
  const double y0 = x0 + M * r;
  detail::require(grid.is_node(x0), "approx_factor_atom: support center must be a node");
  const Interval J{y0, r};
  if (!detail::grid_holds(grid, J))
    throw GridError("approx_factor_atom: grid too narrow for y0 = x0 + M r");

  FactorPair p;
  p.M = M;
  p.x0 = x0;
  p.y0 = y0;
  p.r = r;
  p.g = indicator(grid, J);

  // C~g at the single node x0.
  const std::size_t ix = grid.index_of(x0);
  std::vector<cplx> row(grid.count());
  detail::related_cauchy_rows(weight.curve(), p.g, p.g.support_range(), {ix, ix + 1}, row);
  p.denom = -row[ix];

  // Im C~g(x0) has one sign and each term is at least w / (pi (1 + L^2) |y - x0|).
  const double L = weight.curve().lipschitz_constant();
  double floor = 0.0;
  IndexRange in = p.g.support_range();
  for (std::size_t j = in.begin; j < in.end; ++j)
    floor += grid.weight(j) / std::abs(grid.node(j) - x0);
  floor /= std::numbers::pi * (1.0 + L * L);
  detail::ensure(std::abs(p.denom) >= floor * (1.0 - 1e-12),
                 "approx_factor_atom: |denominator| above the Lipschitz floor");

  p.h = scale(a, -1.0 / p.denom);
  p.norm_product = lp_norm(p.g, 2.0) * lp_norm(p.h, 2.0);
  detail::ensure(p.norm_product <= std::numbers::pi * (1.0 + L * L) * M,
                 "approx_factor_atom: ||g||_2 ||h||_2 <= pi (1 + L^2) M");
  return p;
}

inline FactorPair approx_factor_atom(const AccretiveWeight& weight, const GridFunction& a,
                                     const Interval& support, double eps) {
  return approx_factor_atom_with_M(weight, a, support, select_M(eps));
}

// a - pi_b(g, h) with its support, sup-norm and cancellation checks.
// sup_constant <= 0 selects the default 10 (1 + L^2).
inline GridFunction residual(const AccretiveWeight& weight, const GridFunction& a,
                             const FactorPair& p, double sup_constant = 0.0) {
  const double L = weight.curve().lipschitz_constant();
  if (sup_constant <= 0) sup_constant = 10.0 * (1.0 + L * L);
  GridFunction pb = pi_b(weight, p.g, p.h);
  const Interval B1{p.x0, p.r}, B2{p.y0, p.r};
  GridFunction d = a - pb;
  GridFunction res(a.grid(), {d.samples().begin(), d.samples().end()}, hull(B1, B2));

  IndexRange r1 = a.grid().inside(B1), r2 = a.grid().inside(B2);
  for (std::size_t i = 0; i < res.size(); ++i)
    detail::ensure(r1.contains(i) || r2.contains(i) || res[i] == cplx{},
                   "residual: vanishes outside the two bumps");
  detail::ensure(res.sup_norm() * p.M * p.r <= sup_constant,
                 "residual: ||res||_inf M r <= " + format_real(sup_constant));
  const double scale_ref = lp_norm(res, 1.0) * weight.sup_norm();
  detail::ensure(std::abs(integrate(multiply_by_b(weight, res))) <= 1e-8 * scale_ref,
                 "residual: |∫ res b| <= 1e-8 ||res||_1 ||b||_inf");
  return res;
}

struct ResidualDecomposition {
  double s = 0.0;  // ||res||_inf
  AtomicDecomposition dec;
  double estimate = 0.0;  // s * sum |alpha|
};

inline ResidualDecomposition decompose_residual(const AccretiveWeight& weight,
                                                const GridFunction& res, double x0,
                                                double y0, double r) {
  ResidualDecomposition out;
  out.s = res.sup_norm();
  if (out.s == 0) return out;
  out.dec = decompose_two_bump(weight, scale(res, 1.0 / out.s), x0, y0, r);
  double sum = 0.0;
  for (const auto& t : out.dec.terms) sum += std::abs(t.coefficient);
  out.estimate = out.s * sum;
  return out;
}

inline double estimate_residual_h1b(const AccretiveWeight& weight, const GridFunction& res,
                                    double x0, double y0, double r) {
  return decompose_residual(weight, res, x0, y0, r).estimate;
}

struct H1Factor {
  GridFunction G;
  GridFunction H;
};

inline H1Factor h1_factor_from_h1b(const AccretiveWeight& weight, const FactorPair& p) {
  return {p.g, multiply_by_b(weight, p.h)};
}

struct CanonicalAtom {
  GridFunction atom;
  double kappa = 0.0;   // rescaling folded into the coefficient
  double defect = 0.0;  // size of the cancellation repair relative to the sampled atom
};

// Sample an atom at the nodes of the window grid of spacing radius / q
// centred on its support (exact injection on a coarsened lattice), repair
// the b-cancellation lost to sampling and renormalize to ||a||_inf |I| = 1.
inline CanonicalAtom canonicalize_atom(const AccretiveWeight& weight, const GridFunction& a,
                                       const Interval& I, int q) {
  const double s = I.radius / q;
  UniformGrid w(I.center - (q + 1) * s, s, static_cast<std::size_t>(2 * q + 3));
  GridFunction c = resample_linear(a, w, I);
  GridFunction chi = indicator(w, I);
  const cplx m = integrate(multiply_by_b(weight, c)) /
                 integrate(multiply_by_b(weight, chi));
  const double sampled_sup = c.sup_norm();
  c = c - scale(chi, m);
  c = GridFunction(w, {c.samples().begin(), c.samples().end()}, I);

  CanonicalAtom out;
  out.kappa = c.sup_norm() * I.length();
  if (sampled_sup > 0) out.defect = std::abs(m) / sampled_sup;
  if (out.kappa == 0) {
    out.atom = GridFunction::zero(w, I);
    return out;
  }
  out.atom = scale(c, 1.0 / out.kappa);
  return out;
}

struct WeakTerm {
  int stage = 0;
  std::size_t index = 0;
  cplx lambda;
  FactorPair pair;  // g and h stored on windows around their supports
  double residual_estimate = 0.0;
};

struct WeakFactorizationOptions {
  int nodes_per_radius = 8;
  std::size_t max_grid_count = std::size_t{1} << 17;
};

struct WeakFactorization {
  std::vector<std::vector<WeakTerm>> stages;
  std::vector<double> residual_trace;  // [0] is the initial estimate
  double eps = 0.0;
  double C0_measured = 0.0;
  int K = 0;
  double M = 0.0;
  bool contracting = true;
  double lambda_sum = 0.0;          // sum |lambda| over all stages
  double factor_norm_sum = 0.0;     // sum |lambda| ||g||_2 ||h||_2
  double canonical_defect = 0.0;    // worst relative L1 resampling change
  std::size_t final_atoms = 0;      // atoms in the last residual

  CsvTable to_csv() const {
    CsvTable t({"k", "j", "re_lambda", "im_lambda", "M", "y0", "residual_estimate"});
    for (const auto& st : stages)
      for (const auto& w : st)
        t.row() << w.stage << w.index << w.lambda.real() << w.lambda.imag() << w.pair.M
                << w.pair.y0 << w.residual_estimate;
    return t;
  }
};

namespace detail {

struct PendingAtom {
  cplx lambda;
  GridFunction atom;  // canonical window
  Interval support;
};

}  // namespace detail

// Iterate: factor every atom of the current residual, re-atomize each
// atom's residual with the two-bump construction, repeat for K stages.
// Atoms live on their own windows of spacing radius / q; a single grid
// cannot host atoms whose radii grow by ~4M per stage.
inline WeakFactorization weak_factorize(const AccretiveWeight& weight,
                                        const AtomicDecomposition& initial, double eps, int K,
                                        const WeakFactorizationOptions& opt = {}) {
  detail::require(K >= 0, "weak_factorize: K must be >= 0");
  const int q = opt.nodes_per_radius;
  WeakFactorization wf;
  wf.eps = eps;
  wf.K = K;
  wf.M = select_M(eps);
  const double T0 = h1b_norm_upper(initial);
  wf.residual_trace.push_back(T0);
  if (K == 0 || T0 == 0) return wf;

  const int i0 = two_bump_levels(wf.M);
  const std::size_t need = static_cast<std::size_t>(std::ldexp(1.0, i0 + 2)) *
                               static_cast<std::size_t>(q) + 8;
  if (need > opt.max_grid_count)
    throw GridError("weak_factorize: factor grids would exceed the node budget");

  std::vector<detail::PendingAtom> current;
  for (const auto& t : initial.terms) {
    if (t.coefficient == cplx{}) continue;
    CanonicalAtom c = canonicalize_atom(weight, t.atom, t.support, q);
    wf.canonical_defect = std::max(wf.canonical_defect, c.defect);
    if (c.kappa == 0) continue;
    current.push_back({t.coefficient * c.kappa, std::move(c.atom), t.support});
  }

  double prev_estimate = T0;
  for (int k = 1; k <= K; ++k) {
    const bool last = k == K;
    std::vector<WeakTerm> terms;
    std::vector<detail::PendingAtom> next;
    double lambda_sum = 0.0, trace = 0.0;
    for (std::size_t j = 0; j < current.size(); ++j) {
      const auto& pa = current[j];
      lambda_sum += std::abs(pa.lambda);
      UniformGrid G = factor_grid(pa.support, wf.M, q);
      GridFunction a = embed(pa.atom, G);
      FactorPair p = approx_factor_atom_with_M(weight, a, pa.support, wf.M);
      GridFunction res = residual(weight, a, p);
      ResidualDecomposition rd = decompose_residual(weight, res, p.x0, p.y0, p.r);

      WeakTerm w;
      w.stage = k;
      w.index = j + 1;
      w.lambda = pa.lambda;
      w.residual_estimate = rd.estimate;
      w.pair = p;
      w.pair.g = restrict_to_support(p.g);
      w.pair.h = restrict_to_support(p.h);
      wf.lambda_sum += std::abs(pa.lambda);
      wf.factor_norm_sum += std::abs(pa.lambda) * p.norm_product;
      trace += std::abs(pa.lambda) * rd.estimate;
      terms.push_back(std::move(w));

      if (rd.s == 0) continue;
      for (const auto& t : rd.dec.terms) {
        if (t.coefficient == cplx{}) continue;
        const cplx coef = pa.lambda * rd.s * t.coefficient;
        if (last) {
          ++wf.final_atoms;
          continue;
        }
        CanonicalAtom c = canonicalize_atom(weight, t.atom, t.support, q);
        wf.canonical_defect = std::max(wf.canonical_defect, c.defect);
        if (c.kappa == 0) continue;
        next.push_back({coef * c.kappa, std::move(c.atom), t.support});
      }
    }
    wf.C0_measured = std::max(wf.C0_measured, lambda_sum / prev_estimate);
    wf.stages.push_back(std::move(terms));
    wf.residual_trace.push_back(trace);
    prev_estimate = trace;
    current = std::move(next);
    if (trace < 1e-12 * T0) break;
  }
  wf.contracting = wf.eps * wf.C0_measured < 1.0;
  return wf;
}

}  // namespace cauchyfact
