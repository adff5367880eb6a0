#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "cauchyfact/cauchy.hpp"
#include "cauchyfact/curve.hpp"
#include "cauchyfact/grid.hpp"

namespace cauchyfact {

enum class CommutatorVariant { cauchy, related };

inline std::string to_string(CommutatorVariant v) {
  return v == CommutatorVariant::cauchy ? "cauchy" : "related";
}

struct CommutatorSpec {
  GridFunction symbol;  // the function 𝔄; the commutator multiplies by 𝔄 / b
  AccretiveWeight weight;
  CommutatorVariant variant = CommutatorVariant::cauchy;
};

namespace detail {

inline std::vector<cplx> divided_symbol(const CommutatorSpec& spec) {
  const auto& s = spec.symbol;
  std::vector<cplx> phi(s.size());
  for (std::size_t i = 0; i < phi.size(); ++i)
    phi[i] = s[i] / spec.weight.eval_b(s.grid().node(i));
  return phi;
}

}  // namespace detail

// [φ, T] f = φ T(f) - T(φ f) with φ = 𝔄 / b, summed directly in the kernel
// form sum_j (φ_i - φ_j) K_ij u_j w_j so that constant symbols give exact
// zeros. The cauchy variant is the related one applied to b f.
inline GridFunction apply_commutator(const CommutatorSpec& spec, const GridFunction& f) {
  detail::require_same_grid(spec.symbol, f);
  const auto& grid = f.grid();
  GridFunction u = spec.variant == CommutatorVariant::cauchy ? multiply_by_b(spec.weight, f) : f;
  std::vector<cplx> phi = detail::divided_symbol(spec);
  IndexRange src = u.support_range();
  const std::size_t n = grid.count();
  auto geo = detail::geometry(spec.weight.curve(), grid, {0, n});
  std::vector<cplx> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    cplx acc{};
    for (std::size_t j = src.begin; j < src.end; ++j) {
      if (j == i) continue;
      acc += (phi[i] - phi[j]) *
             related_kernel_value(geo.x[j] - geo.x[i], geo.A[j] - geo.A[i]) *
             (u[j] * grid.weight(j));
    }
    out[i] = acc;
  }
  return {grid, std::move(out), grid.span()};
}

using ComplexMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;
using ComplexVector = Eigen::Matrix<cplx, Eigen::Dynamic, 1>;

// W^{1/2} G W^{1/2}: the discretized commutator as an operator on weighted
// l^2, so its spectral norm is the discrete L^2 operator norm. Columns are
// restricted to cols (functions supported there).
inline ComplexMatrix commutator_matrix(const CommutatorSpec& spec, IndexRange cols) {
  const auto& grid = spec.symbol.grid();
  const std::size_t n = grid.count();
  std::vector<cplx> phi = detail::divided_symbol(spec);
  auto geo = detail::geometry(spec.weight.curve(), grid, {0, n});
  ComplexMatrix B(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t jj = 0; jj < cols.size(); ++jj) {
    const std::size_t j = cols.begin + jj;
    const double wj = std::sqrt(grid.weight(j));
    const cplx bj = spec.variant == CommutatorVariant::cauchy
                        ? spec.weight.eval_b(geo.x[j])
                        : cplx{1.0};
    for (std::size_t i = 0; i < n; ++i) {
      cplx v{};
      if (i != j)
        v = (phi[i] - phi[j]) *
            related_kernel_value(geo.x[j] - geo.x[i], geo.A[j] - geo.A[i]) * bj;
      B(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(jj)) =
          std::sqrt(grid.weight(i)) * v * wj;
    }
  }
  return B;
}

struct NormEstimate {
  double value = 0.0;
  double p = 2.0;
  bool lower_bound_only = false;  // true for p != 2 probes
  int iterations = 0;
};

// Dominant singular value by power iteration on B^H B from a seeded start.
inline NormEstimate spectral_norm_power(const ComplexMatrix& B, std::uint64_t seed,
                                        double tol = 1e-7, int max_iter = 5000) {
  NormEstimate est;
  if (B.size() == 0) return est;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  ComplexVector v(B.cols());
  for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = {nd(rng), nd(rng)};
  v.normalize();
  double sigma = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    ComplexVector w = B.adjoint() * (B * v);
    double nw = w.norm();
    est.iterations = it;
    if (nw == 0) {
      est.value = 0.0;
      return est;
    }
    double next = std::sqrt(nw);
    v = w / nw;
    if (std::abs(next - sigma) <= tol * next) {
      est.value = next;
      return est;
    }
    sigma = next;
  }
  throw NumericalAssertion("commutator_norm_estimate: power iteration did not converge");
}

// p = 2: power iteration on the assembled matrix. Other p: the largest
// ratio ||[φ,T] f||_p / ||f||_p over seeded random probes, a lower bound.
inline NormEstimate commutator_norm_estimate(const CommutatorSpec& spec, double p,
                                             int trials, std::uint64_t seed = 1) {
  detail::require(p >= 1.0, "commutator_norm_estimate: p must be >= 1");
  const auto& grid = spec.symbol.grid();
  if (p == 2.0) {
    ComplexMatrix B = commutator_matrix(spec, {0, grid.count()});
    NormEstimate e = spectral_norm_power(B, seed);
    e.p = 2.0;
    return e;
  }
  detail::require(trials >= 1, "commutator_norm_estimate: trials must be >= 1");
  NormEstimate e;
  e.p = p;
  e.lower_bound_only = true;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  for (int t = 0; t < trials; ++t) {
    GridFunction f = GridFunction::sample(grid, [&](double) { return cplx{nd(rng), nd(rng)}; });
    double nf = lp_norm(f, p);
    if (nf == 0) continue;
    e.value = std::max(e.value, lp_norm(apply_commutator(spec, f), p) / nf);
    e.iterations = t + 1;
  }
  return e;
}

// Leading singular values of the commutator acting on functions supported in
// the window, decreasing. A decay proxy, not a compactness decision.
inline std::vector<double> compactness_profile(const CommutatorSpec& spec,
                                               const Interval& window, int rank_cap) {
  detail::require(rank_cap >= 1, "compactness_profile: rank_cap must be >= 1");
  IndexRange cols = spec.symbol.grid().inside(window);
  detail::require(!cols.empty(), "compactness_profile: window holds no nodes");
  ComplexMatrix B = commutator_matrix(spec, cols);
  Eigen::BDCSVD<ComplexMatrix> svd(B);
  const auto& sv = svd.singularValues();
  std::vector<double> out;
  for (Eigen::Index k = 0; k < sv.size() && k < rank_cap; ++k) out.push_back(sv(k));
  return out;
}

namespace detail {

inline std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> rank(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[idx[k]] = avg;
    i = j + 1;
  }
  return rank;
}

}  // namespace detail

// Pearson correlation of the average ranks.
inline double spearman_rank_correlation(const std::vector<double>& x,
                                        const std::vector<double>& y) {
  detail::require(x.size() == y.size() && x.size() >= 2,
                  "spearman: need two equally long samples of size >= 2");
  auto rx = detail::average_ranks(x);
  auto ry = detail::average_ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace cauchyfact
