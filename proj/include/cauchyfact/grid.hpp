#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "cauchyfact/curve.hpp"
#include "cauchyfact/error.hpp"
#include "cauchyfact/format.hpp"

namespace cauchyfact {

// Open interval I(center, radius) = {z : |z - center| < radius}.
struct Interval {
  double center = 0.0;
  double radius = 1.0;

  static Interval make(double center, double radius) {
    detail::require(std::isfinite(center) && std::isfinite(radius) && radius > 0,
                    "interval: radius must be positive and finite");
    return {center, radius};
  }

  double left() const { return center - radius; }
  double right() const { return center + radius; }
  double length() const { return 2.0 * radius; }

  bool contains(double x) const {
    return std::abs(x - center) < radius * (1.0 - 1e-12);
  }

  // Closed containment of the open intervals: this ⊆ outer.
  bool inside(const Interval& outer) const {
    double tol = 1e-12 * std::max(outer.radius, std::abs(outer.center));
    return left() >= outer.left() - tol && right() <= outer.right() + tol;
  }

  bool disjoint(const Interval& other) const {
    double tol = 1e-12 * std::max(radius, other.radius);
    return right() <= other.left() + tol || other.right() <= left() + tol;
  }
};

inline Interval hull(const Interval& a, const Interval& b) {
  double lo = std::min(a.left(), b.left());
  double hi = std::max(a.right(), b.right());
  return {0.5 * (lo + hi), 0.5 * (hi - lo)};
}

// Half-open node index range [begin, end).
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end > begin ? end - begin : 0; }
  bool empty() const { return size() == 0; }
  bool contains(std::size_t i) const { return i >= begin && i < end; }
};

class UniformGrid {
 public:
  UniformGrid() = default;
  UniformGrid(double left, double spacing, std::size_t count)
      : left_(left), spacing_(spacing), count_(count) {
    detail::require(std::isfinite(left), "grid: left must be finite");
    detail::require(std::isfinite(spacing) && spacing > 0,
                    "grid: spacing must be positive");
    detail::require(count >= 2, "grid: need at least two nodes");
  }

  // Grid with nodes exactly at lo and hi; (hi - lo) must be a multiple of
  // spacing up to rounding.
  static UniformGrid spanning(double lo, double hi, double spacing) {
    double cells = (hi - lo) / spacing;
    auto n = static_cast<std::size_t>(std::llround(cells));
    detail::require(std::abs(cells - static_cast<double>(n)) < 1e-6,
                    "grid: span is not a multiple of the spacing");
    return UniformGrid(lo, spacing, n + 1);
  }

  double left() const { return left_; }
  double spacing() const { return spacing_; }
  std::size_t count() const { return count_; }
  double right() const { return node(count_ - 1); }

  double node(std::size_t i) const {
    return left_ + static_cast<double>(i) * spacing_;
  }

  std::vector<double> nodes() const {
    std::vector<double> x(count_);
    for (std::size_t i = 0; i < count_; ++i) x[i] = node(i);
    return x;
  }

  // Composite trapezoid weights.
  double weight(std::size_t i) const {
    return (i == 0 || i + 1 == count_) ? 0.5 * spacing_ : spacing_;
  }

  // Interval holding every node with half a cell of margin.
  Interval span() const {
    return {0.5 * (left_ + right()), 0.5 * (right() - left_) + 0.5 * spacing_};
  }

  // Nodes strictly inside the open interval. Endpoints that land on a node
  // (up to 1e-7 cells) are excluded.
  IndexRange inside(const Interval& I) const {
    auto snap = [](double t, bool lower) -> long long {
      double r = std::round(t);
      if (std::abs(t - r) < 1e-7)
        return static_cast<long long>(r) + (lower ? 1 : -1);
      return static_cast<long long>(lower ? std::ceil(t) : std::floor(t));
    };
    long long first = snap((I.left() - left_) / spacing_, true);
    long long last = snap((I.right() - left_) / spacing_, false);
    first = std::max<long long>(first, 0);
    last = std::min<long long>(last, static_cast<long long>(count_) - 1);
    if (last < first) return {0, 0};
    return {static_cast<std::size_t>(first), static_cast<std::size_t>(last) + 1};
  }

  bool is_node(double x) const {
    double t = (x - left_) / spacing_;
    return std::abs(t - std::round(t)) < 1e-7 && t > -0.5 &&
           t < static_cast<double>(count_) - 0.5;
  }

  std::size_t index_of(double x) const {
    detail::require(is_node(x), "grid: point " + format_real(x) + " is not a node");
    return static_cast<std::size_t>(std::llround((x - left_) / spacing_));
  }

  bool is_multiple_of_spacing(double length) const {
    double t = length / spacing_;
    return std::abs(t - std::round(t)) < 1e-7;
  }

  // Same spacing and node lattice (possibly different extent).
  bool aligned_with(const UniformGrid& other) const {
    if (std::abs(spacing_ - other.spacing_) > 1e-12 * spacing_) return false;
    double t = (other.left_ - left_) / spacing_;
    return std::abs(t - std::round(t)) < 1e-7;
  }

  UniformGrid window(IndexRange r) const {
    return UniformGrid(node(r.begin), spacing_, r.size());
  }

  friend bool operator==(const UniformGrid& a, const UniformGrid& b) {
    return a.left_ == b.left_ && a.spacing_ == b.spacing_ && a.count_ == b.count_;
  }

 private:
  double left_ = 0.0;
  double spacing_ = 1.0;
  std::size_t count_ = 2;
};

// Complex samples on a uniform grid, identically zero at nodes outside the
// declared support.
class GridFunction {
 public:
  GridFunction() = default;

  GridFunction(UniformGrid grid, std::vector<cplx> samples, Interval support)
      : grid_(grid), samples_(std::move(samples)), support_(support) {
    detail::require(samples_.size() == grid_.count(),
                    "grid function: sample count must equal grid count");
    IndexRange in = grid_.inside(support_);
    auto check = [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i)
        if (samples_[i] != cplx{})
          throw PreconditionError("grid function: nonzero sample outside support");
    };
    if (in.empty()) {
      check(0, samples_.size());
    } else {
      check(0, in.begin);
      check(in.end, samples_.size());
    }
  }

  static GridFunction zero(const UniformGrid& grid, const Interval& support) {
    return {grid, std::vector<cplx>(grid.count()), support};
  }

  static GridFunction zero(const UniformGrid& grid) { return zero(grid, grid.span()); }

  template <class F>
  static GridFunction sample(const UniformGrid& grid, const Interval& support, F&& f) {
    std::vector<cplx> s(grid.count());
    IndexRange in = grid.inside(support);
    for (std::size_t i = in.begin; i < in.end; ++i) s[i] = cplx(f(grid.node(i)));
    return {grid, std::move(s), support};
  }

  template <class F>
  static GridFunction sample(const UniformGrid& grid, F&& f) {
    return sample(grid, grid.span(), std::forward<F>(f));
  }

  const UniformGrid& grid() const { return grid_; }
  const Interval& support() const { return support_; }
  std::span<const cplx> samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  const cplx& operator[](std::size_t i) const { return samples_[i]; }

  IndexRange support_range() const { return grid_.inside(support_); }

  double sup_norm() const {
    double m = 0.0;
    for (const auto& v : samples_) m = std::max(m, std::norm(v));
    return std::sqrt(m);
  }

 private:
  UniformGrid grid_;
  std::vector<cplx> samples_;
  Interval support_;
};

namespace detail {

inline void require_same_grid(const GridFunction& f, const GridFunction& g) {
  if (!(f.grid() == g.grid())) throw PreconditionError("grid mismatch");
}

// Pairwise summation of a[begin, end) for a deterministic, well-conditioned
// reduction order.
template <class T, class F>
T pairwise_sum(std::size_t begin, std::size_t end, const F& term) {
  if (end - begin <= 32) {
    T s{};
    for (std::size_t i = begin; i < end; ++i) s += term(i);
    return s;
  }
  std::size_t mid = begin + (end - begin) / 2;
  return pairwise_sum<T>(begin, mid, term) + pairwise_sum<T>(mid, end, term);
}

}  // namespace detail

inline GridFunction indicator(const UniformGrid& grid, const Interval& I) {
  return GridFunction::sample(grid, I, [](double) { return 1.0; });
}

// Composite trapezoid rule.
inline cplx integrate(const GridFunction& f) {
  const auto& g = f.grid();
  auto s = f.samples();
  IndexRange in = f.support_range();  // zero elsewhere
  return detail::pairwise_sum<cplx>(in.begin, in.end,
                                    [&](std::size_t i) { return g.weight(i) * s[i]; });
}

// Discrete L^p norm with trapezoid weights; p = +inf gives max |f|.
inline double lp_norm(const GridFunction& f, double p) {
  if (std::isinf(p) && p > 0) return f.sup_norm();
  if (!(p >= 1.0) || std::isnan(p))
    throw PreconditionError("lp_norm: p must be >= 1 or +inf");
  const auto& g = f.grid();
  auto s = f.samples();
  IndexRange in = f.support_range();
  if (p == 1.0)
    return detail::pairwise_sum<double>(
        in.begin, in.end, [&](std::size_t i) { return g.weight(i) * std::abs(s[i]); });
  if (p == 2.0)
    return std::sqrt(detail::pairwise_sum<double>(
        in.begin, in.end, [&](std::size_t i) { return g.weight(i) * std::norm(s[i]); }));
  double sum = detail::pairwise_sum<double>(in.begin, in.end, [&](std::size_t i) {
    return g.weight(i) * std::pow(std::abs(s[i]), p);
  });
  return std::pow(sum, 1.0 / p);
}

// Bilinear pairing <f, g> = ∫ f g, without complex conjugation.
inline cplx pair(const GridFunction& f, const GridFunction& g) {
  detail::require_same_grid(f, g);
  const auto& grid = f.grid();
  auto a = f.samples();
  auto b = g.samples();
  IndexRange fa = f.support_range(), gb = g.support_range();
  std::size_t lo = std::max(fa.begin, gb.begin), hi = std::min(fa.end, gb.end);
  if (hi < lo) hi = lo;
  return detail::pairwise_sum<cplx>(
      lo, hi, [&](std::size_t i) { return grid.weight(i) * (a[i] * b[i]); });
}

inline GridFunction scale(const GridFunction& f, cplx c) {
  std::vector<cplx> s(f.samples().begin(), f.samples().end());
  for (auto& v : s) v *= c;
  return {f.grid(), std::move(s), f.support()};
}

inline GridFunction operator+(const GridFunction& f, const GridFunction& g) {
  detail::require_same_grid(f, g);
  std::vector<cplx> s(f.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = f[i] + g[i];
  return {f.grid(), std::move(s), hull(f.support(), g.support())};
}

inline GridFunction operator-(const GridFunction& f, const GridFunction& g) {
  detail::require_same_grid(f, g);
  std::vector<cplx> s(f.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = f[i] - g[i];
  return {f.grid(), std::move(s), hull(f.support(), g.support())};
}

inline GridFunction operator*(cplx c, const GridFunction& f) { return scale(f, c); }

// Pointwise product; the support of f is kept.
inline GridFunction multiply(const GridFunction& f, const GridFunction& g) {
  detail::require_same_grid(f, g);
  std::vector<cplx> s(f.size());
  IndexRange in = f.support_range();
  for (std::size_t i = in.begin; i < in.end; ++i) s[i] = f[i] * g[i];
  return {f.grid(), std::move(s), f.support()};
}

// Samples of b on every node of the grid.
inline std::vector<cplx> b_samples(const AccretiveWeight& weight, const UniformGrid& grid) {
  std::vector<cplx> b(grid.count());
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = weight.eval_b(grid.node(i));
  return b;
}

inline GridFunction multiply_by_b(const AccretiveWeight& weight, const GridFunction& f) {
  std::vector<cplx> s(f.size());
  IndexRange in = f.support_range();
  for (std::size_t i = in.begin; i < in.end; ++i)
    s[i] = weight.eval_b(f.grid().node(i)) * f[i];
  return {f.grid(), std::move(s), f.support()};
}

// Safe everywhere because |b| >= Re b = 1.
inline GridFunction divide_by_b(const AccretiveWeight& weight, const GridFunction& f) {
  std::vector<cplx> s(f.size());
  IndexRange in = f.support_range();
  for (std::size_t i = in.begin; i < in.end; ++i)
    s[i] = f[i] / weight.eval_b(f.grid().node(i));
  return {f.grid(), std::move(s), f.support()};
}

// Zero every node outside the union of the given intervals; the declared
// support becomes their hull.
inline GridFunction truncate_to(const GridFunction& f, const Interval& a, const Interval& b) {
  std::vector<cplx> s(f.size());
  for (IndexRange r : {f.grid().inside(a), f.grid().inside(b)})
    for (std::size_t i = r.begin; i < r.end; ++i) s[i] = f[i];
  return {f.grid(), std::move(s), hull(a, b)};
}

// Copy onto the smallest window of the same lattice that holds the support
// plus one zero node on each side, so trapezoid weights agree with the
// parent grid on every nonzero node.
inline GridFunction restrict_to_support(const GridFunction& f) {
  IndexRange in = f.support_range();
  const auto& g = f.grid();
  std::size_t lo = in.empty() ? 0 : (in.begin > 0 ? in.begin - 1 : 0);
  std::size_t hi = in.empty() ? std::min<std::size_t>(2, g.count())
                              : std::min(in.end + 1, g.count());
  if (hi - lo < 2) hi = std::min(lo + 2, g.count());
  UniformGrid w = g.window({lo, hi});
  std::vector<cplx> s(w.count());
  for (std::size_t i = lo; i < hi; ++i) s[i - lo] = f[i];
  return {w, std::move(s), f.support()};
}

// Zero-extend onto a grid on the same lattice.
inline GridFunction embed(const GridFunction& f, const UniformGrid& target) {
  detail::require(f.grid().aligned_with(target), "embed: grids are not aligned");
  std::vector<cplx> s(target.count());
  auto offset = std::llround((f.grid().left() - target.left()) / target.spacing());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] == cplx{}) continue;
    long long j = offset + static_cast<long long>(i);
    if (j < 0 || j >= static_cast<long long>(target.count()))
      throw GridError("embed: function does not fit on the target grid");
    s[static_cast<std::size_t>(j)] = f[i];
  }
  return {target, std::move(s), f.support()};
}

// Piecewise-linear interpolation of f onto the nodes of target inside
// support. Exact injection when target nodes coincide with nodes of f.
inline GridFunction resample_linear(const GridFunction& f, const UniformGrid& target,
                                    const Interval& support) {
  const auto& src = f.grid();
  return GridFunction::sample(target, support, [&](double x) -> cplx {
    double t = (x - src.left()) / src.spacing();
    double r = std::round(t);
    if (std::abs(t - r) < 1e-9) {
      auto k = static_cast<long long>(r);
      if (k < 0 || k >= static_cast<long long>(src.count())) return {};
      return f[static_cast<std::size_t>(k)];
    }
    if (t < 0 || t > static_cast<double>(src.count() - 1)) return {};
    auto k = static_cast<std::size_t>(std::floor(t));
    double frac = t - static_cast<double>(k);
    return (1.0 - frac) * f[k] + frac * f[k + 1];
  });
}

inline CsvTable to_csv(const GridFunction& f) {
  CsvTable t({"x", "re", "im"});
  for (std::size_t i = 0; i < f.size(); ++i)
    t.row() << f.grid().node(i) << f[i].real() << f[i].imag();
  return t;
}

}  // namespace cauchyfact
