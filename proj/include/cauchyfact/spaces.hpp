#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cauchyfact/curve.hpp"
#include "cauchyfact/format.hpp"
#include "cauchyfact/grid.hpp"

namespace cauchyfact {

namespace detail {

// Mean oscillation (1/m) sum |f_i - avg| over nodes [begin, end), node-uniform.
inline double block_oscillation(std::span<const cplx> s, std::size_t begin,
                                std::size_t end) {
  const auto m = static_cast<double>(end - begin);
  cplx avg{};
  for (std::size_t i = begin; i < end; ++i) avg += s[i];
  avg /= m;
  double osc = 0.0;
  for (std::size_t i = begin; i < end; ++i) osc += std::abs(s[i] - avg);
  return osc / m;
}

// Visit every dyadic node block at the given length together with its
// half-shifted copies. fn(begin, end).
template <class F>
void for_each_block(std::size_t n, std::size_t m, F&& fn) {
  if (m < 2 || m > n) return;
  for (std::size_t start = 0; start + m <= n; start += m) fn(start, start + m);
  for (std::size_t start = m / 2; start + m <= n; start += m) fn(start, start + m);
}

}  // namespace detail

// Sup of mean oscillation over node blocks of length count >> level for
// level = 0..max_level, plus the blocks shifted by half their length.
inline double bmo_norm(const GridFunction& f, int max_level) {
  detail::require(max_level >= 1, "bmo_norm: max_level must be >= 1");
  auto s = f.samples();
  const std::size_t n = s.size();
  double best = 0.0;
  for (int level = 0; level <= max_level && level < 63; ++level) {
    std::size_t m = n >> level;
    if (m < 2) break;
    detail::for_each_block(n, m, [&](std::size_t b, std::size_t e) {
      best = std::max(best, detail::block_oscillation(s, b, e));
    });
  }
  return best;
}

// BMO_b norm of a symbol: bmo_norm of symbol / b.
inline double bmo_b_norm(const AccretiveWeight& weight, const GridFunction& symbol,
                         int max_level) {
  return bmo_norm(divide_by_b(weight, symbol), max_level);
}

struct ScaleValue {
  double scale = 0.0;
  double oscillation = 0.0;
};

struct OscillationReport {
  std::vector<ScaleValue> small_scale;  // sup over |I| < delta
  std::vector<ScaleValue> large_scale;  // sup over |I| > R
  std::vector<ScaleValue> far_field;    // unit intervals disjoint from I(0, R)

  CsvTable to_csv() const {
    CsvTable t({"kind", "scale", "oscillation"});
    for (const auto& v : small_scale) t.row() << "small" << v.scale << v.oscillation;
    for (const auto& v : large_scale) t.row() << "large" << v.scale << v.oscillation;
    for (const auto& v : far_field) t.row() << "far" << v.scale << v.oscillation;
    return t;
  }
};

// Three-limit oscillation profile over the dyadic/half-shifted block family.
// Block length in x is m * spacing. Far-field blocks have about unit length.
// An empty family reports 0.
inline OscillationReport vmo_profile(const GridFunction& f, const std::vector<double>& scales) {
  for (std::size_t k = 0; k < scales.size(); ++k) {
    detail::require(scales[k] > 0 && std::isfinite(scales[k]),
                    "vmo_profile: scales must be positive");
    if (k > 0)
      detail::require(scales[k] > scales[k - 1], "vmo_profile: scales must be sorted");
  }
  auto s = f.samples();
  const auto& g = f.grid();
  const std::size_t n = s.size();
  const double h = g.spacing();

  // Every block of the family once, with its length and x-extent.
  struct Block {
    double length, lo, hi, osc;
  };
  std::vector<Block> family;
  for (std::size_t m = n; m >= 2; m /= 2) {
    detail::for_each_block(n, m, [&](std::size_t b, std::size_t e) {
      family.push_back({static_cast<double>(e - b) * h, g.node(b), g.node(e - 1),
                        detail::block_oscillation(s, b, e)});
    });
  }
  std::vector<Block> unit;
  auto mu = static_cast<std::size_t>(std::max<long long>(2, std::llround(1.0 / h)));
  detail::for_each_block(n, mu, [&](std::size_t b, std::size_t e) {
    unit.push_back({static_cast<double>(e - b) * h, g.node(b), g.node(e - 1),
                    detail::block_oscillation(s, b, e)});
  });

  OscillationReport rep;
  for (double sc : scales) {
    double small = 0.0, large = 0.0, far = 0.0;
    for (const auto& blk : family) {
      if (blk.length < sc) small = std::max(small, blk.osc);
      if (blk.length > sc) large = std::max(large, blk.osc);
    }
    for (const auto& blk : unit)
      if (blk.hi <= -sc || blk.lo >= sc) far = std::max(far, blk.osc);
    rep.small_scale.push_back({sc, small});
    rep.large_scale.push_back({sc, large});
    rep.far_field.push_back({sc, far});
  }
  return rep;
}

struct AtomCertificate {
  bool support_ok = false;
  double size_value = 0.0;             // ||a||_inf * |I|
  double cancellation_residual = 0.0;  // |∫ a b| / (||a||_1 ||b||_inf)
  bool accepted = false;
};

inline AtomCertificate check_atom(const GridFunction& a, const Interval& support,
                                  const AccretiveWeight& weight, double tol) {
  detail::require(tol > 0, "check_atom: tol must be positive");
  AtomCertificate c;
  IndexRange in = a.grid().inside(support);
  c.support_ok = true;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!in.contains(i) && a[i] != cplx{}) c.support_ok = false;
  c.size_value = a.sup_norm() * support.length();
  double l1 = lp_norm(a, 1.0);
  c.cancellation_residual =
      l1 > 0 ? std::abs(integrate(multiply_by_b(weight, a))) / (l1 * weight.sup_norm()) : 0.0;
  c.accepted = c.support_ok && c.size_value <= 1.0 + tol && c.cancellation_residual <= tol;
  return c;
}

struct AtomTerm {
  cplx coefficient;
  GridFunction atom;  // stored on a window around its support
  Interval support;
  AtomCertificate certificate;
  int j = 0;  // bump index (1 or 2), 0 when not from a two-bump split
  int i = 0;  // dyadic level
};

struct AtomicDecomposition {
  std::vector<AtomTerm> terms;
  int i0 = 0;
  double M = 0.0;
  double r = 0.0;
  double b_sup = 1.0;  // ||b||_inf of the weight used

  CsvTable to_csv() const {
    CsvTable t({"j", "i", "re_alpha", "im_alpha", "support_center", "support_radius",
                "cert_cancel_residual"});
    for (const auto& term : terms)
      t.row() << term.j << term.i << term.coefficient.real() << term.coefficient.imag()
              << term.support.center << term.support.radius
              << term.certificate.cancellation_residual;
    return t;
  }
};

inline AtomicDecomposition concatenate(AtomicDecomposition a, const AtomicDecomposition& b) {
  a.terms.insert(a.terms.end(), b.terms.begin(), b.terms.end());
  return a;
}

// Sum of |coefficient|: an upper estimate of the atomic H^1_b norm.
inline double h1b_norm_upper(const AtomicDecomposition& dec) {
  double s = 0.0;
  for (const auto& t : dec.terms) {
    if (!t.certificate.accepted)
      throw PreconditionError("h1b_norm_upper: uncertified atom in decomposition");
    s += std::abs(t.coefficient);
  }
  return s;
}

}  // namespace cauchyfact
