#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cauchyfact/error.hpp"

namespace cauchyfact {

using cplx = std::complex<double>;

// Graph curve {x + iA(x)} with A piecewise linear. slopes[0] is the left
// tail, slopes[k] the segment (breakpoints[k-1], breakpoints[k]), and the
// last slope the right tail. The anchor is A at the first breakpoint, or at
// x = 0 for a curve without breakpoints.
class LipschitzCurve {
 public:
  LipschitzCurve() : LipschitzCurve({}, {0.0}, 0.0) {}

  LipschitzCurve(std::vector<double> breakpoints, std::vector<double> slopes,
                 double anchor)
      : breakpoints_(std::move(breakpoints)),
        slopes_(std::move(slopes)),
        anchor_(anchor) {
    detail::require(slopes_.size() == breakpoints_.size() + 1,
                    "curve: slope count must equal breakpoint count + 1");
    for (std::size_t k = 0; k < breakpoints_.size(); ++k) {
      detail::require(std::isfinite(breakpoints_[k]),
                      "curve: non-finite breakpoint");
      if (k > 0)
        detail::require(breakpoints_[k] > breakpoints_[k - 1],
                        "curve: breakpoints must be strictly increasing");
    }
    for (double s : slopes_)
      detail::require(std::isfinite(s), "curve: non-finite slope");
    detail::require(std::isfinite(anchor_), "curve: non-finite anchor");

    values_.resize(breakpoints_.size());
    for (std::size_t k = 0; k < breakpoints_.size(); ++k) {
      values_[k] = k == 0 ? anchor_
                          : values_[k - 1] + slopes_[k] * (breakpoints_[k] -
                                                           breakpoints_[k - 1]);
    }
    for (double s : slopes_) lipschitz_ = std::max(lipschitz_, std::abs(s));
  }

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& slopes() const { return slopes_; }
  double anchor() const { return anchor_; }

  // L = max |slope|, which is exactly ess-sup |A'|.
  double lipschitz_constant() const { return lipschitz_; }

  double eval_A(double x) const {
    if (breakpoints_.empty()) return anchor_ + slopes_[0] * x;
    auto k = static_cast<std::size_t>(
        std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x) -
        breakpoints_.begin());
    if (k == 0) return values_[0] + slopes_[0] * (x - breakpoints_[0]);
    return values_[k - 1] + slopes_[k] * (x - breakpoints_[k - 1]);
  }

  // A'(x), right-continuous at breakpoints.
  double slope_at(double x) const {
    auto k = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x) -
             breakpoints_.begin();
    return slopes_[static_cast<std::size_t>(k)];
  }

 private:
  std::vector<double> breakpoints_;
  std::vector<double> slopes_;
  double anchor_ = 0.0;
  std::vector<double> values_;  // A at each breakpoint
  double lipschitz_ = 0.0;
};

inline LipschitzCurve make_curve(std::vector<double> breakpoints,
                                 std::vector<double> slopes, double anchor) {
  return LipschitzCurve(std::move(breakpoints), std::move(slopes), anchor);
}

inline LipschitzCurve flat_curve() { return make_curve({}, {0.0}, 0.0); }

// A(x) = -|x|.
inline LipschitzCurve tent_curve() { return make_curve({0.0}, {1.0, -1.0}, 0.0); }

// b(x) = 1 + iA'(x). Re b is identically 1.
class AccretiveWeight {
 public:
  AccretiveWeight() = default;
  // Implicit so that curve-taking call sites read naturally.
  AccretiveWeight(LipschitzCurve curve) : curve_(std::move(curve)) {}

  const LipschitzCurve& curve() const { return curve_; }

  cplx eval_b(double x) const { return {1.0, curve_.slope_at(x)}; }

  double sup_norm() const {
    double L = curve_.lipschitz_constant();
    return std::sqrt(1.0 + L * L);
  }

 private:
  LipschitzCurve curve_;
};

inline double eval_A(const LipschitzCurve& curve, double x) {
  return curve.eval_A(x);
}

inline cplx eval_b(const AccretiveWeight& weight, double x) {
  return weight.eval_b(x);
}

namespace detail {

inline std::vector<double> parse_reals(std::string_view text,
                                       const std::string& context) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    if (pos >= text.size()) break;
    std::size_t end = pos;
    while (end < text.size() && text[end] != ' ' && text[end] != '\t') ++end;
    double v = 0.0;
    auto token = text.substr(pos, end - pos);
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size() ||
        !std::isfinite(v))
      throw ParseError(context + ": bad number '" + std::string(token) + "'");
    out.push_back(v);
    pos = end;
  }
  return out;
}

inline std::string_view expect_keyword(std::string_view line,
                                       std::string_view keyword, int lineno) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  if (line.substr(0, keyword.size()) != keyword ||
      (line.size() > keyword.size() && line[keyword.size()] != ' ' &&
       line[keyword.size()] != '\t'))
    throw ParseError("curve file line " + std::to_string(lineno) +
                     ": expected '" + std::string(keyword) + "'");
  return line.substr(keyword.size());
}

}  // namespace detail

// Curve-spec text format:
//   anchor <real>
//   breakpoints <reals...>
//   slopes <reals...>
inline LipschitzCurve parse_curve(std::string_view text) {
  std::vector<std::string> lines;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    lines.push_back(line);
  }
  if (lines.size() != 3)
    throw ParseError("curve file: expected exactly 3 non-empty lines");

  auto anchor = detail::parse_reals(detail::expect_keyword(lines[0], "anchor", 1),
                                    "anchor");
  if (anchor.size() != 1) throw ParseError("curve file: anchor takes one value");
  auto breakpoints = detail::parse_reals(
      detail::expect_keyword(lines[1], "breakpoints", 2), "breakpoints");
  auto slopes =
      detail::parse_reals(detail::expect_keyword(lines[2], "slopes", 3), "slopes");
  try {
    return make_curve(std::move(breakpoints), std::move(slopes), anchor[0]);
  } catch (const PreconditionError& e) {
    throw ParseError(e.what());
  }
}

inline LipschitzCurve load_curve(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open curve file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_curve(buf.str());
}

}  // namespace cauchyfact
