#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "support.hpp"

using namespace cauchyfact;

TEST(Curve, FlatCurveIsZero) {
  auto c = make_curve({}, {0.0}, 0.0);
  EXPECT_EQ(c.lipschitz_constant(), 0.0);
  EXPECT_EQ(eval_A(c, 3.7), 0.0);
  EXPECT_EQ(eval_A(c, -1e6), 0.0);
}

TEST(Curve, TentValues) {
  auto c = make_curve({0.0}, {1.0, -1.0}, 0.0);
  EXPECT_EQ(c.lipschitz_constant(), 1.0);
  EXPECT_EQ(eval_A(c, -2.0), -2.0);
  EXPECT_EQ(eval_A(c, 2.0), -2.0);
  EXPECT_EQ(eval_A(c, 0.0), 0.0);
}

TEST(Curve, AnchorIsValueAtFirstBreakpoint) {
  auto c = make_curve({1.0, 3.0}, {0.5, 2.0, -1.0}, 4.0);
  EXPECT_DOUBLE_EQ(eval_A(c, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(eval_A(c, 3.0), 8.0);
  EXPECT_DOUBLE_EQ(eval_A(c, 0.0), 3.5);
  EXPECT_DOUBLE_EQ(eval_A(c, 5.0), 6.0);
}

TEST(Curve, WeightConvention) {
  AccretiveWeight flat(flat_curve());
  EXPECT_EQ(eval_b(flat, 0.3), cplx(1.0, 0.0));

  AccretiveWeight tent(tent_curve());
  EXPECT_EQ(eval_b(tent, -0.5), cplx(1.0, 1.0));
  EXPECT_DOUBLE_EQ(std::abs(eval_b(tent, -0.5)), std::sqrt(2.0));
  // Right-continuous at the breakpoint.
  EXPECT_EQ(eval_b(tent, 0.0), cplx(1.0, -1.0));
  EXPECT_DOUBLE_EQ(tent.sup_norm(), std::sqrt(2.0));
}

TEST(Curve, RandomCurveLipschitzAndContinuity) {
  auto c = random_curve(8, 0.5, 7);
  EXPECT_LE(c.lipschitz_constant(), 0.5);
  AccretiveWeight w(c);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-12.0, 12.0);
  double L = c.lipschitz_constant();
  for (int t = 0; t < 10000; ++t) {
    double x1 = u(rng), x2 = u(rng);
    EXPECT_LE(std::abs(eval_A(c, x1) - eval_A(c, x2)), L * std::abs(x1 - x2) * (1 + 1e-12) + 1e-14);
    EXPECT_EQ(eval_b(w, x1).real(), 1.0);
    EXPECT_LE(std::abs(eval_b(w, x1)), w.sup_norm() * (1 + 1e-15));
  }
  // Continuity at every breakpoint: one-sided limits from the two segments.
  for (double b : c.breakpoints()) {
    double left = eval_A(c, b - 1e-9), right = eval_A(c, b + 1e-9);
    EXPECT_NEAR(left, eval_A(c, b), 1e-8);
    EXPECT_NEAR(right, eval_A(c, b), 1e-8);
  }
  // Sup of |A'| over samples equals the largest |slope| exactly.
  double sup = 0.0;
  for (std::size_t k = 0; k + 1 < c.breakpoints().size(); ++k)
    sup = std::max(sup, std::abs(c.slope_at(0.5 * (c.breakpoints()[k] + c.breakpoints()[k + 1]))));
  sup = std::max(sup, std::abs(c.slope_at(-1e3)));
  sup = std::max(sup, std::abs(c.slope_at(1e3)));
  EXPECT_EQ(sup, c.lipschitz_constant());
}

TEST(Curve, InvalidInputsThrow) {
  EXPECT_THROW(make_curve({1.0, 0.0}, {0, 0, 0}, 0), PreconditionError);
  EXPECT_THROW(make_curve({0.0}, {0.0}, 0), PreconditionError);
  EXPECT_THROW(make_curve({0.0}, {0.0, std::numeric_limits<double>::infinity()}, 0),
               PreconditionError);
  EXPECT_THROW(make_curve({}, {std::nan("")}, 0), PreconditionError);
}

TEST(Curve, ParseCurveText) {
  auto c = parse_curve("anchor 0\nbreakpoints 0\nslopes 1 -1\n");
  EXPECT_EQ(c.lipschitz_constant(), 1.0);
  EXPECT_EQ(eval_A(c, 2.0), -2.0);
  auto f = parse_curve("anchor 0.5\nbreakpoints\nslopes 0\n");
  EXPECT_EQ(eval_A(f, 10.0), 0.5);
}

TEST(Curve, ParseCurveRejectsMalformedText) {
  EXPECT_THROW(parse_curve("anchor 0\nslopes 0\n"), ParseError);
  EXPECT_THROW(parse_curve("anchor x\nbreakpoints\nslopes 0\n"), ParseError);
  EXPECT_THROW(parse_curve("anchor 0\nbreakpoints 1 0\nslopes 0 0 0\n"), ParseError);
  EXPECT_THROW(parse_curve("anchor 0\nbreakpoints 0\nslopes 0\n"), ParseError);
  EXPECT_THROW(parse_curve("anchors 0\nbreakpoints\nslopes 0\n"), ParseError);
  EXPECT_THROW(load_curve("/nonexistent/curve.txt"), ParseError);
}
