#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "cylwig/lattice.hpp"

using namespace cylwig;

namespace {
const double kL = std::sqrt(std::numbers::pi);
}

TEST(LatticeSpec, DefaultsAndInvariants) {
  LatticeSpec def;
  EXPECT_DOUBLE_EQ(def.l, std::sqrt(std::numbers::pi));
  LatticeSpec unit(1.0);
  EXPECT_DOUBLE_EQ(unit.p_period(), 2.0 * std::numbers::pi);
  // p_period is recomputed, never stored: product is exact to machine rounding.
  for (double l : {0.3, 1.0, kL, 7.5}) {
    LatticeSpec s(l);
    EXPECT_NEAR(s.p_period() * s.l, 2.0 * std::numbers::pi, 1e-14);
  }
  EXPECT_THROW(LatticeSpec(0.0), std::invalid_argument);
  EXPECT_THROW(LatticeSpec(-1.0), std::invalid_argument);
  EXPECT_THROW(LatticeSpec(std::numeric_limits<double>::quiet_NaN()),
               std::invalid_argument);
}

TEST(WrapPosition, KnownDecompositions) {
  LatticeSpec s(kL);
  auto w = wrap_position(1.3 * kL, s);
  EXPECT_EQ(w.n, 1);
  EXPECT_NEAR(w.rem, 0.3 * kL, 1e-12 * kL);

  w = wrap_position(0.0, s);
  EXPECT_EQ(w.n, 0);
  EXPECT_DOUBLE_EQ(w.rem, 0.0);

  // Half-open cell with the lower edge included: +l/2 belongs to cell 1.
  w = wrap_position(0.5 * kL, s);
  EXPECT_EQ(w.n, 1);
  EXPECT_DOUBLE_EQ(w.rem, -0.5 * kL);

  w = wrap_position(-0.5 * kL, s);
  EXPECT_EQ(w.n, 0);
  EXPECT_DOUBLE_EQ(w.rem, -0.5 * kL);

  EXPECT_THROW(wrap_position(std::numeric_limits<double>::infinity(), s),
               std::domain_error);
  EXPECT_THROW(wrap_position(std::numeric_limits<double>::quiet_NaN(), s),
               std::domain_error);
}

TEST(WrapPosition, ReassemblyRoundTrip) {
  LatticeSpec s(kL);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-40.0, 40.0);
  for (int i = 0; i < 5000; ++i) {
    double x = u(rng);
    auto w = wrap_position(x, s);
    EXPECT_GE(w.rem, -0.5 * s.l);
    EXPECT_LT(w.rem, 0.5 * s.l);
    double back = static_cast<double>(w.n) * s.l + w.rem;
    EXPECT_NEAR(back, x, 1e-12 * std::max(1.0, std::fabs(x)));
  }
}

TEST(WrapMomentum, AnalogueOnDualCell) {
  LatticeSpec s(2.0);
  double pp = s.p_period();
  auto w = wrap_momentum(0.75 * pp, s);
  EXPECT_EQ(w.n, 1);
  EXPECT_NEAR(w.rem, -0.25 * pp, 1e-13);
  w = wrap_momentum(-0.5 * pp, s);
  EXPECT_EQ(w.n, 0);
  EXPECT_DOUBLE_EQ(w.rem, -0.5 * pp);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  for (int i = 0; i < 2000; ++i) {
    double p = u(rng);
    auto ww = wrap_momentum(p, s);
    EXPECT_GE(ww.rem, -0.5 * pp);
    EXPECT_LT(ww.rem, 0.5 * pp);
    EXPECT_NEAR(static_cast<double>(ww.n) * pp + ww.rem, p,
                1e-12 * std::max(1.0, std::fabs(p)));
  }
}

TEST(WrappedSum, KnownCases) {
  auto r = wrapped_sum(0.4 * kL, 0.4 * kL, kL);
  EXPECT_EQ(r.winding, 1);
  EXPECT_NEAR(r.wrapped, -0.2 * kL, 1e-13);

  r = wrapped_sum(0.0, 0.0, kL);
  EXPECT_EQ(r.winding, 0);
  EXPECT_DOUBLE_EQ(r.wrapped, 0.0);

  r = wrapped_sum(-0.4 * kL, -0.3 * kL, kL);
  EXPECT_EQ(r.winding, -1);
  EXPECT_NEAR(r.wrapped, 0.3 * kL, 1e-13);
}

TEST(WrappedSum, WindingIsTheUpperEdgeStep) {
  // winding = +1 iff a+b >= period/2, winding = -1 iff a+b < -period/2,
  // matching the half-open cell with the lower edge included.
  double period = 2.5;
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-0.5 * period,
                                           std::nextafter(0.5 * period, 0.0));
  for (int i = 0; i < 5000; ++i) {
    double a = u(rng), b = u(rng);
    auto r = wrapped_sum(a, b, period);
    double s = a + b;
    int expect = (s >= 0.5 * period) ? 1 : (s < -0.5 * period) ? -1 : 0;
    EXPECT_EQ(r.winding, expect);
    EXPECT_GE(r.wrapped, -0.5 * period);
    EXPECT_LT(r.wrapped, 0.5 * period);
    EXPECT_NEAR(r.wrapped + r.winding * period, s, 1e-12);
  }
  // Exact upper edge lands back on the included lower edge of the next cell.
  auto edge = wrapped_sum(0.25 * period, 0.25 * period, period);
  EXPECT_EQ(edge.winding, 1);
  EXPECT_DOUBLE_EQ(edge.wrapped, -0.5 * period);
}

TEST(ModularGrid, NodesAndQuadrature) {
  LatticeSpec s(kL);
  ModularGrid g(s, 8, 6);
  EXPECT_DOUBLE_EQ(g.dx(), kL / 8);
  EXPECT_DOUBLE_EQ(g.dp(), s.p_period() / 6);
  EXPECT_DOUBLE_EQ(g.xbar(0), -0.5 * kL);
  EXPECT_NEAR(g.xbar(5), -0.5 * kL + 5.0 * kL / 8, 1e-15);
  EXPECT_DOUBLE_EQ(g.pbar(0), -std::numbers::pi / kL);
  EXPECT_NEAR(g.pbar(4), -std::numbers::pi / kL + 4.0 * s.p_period() / 6,
              1e-15);

  // Rectangle-rule quadrature of the constant 1 over the cell equals 2*pi.
  double total = 0.0;
  for (int j = 0; j < g.Nx; ++j)
    for (int k = 0; k < g.Np; ++k) total += g.cell_weight();
  EXPECT_NEAR(total, 2.0 * std::numbers::pi, 1e-12);

  EXPECT_THROW(ModularGrid(s, 7, 6), std::invalid_argument);   // odd
  EXPECT_THROW(ModularGrid(s, 8, 0), std::invalid_argument);   // empty
  EXPECT_THROW(ModularGrid(s, -4, 6), std::invalid_argument);  // negative
}

TEST(ModularGrid, IndexWrapAccessors) {
  LatticeSpec s(1.0);
  ModularGrid g(s, 4, 4);
  // Wrapping an index by a full period returns the same node.
  EXPECT_EQ(g.wrap_index_x(5), 1);
  EXPECT_EQ(g.wrap_index_x(-1), 3);
  EXPECT_EQ(g.wrap_index_p(4), 0);
  EXPECT_EQ(g.wrap_index_p(-6), 2);
}

TEST(ModularPoint, CellMembership) {
  LatticeSpec s(kL);
  ModularPoint ok{2, 0.1, -1, -0.3};
  EXPECT_TRUE(in_fundamental_cell(ok, s));
  ModularPoint bad_x{0, 0.5 * kL, 0, 0.0};
  EXPECT_FALSE(in_fundamental_cell(bad_x, s));
  ModularPoint low_edge{0, -0.5 * kL, 0, -std::numbers::pi / kL};
  EXPECT_TRUE(in_fundamental_cell(low_edge, s));
}
