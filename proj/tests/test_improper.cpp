#include <gtest/gtest.h>

#include <cmath>

#include "agebp/effective.hpp"
#include "agebp/improper.hpp"

using namespace agebp;

TEST(Thinning, ContagionAtInfinityKeepsG) {
  const auto G = LifetimeLaw::exponential(1.0);
  const auto GC = thin_by_contagion(G, LifetimeLaw::deterministic(1e6));
  for (double x : {0.1, 0.5, 1.0, 3.0}) EXPECT_NEAR(GC.cdf(x), G.cdf(x), 1e-12);
  EXPECT_NEAR(GC.total_mass(), 1.0, 1e-12);
}

TEST(Thinning, ContagionPointMass) {
  const auto G = LifetimeLaw::exponential(1.0);
  const auto GC = thin_by_contagion(G, LifetimeLaw::deterministic(0.5));
  for (double x : {0.1, 0.3, 0.5, 0.8, 5.0}) EXPECT_NEAR(GC.cdf(x), std::min(G.cdf(x), G.cdf(0.5)), 1e-9) << x;
  EXPECT_NEAR(GC.total_mass(), 1.0 - std::exp(-0.5), 1e-9);
}

TEST(Thinning, ZeroContagionKillsEverything) {
  const auto GC = thin_by_contagion(LifetimeLaw::exponential(1.0), LifetimeLaw::deterministic(0.0));
  EXPECT_EQ(GC.total_mass(), 0.0);
}

TEST(Thinning, IncubationExamples) {
  const auto G = LifetimeLaw::uniform(0.0, 1.0);
  const auto GI0 = thin_by_incubation(G, LifetimeLaw::deterministic(0.0));
  for (double x : {0.2, 0.6, 1.0}) EXPECT_NEAR(GI0.cdf(x), x, 1e-12);
  const auto GI = thin_by_incubation(G, G);
  for (double x : {0.1, 0.4, 0.7, 1.0}) EXPECT_NEAR(GI.cdf(x), x * x / 2.0, 1e-8) << x;
  EXPECT_EQ(thin_by_incubation(G, LifetimeLaw::deterministic(2.0)).total_mass(), 0.0);
}

TEST(Thinning, BoundedByKernelTimesG) {
  const auto G = LifetimeLaw::exponential(1.0);
  const auto I = LifetimeLaw::uniform(0.0, 0.8);
  const auto C = LifetimeLaw::exponential(2.0);
  const auto GI = thin_by_incubation(G, I);
  const auto GC = thin_by_contagion(G, C);
  double prev_i = 0.0, prev_c = 0.0;
  for (int k = 0; k <= 400; ++k) {
    const double x = k * 0.02;
    EXPECT_LE(GI.cdf(x), std::min(I.cdf(x) * G.cdf(x), G.cdf(x)) + 1e-12);
    EXPECT_LE(GC.cdf(x), G.cdf(x) + 1e-12);
    EXPECT_GE(GI.cdf(x), prev_i);
    EXPECT_GE(GC.cdf(x), prev_c);
    prev_i = GI.cdf(x);
    prev_c = GC.cdf(x);
  }
  EXPECT_LE(GI.cdf(1e9), GI.total_mass());
}

TEST(Thinning, SamplerDefectWithinThreeSigma) {
  const auto GC = thin_by_contagion(LifetimeLaw::exponential(1.0), LifetimeLaw::deterministic(0.5));
  Rng rng(9);
  const int n = 20000;
  int inf = 0;
  for (int i = 0; i < n; ++i) inf += std::isinf(GC.sample(rng));
  const double p = 1.0 - GC.total_mass();
  EXPECT_LT(std::abs(inf - n * p), 3 * std::sqrt(n * p * (1 - p)));
}

TEST(Effective, ValueOneAtOne) {
  const auto h = OffspringLaw::heavy_tail(0.5);
  EXPECT_EQ(effective_pgf(h, LifetimeLaw::exponential(1), LifetimeLaw::exponential(1), 1.0), 1.0);
}

TEST(Effective, HeavyTailExponentialClosedForm) {
  // 1 - (1-s)^alpha int G(x)^alpha dC(x), integral by a fine independent rule
  const double a = 0.5;
  const auto h = OffspringLaw::heavy_tail(a);
  const auto G = LifetimeLaw::exponential(1.0);
  const auto C = LifetimeLaw::exponential(2.0);
  double integral = 0.0;
  const int n = 200000;
  const double dx = 20.0 / n;
  for (int i = 0; i < n; ++i) {
    const double x = (i + 0.5) * dx;
    integral += std::pow(G.cdf(x), a) * 2.0 * std::exp(-2.0 * x) * dx;
  }
  for (double s : {0.0, 0.3, 0.9}) {
    EXPECT_NEAR(effective_pgf(h, G, C, s), 1.0 - std::pow(1.0 - s, a) * integral, 2e-4) << s;
  }
}

TEST(Effective, PointMassMixing) {
  const auto h = OffspringLaw::heavy_tail(0.3);
  const auto G = LifetimeLaw::exponential(1.0);
  for (double s : {0.0, 0.5, 0.8}) {
    EXPECT_NEAR(effective_pgf(h, G, LifetimeLaw::deterministic(0.7), s), h.pgf(1.0 - (1.0 - s) * G.cdf(0.7)), 1e-12);
  }
}

TEST(Effective, IsAValidPgf) {
  const auto h = OffspringLaw::heavy_tail(0.5);
  const auto G = LifetimeLaw::grey(1.0, 1.0);
  const auto C = LifetimeLaw::uniform(0.0, 2.0);
  std::vector<double> v;
  for (int i = 0; i <= 100; ++i) v.push_back(effective_pgf(h, G, C, i / 100.0));
  EXPECT_EQ(v.back(), 1.0);
  for (int i = 1; i <= 100; ++i) EXPECT_GE(v[i] - v[i - 1], -1e-15);
  for (int i = 1; i < 100; ++i) EXPECT_GE(v[i + 1] - 2 * v[i] + v[i - 1], -1e-9);
}

TEST(Thinning, LogCdfSurvivesUnderflow) {
  // Grey(2,2) at x = 0.01 has log G = -2e4, far below double range
  const auto G = LifetimeLaw::grey(2.0, 2.0);
  const auto GC = thin_by_contagion(G, LifetimeLaw::exponential(1.0));
  for (double x : {0.01, 0.02, 0.05}) {
    EXPECT_EQ(GC.cdf(x), 0.0);
    // the kernel is within [exp(-x), 1] on [0, x]; the partial cell uses the
    // kernel at the enclosing cell's midpoint, up to one cell width past x
    const double cell = GC.horizon() / static_cast<double>(ThinOptions{}.cells);
    EXPECT_LE(GC.log_cdf(x), G.log_cdf(x) + 1e-9) << x;
    EXPECT_GE(GC.log_cdf(x), G.log_cdf(x) - x - cell) << x;
  }
  EXPECT_NEAR(GC.log_cdf(1.0), std::log(GC.cdf(1.0)), 1e-12);
}
