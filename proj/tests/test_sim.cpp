#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "agebp/error.hpp"
#include "agebp/sim.hpp"
#include "agebp/stats.hpp"

using namespace agebp;

namespace {

const OffspringLaw kHt = OffspringLaw::heavy_tail(0.5);

SimConfig make(ProcessSpec spec, int64_t cap, double horizon = 10.0, int64_t trials = 1, uint64_t seed = 1) {
  SimConfig c{std::move(spec)};
  c.cap = cap;
  c.horizon = horizon;
  c.trials = trials;
  c.master_seed = seed;
  return c;
}

}  // namespace

TEST(Simulate, UnitChain) {
  const auto o = simulate_forward(
      make(Classical{OffspringLaw::finite({{1, 1.0}}), LifetimeLaw::deterministic(1.0)}, 100), 0);
  EXPECT_EQ(o.births, 11);
  EXPECT_FALSE(o.exploded_proxy);
  EXPECT_TRUE(std::isinf(o.proxy_time));
  ASSERT_EQ(o.generation_sizes.size(), 11u);
  EXPECT_EQ(o.generation_sizes[0], 1);
}

TEST(Simulate, ZeroContagionStopsAtRoot) {
  const auto o = simulate_forward(
      make(ForwardContagious{kHt, LifetimeLaw::exponential(1), LifetimeLaw::deterministic(0.0)}, 1000), 0);
  EXPECT_EQ(o.births, 1);
}

TEST(Simulate, ZeroIncubationEqualsClassical) {
  for (uint64_t t = 0; t < 20; ++t) {
    const auto a = simulate_forward(make(Classical{kHt, LifetimeLaw::exponential(1)}, 2000), t);
    const auto b = simulate_forward(
        make(ForwardIncubation{kHt, LifetimeLaw::exponential(1), LifetimeLaw::deterministic(0.0)}, 2000), t);
    EXPECT_EQ(a, b) << t;
  }
}

TEST(Simulate, WrongDirectionRejected) {
  const auto bc = make(BackwardContagious{kHt, LifetimeLaw::exponential(1), LifetimeLaw::exponential(1)}, 10);
  EXPECT_THROW(simulate_forward(bc, 0), DomainError);
  EXPECT_THROW(simulate_backward(make(Classical{kHt, LifetimeLaw::exponential(1)}, 10), 0), DomainError);
  EXPECT_THROW(Simulator(make(Classical{kHt, LifetimeLaw::exponential(1)}, 0)), DomainError);
}

TEST(Simulate, SeedDeterminism) {
  const auto c = make(ForwardContagious{kHt, LifetimeLaw::exponential(1), LifetimeLaw::exponential(2)}, 5000);
  for (uint64_t t = 0; t < 5; ++t) EXPECT_EQ(simulate_forward(c, t), simulate_forward(c, t));
}

TEST(Simulate, BirthTimesNonDecreasing) {
  auto c = make(ForwardIncubation{kHt, LifetimeLaw::exponential(1), LifetimeLaw::uniform(0, 0.2)}, 5000);
  c.record_births = true;
  for (uint64_t t = 0; t < 10; ++t) {
    const auto o = simulate_forward(c, t);
    ASSERT_EQ(static_cast<int64_t>(o.birth_times.size()), o.births);
    for (std::size_t i = 1; i < o.birth_times.size(); ++i) EXPECT_GE(o.birth_times[i], o.birth_times[i - 1]);
  }
}

TEST(Simulate, BackwardIncubationBeyondSupport) {
  const auto c = make(BackwardIncubation{kHt, LifetimeLaw::uniform(0, 1), LifetimeLaw::deterministic(2.0)}, 100);
  for (uint64_t t = 0; t < 10; ++t) EXPECT_EQ(simulate_backward(c, t).births, 1);
}

TEST(Simulate, BackwardWithoutThinningMatchesClassicalInLaw) {
  auto cl = make(Classical{kHt, LifetimeLaw::exponential(1)}, 2000, 10.0, 400, 1);
  auto bc = make(BackwardContagious{kHt, LifetimeLaw::exponential(1), LifetimeLaw::deterministic(1e6)}, 2000, 10.0, 400, 2);
  const auto a = empirical_explosion_time(cl);
  const auto b = empirical_explosion_time(bc);
  EXPECT_LT(ks_two_sample(a.times, b.times), ks_critical_two_sided(0.001, a.times.size(), b.times.size()));
}

TEST(Simulate, BackwardAdmissionRate) {
  const BackwardContagious bc{kHt, LifetimeLaw::exponential(1), LifetimeLaw::deterministic(0.5)};
  Rng rng(17);
  const int n = 10000;
  const double rate = backward_admission_rate(bc, n, rng);
  const double p = 1.0 - std::exp(-0.5);
  EXPECT_LT(std::abs(rate - p), 3 * std::sqrt(p * (1 - p) / n));
  // the simulator's own admission counts agree with the thinned mass
  const auto c = make(bc, 20000);
  double considered = 0, admitted = 0;
  for (uint64_t t = 0; t < 200; ++t) {
    auto o = simulate_backward(c, t);
    considered += o.children_considered;
    admitted += o.children_admitted;
  }
  ASSERT_GT(considered, 1e4);
  EXPECT_NEAR(admitted / considered, p, 0.02);
}

TEST(Empirical, CapOneGivesTimeZero) {
  const auto e = empirical_explosion_time(make(Classical{kHt, LifetimeLaw::exponential(1)}, 1, 10.0, 30));
  ASSERT_EQ(e.times.size(), 30u);
  for (double t : e.times) EXPECT_EQ(t, 0.0);
}

TEST(Empirical, BinaryTree) {
  const auto e = empirical_explosion_time(
      make(Classical{OffspringLaw::finite({{2, 1.0}}), LifetimeLaw::deterministic(1.0)}, 7, 10.0, 30));
  ASSERT_EQ(e.times.size(), 30u);
  for (double t : e.times) EXPECT_EQ(t, 2.0);
  EXPECT_EQ(e.censored, 0);
}

TEST(Empirical, SortedAndCounted) {
  const auto e = empirical_explosion_time(
      make(ForwardContagious{kHt, LifetimeLaw::exponential(1), LifetimeLaw::deterministic(0.5)}, 1000, 10.0, 100));
  EXPECT_TRUE(std::is_sorted(e.times.begin(), e.times.end()));
  EXPECT_EQ(static_cast<int64_t>(e.times.size()) + e.censored, 100);
  std::ostringstream os;
  e.write_csv(os);
  EXPECT_EQ(os.str().rfind("proxy_time,censored\n", 0), 0u);
}

TEST(Empirical, MedianStableAcrossSeeds) {
  const auto a = empirical_explosion_time(make(Classical{kHt, LifetimeLaw::exponential(1)}, 10000, 10.0, 500, 1));
  const auto b = empirical_explosion_time(make(Classical{kHt, LifetimeLaw::exponential(1)}, 10000, 10.0, 500, 2));
  const double ma = median(a.times), mb = median(b.times);
  EXPECT_LT(std::abs(ma - mb) / ma, 0.1);
}

TEST(Empirical, MedianInsensitiveToDoublingTheCap) {
  const auto a = empirical_explosion_time(make(Classical{kHt, LifetimeLaw::exponential(1)}, 10000, 10.0, 300, 3));
  const auto b = empirical_explosion_time(make(Classical{kHt, LifetimeLaw::exponential(1)}, 20000, 10.0, 300, 3));
  EXPECT_LT(std::abs(median(a.times) - median(b.times)) / median(a.times), 0.1);
}

TEST(Empirical, RaySurvivalUnderUniformContagion) {
  const auto e = empirical_explosion_time(
      make(ForwardContagious{kHt, LifetimeLaw::exponential(1), LifetimeLaw::uniform(0, 1)}, 10000, 10.0, 200));
  EXPECT_GE(e.times.size(), 1u);
}

TEST(Domination, SelfComparison) {
  EmpiricalDistribution d;
  for (int i = 0; i < 100; ++i) d.times.push_back(i * 0.01);
  d.trials = 100;
  const auto r = domination_test(d, d);
  EXPECT_EQ(r.max_gap, 0.0);
  EXPECT_FALSE(r.violated);
}

TEST(Domination, ShiftedLowerIsAViolation) {
  EmpiricalDistribution upper, lower;
  for (int i = 0; i < 100; ++i) {
    upper.times.push_back(i * 0.01);
    lower.times.push_back(i * 0.01 + 1.0);
  }
  upper.trials = lower.trials = 100;
  const auto r = domination_test(lower, upper);
  EXPECT_TRUE(r.violated);
  EXPECT_NEAR(r.max_gap, 1.0, 1e-12);
  EXPECT_EQ(r.to_json()["violated"], true);
}

TEST(Domination, CensoredEntriesCountAsInfinity) {
  EmpiricalDistribution upper, lower;
  for (int i = 0; i < 50; ++i) {
    upper.times.push_back(i);
    lower.times.push_back(i);
  }
  upper.trials = lower.trials = 100;
  upper.censored = lower.censored = 50;
  EXPECT_NEAR(upper.cdf(1e9), 0.5, 1e-15);
  EXPECT_FALSE(domination_test(lower, upper).violated);
}

TEST(Domination, TooFewSamples) {
  EmpiricalDistribution d;
  d.times = {1, 2, 3};
  d.trials = 100;
  d.censored = 97;
  EXPECT_THROW(domination_test(d, d), SampleTooSmall);
}
