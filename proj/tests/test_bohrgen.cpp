#include <gtest/gtest.h>

#include <cmath>

#include "recurlab/bohrgen.hpp"

using namespace recurlab;

namespace {

Rational q(long n, long d) { return make_rational(BigInt(n), BigInt(d)); }

BohrFamily zero() { return BohrFamily{}; }
BohrFamily empty() { return BohrFamily{BohrFamily::Kind::Empty, {}}; }
BohrFamily subset1() { return BohrFamily{BohrFamily::Kind::Subset, {1}}; }

}  // namespace

TEST(BohrSchedule, RankOneBlocks) {
  auto s = schedule_build(1, BohrSeeds{}, 3);
  auto set = build_bohr_set(s);
  EXPECT_TRUE(s.subsets.empty());
  EXPECT_EQ(set.family_elements(zero()), (std::vector<BigInt>{7, 13, s.H[2] + 1, 2 * s.H[2] + 1, 3 * s.H[2] + 1,
                                                               s.H[3] + 1, 2 * s.H[3] + 1, 3 * s.H[3] + 1,
                                                               4 * s.H[3] + 1}));
  EXPECT_EQ(set.family_elements(empty()).front(), 6);
  EXPECT_TRUE(check_bohr_set(set).empty());
}

TEST(BohrSchedule, DefaultRankTwo) {
  auto s = schedule_build(2, BohrSeeds{}, 4);
  ASSERT_EQ(s.subsets.size(), 1u);
  EXPECT_EQ(s.delta(subset1()), 2);
  EXPECT_EQ(s.spread(1), 26);
  // Least multiple of 18 above 2 * 710/113 * 6 * 26 = 1960.35...
  EXPECT_EQ(s.H[2], 1962);
  for (std::size_t N = 1; N <= 4; ++N) {
    EXPECT_EQ(s.H[N + 1] % (3 * s.H[N]), 0);
    EXPECT_TRUE(s.growth_ok(N));
    // Growth margin with M = 2 pi.
    double margin = 2 * M_PI * s.H[N].get_d() * s.Q[N].get_d() / s.H[N + 1].get_d();
    EXPECT_LT(margin, std::ldexp(1.0, -static_cast<int>(N)));
    // Minimality: one unit less breaks growth.
    BohrSchedule t = s;
    t.H[N + 1] -= 3 * s.H[N];
    EXPECT_FALSE(t.growth_ok(N));
  }
  auto set = build_bohr_set(s);
  EXPECT_TRUE(check_bohr_set(set).empty());
  EXPECT_EQ(set.merged.size(), (2 + 3 + 4 + 5) * 2 + 4);
}

TEST(BohrSchedule, CheckerCatchesBrokenSets) {
  auto set = build_bohr_set(schedule_build(2, BohrSeeds{}, 3));
  auto bad = set;
  bad.blocks[0].elements[0] += 1;
  EXPECT_FALSE(check_bohr_set(bad).empty());
  bad = set;
  bad.schedule.H[3] = bad.schedule.H[2] * 2;
  EXPECT_FALSE(check_bohr_set(bad).empty());
  EXPECT_THROW(schedule_build(2, BohrSeeds{BigInt(4)}, 3), Error);
  EXPECT_THROW(schedule_build(0, BohrSeeds{}, 3), Error);
}

TEST(BohrSeeds, JsonRoundTrip) {
  BohrSeeds seeds;
  seeds.Q = {BigInt(3), BigInt(5)};
  seeds.delta_empty = 2;
  auto back = BohrSeeds::from_json(seeds.to_json());
  EXPECT_EQ(back.Q, seeds.Q);
  EXPECT_EQ(back.delta_empty, 2);
  auto s = schedule_build(2, back, 2);
  EXPECT_EQ(s.Q[1], 3);
  EXPECT_EQ(s.Q[2], 5);
  EXPECT_EQ(BohrFamily::parse("A{1,2}").subset, (std::vector<int>{1, 2}));
  EXPECT_EQ(BohrFamily::parse(subset1().label()), subset1());
  EXPECT_THROW(BohrFamily::parse("B"), Error);
}

TEST(BlockJamison, AllFamiliesAtSixteenth) {
  auto set = build_bohr_set(schedule_build(2, BohrSeeds{}, 4));
  for (const auto& f : set.schedule.families()) {
    auto w = block_jamison_witness(set, f, q(1, 16));
    EXPECT_TRUE(w.passed) << f.label();
    EXPECT_NE(w.theta.center(), 0);
    EXPECT_TRUE(w.value.certainly_below(Interval::exact(q(1, 16))));
    // Element-by-element re-verification.
    for (const auto& x : set.homogeneous_elements(f)) {
      ASSERT_TRUE(unimod_dist(w.theta, x).certainly_below(Interval::exact(q(1, 16))));
    }
  }
  auto loose = block_jamison_witness(set, zero(), q(3, 1));
  EXPECT_EQ(loose.N0, 1u);
  EXPECT_THROW(block_jamison_witness(set, subset1(), q(1, 1000000000)), Error);
}

TEST(BlockJamison, OneTermBound) {
  auto s = schedule_build(2, BohrSeeds{}, 3);
  for (std::size_t N = 1; N <= 3; ++N) {
    BigInt x = s.H[N] * s.delta_empty;
    auto v = unimod_dist(AngleTurns::exact(make_rational(BigInt(1), s.H[N + 1])), x);
    EXPECT_LE(v.hi_d(), 2 * M_PI * x.get_d() / s.H[N + 1].get_d() * (1 + 1e-12));
  }
}

TEST(BlockRotation, FamiliesAboveHalf) {
  auto set = build_bohr_set(schedule_build(2, BohrSeeds{}, 4));
  for (const auto& f : set.schedule.families()) {
    auto w = block_rotation_witness(set, f);
    EXPECT_TRUE(w.passed) << f.label();
    EXPECT_GT(w.value.lo_d(), 0.5);
    for (const auto& x : set.family_elements(f)) ASSERT_GT(unimod_dist(w.theta, x).lo_d(), 0.5);
  }
  auto w0 = block_rotation_witness(set, zero());
  EXPECT_GE(w0.value.lo_d(), 1.7);
  ASSERT_TRUE(w0.beyond_horizon);
  EXPECT_GT(w0.beyond_horizon->lo_d(), 1.7);
  // Pure 1/3 on H_N q + 1 gives exactly sqrt(3).
  for (const auto& x : set.family_elements(zero())) {
    EXPECT_NEAR(unimod_dist(AngleTurns::exact(q(1, 3)), x).mid_d(), std::sqrt(3.0), 1e-15);
  }
}

TEST(BlockRotation, BadLReported) {
  BohrSeeds seeds;
  seeds.L = {BigInt(4), BigInt(8), BigInt(16)};
  auto set = build_bohr_set(schedule_build(2, seeds, 3));
  auto w = block_rotation_witness(set, subset1());
  EXPECT_FALSE(w.log.empty());
}

TEST(Probe, Examples) {
  auto set = build_bohr_set(schedule_build(2, BohrSeeds{}, 3));
  auto one = bohr_recurrence_probe(set, {AngleTurns::exact(Rational(0))}, q(1, 100));
  EXPECT_TRUE(one.found);
  EXPECT_EQ(one.k, 0u);
  EXPECT_TRUE(one.value.is_exact_zero());
  const BigInt& H2 = set.schedule.H[2];
  auto div = bohr_recurrence_probe(set, {AngleTurns::exact(make_rational(BigInt(1), H2))}, q(1, 1000000));
  ASSERT_TRUE(div.found);
  EXPECT_EQ(div.element, H2 * set.schedule.delta_empty);
  EXPECT_TRUE(div.value.is_exact_zero());
  // The family's own rotation witness never comes back near 1 on that family.
  auto w = block_rotation_witness(set, zero());
  auto adv = bohr_recurrence_probe(set.family_elements(zero()), 2, {w.theta}, q(1, 2));
  EXPECT_FALSE(adv.found);
  EXPECT_EQ(adv.scanned, set.family_elements(zero()).size());
  EXPECT_THROW(bohr_recurrence_probe(set, {w.theta, w.theta, w.theta}, q(1, 2)), Error);
  EXPECT_EQ(ProbeReport::csv_header(), "tuple,eps,found_k,value");
  EXPECT_EQ(adv.csv_row().substr(0, adv.csv_row().find(',')), to_string(w.theta.center()));
}
