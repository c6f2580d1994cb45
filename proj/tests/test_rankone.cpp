#include <gtest/gtest.h>

#include <random>

#include "recurlab/rankone.hpp"

using namespace recurlab;

namespace {

Rational q(long n, long d) { return make_rational(BigInt(n), BigInt(d)); }

IntervalSet levels_at(const TowerStage& st, const std::vector<BigInt>& heights) {
  IntervalSet out;
  for (const auto& h : heights) out = out.unite(st.level(h.get_ui()));
  return out;
}

// Oracle: plain step-by-step iteration of the partial map, one piece per step.
IntervalSet naive_power(const TowerStage& st, const IntervalSet& set, unsigned n) {
  IntervalSet cur = set;
  for (unsigned s = 0; s < n; ++s) {
    IntervalSet next;
    for (std::size_t i = 0; i + 1 < st.starts.size(); ++i) {
      IntervalSet part = cur.intersect(st.level(i));
      Rational off = st.starts[i + 1] - st.starts[i];
      for (const auto& p : part.pieces()) next = next.unite(IntervalSet::single(p.lo + off, p.hi + off));
    }
    cur = next;
  }
  return cur;
}

}  // namespace

TEST(IntervalSetOps, Basics) {
  IntervalSet a({{q(0, 1), q(1, 2)}, {q(1, 2), q(3, 4)}});
  ASSERT_EQ(a.pieces().size(), 1u);
  EXPECT_EQ(a.length(), q(3, 4));
  IntervalSet b({{q(1, 4), q(1, 2)}});
  EXPECT_EQ(a.subtract(b).length(), q(1, 2));
  EXPECT_EQ(a.intersect(b), b);
  EXPECT_EQ(a.subtract(b).unite(b), a);
}

TEST(Schedule, ChaconBaseAndHeights) {
  auto s = chacon_schedule();
  EXPECT_EQ(s.base_length(), q(2, 3));
  auto b = build_tower_schedule(s, 3);
  std::vector<long> heights{1, 4, 13, 40};
  for (std::size_t k = 0; k <= 3; ++k) EXPECT_EQ(b.stages[k].height, heights[k]);
  EXPECT_EQ(b.A.length(), q(2, 9));
  EXPECT_EQ(b.spacer_stage, 1u);
  EXPECT_FALSE(b.flags.empty());
  // Canonical decomposition of 1 -> 4 is 4*1 + 0, so the first cut adds no spacer.
  auto from_seq = build_tower_schedule(gen_chacon(5), 3);
  EXPECT_EQ(from_seq.schedule.steps[0].p, 4);
  EXPECT_EQ(from_seq.base_length, q(8, 9));
  EXPECT_EQ(from_seq.spacer_stage, 2u);
  EXPECT_EQ(from_seq.stages[3].height, 40);
}

TEST(Schedule, FourTwoFromThree) {
  auto s = constant_schedule(BigInt(3), BigInt(4), BigInt(2));
  EXPECT_EQ(s.base_length(), q(3, 11));
  auto b = build_tower_schedule(s, 2);
  EXPECT_EQ(b.stages[1].height, 14);
  EXPECT_EQ(b.stages[2].height, 58);
  EXPECT_TRUE(b.flags.empty());
  // One middle spacer plus r-1 = 1 trailing spacer.
  EXPECT_EQ(b.stages[1].column.back(), 0);
  EXPECT_EQ(b.stages[1].column[b.stages[1].column.size() - 2], 4);
}

TEST(Schedule, Rejections) {
  EXPECT_THROW(build_tower_schedule(constant_schedule(BigInt(3), BigInt(2), BigInt(1)), 2), Error);
  EXPECT_THROW(build_tower_schedule(gen_powers(BigInt(2), 5), 3), Error);
}

TEST(Tower, LevelsDisjointEqualWidthAndMassLedger) {
  for (auto s : {chacon_schedule(), constant_schedule(BigInt(3), BigInt(4), BigInt(2)),
                 constant_schedule(BigInt(4), BigInt(5), BigInt(3))}) {
    auto b = build_tower_schedule(s, 4);
    Rational partial(s.n0);
    BigInt prod = 1;
    for (std::size_t k = 0; k < b.stages.size(); ++k) {
      const auto& st = b.stages[k];
      std::vector<IntervalSet::Piece> pieces;
      for (std::size_t i = 0; i < st.starts.size(); ++i) pieces.push_back({st.starts[i], st.starts[i] + st.width});
      IntervalSet u(pieces);
      Rational mass = st.width * Rational(st.height);
      ASSERT_EQ(u.length(), mass) << "overlapping levels at stage " << k;
      ASSERT_LE(u.pieces().back().hi, 1);
      ASSERT_EQ(mass, b.base_length * partial);
      if (k + 1 < b.stages.size()) {
        prod *= s.step(k).p;
        partial += make_rational(s.step(k).r, prod);
      }
    }
    // Everything left of the pool is in the tower.
    EXPECT_EQ(b.top().width * Rational(b.top().height), b.pool_start);
    EXPECT_LE(b.pool_start, 1);
  }
}

TEST(PartialMap, Examples) {
  auto b = build_tower_schedule(chacon_schedule(), 1);
  EXPECT_TRUE(partial_map(b.stages[0]).pieces().empty());
  auto m = partial_map(b.stages[1]);
  ASSERT_EQ(m.pieces().size(), 3u);
  for (const auto& p : m.pieces()) EXPECT_EQ(p.hi - p.lo, q(2, 9));
  EXPECT_EQ(m.domain_length(), m.image_length());
}

TEST(PowerImage, Examples) {
  auto b = build_tower_schedule(chacon_schedule(), 1);
  const auto& st = b.stages[1];
  auto m = partial_map(st);
  auto bottom = st.level(0);
  EXPECT_EQ(power_image(m, bottom, BigInt(0)).image, bottom);
  auto r = power_image(m, bottom, BigInt(3));
  EXPECT_EQ(r.image, st.level(3));
  EXPECT_TRUE(r.undefined.empty());
  auto esc = power_image(m, bottom, BigInt(4));
  EXPECT_TRUE(esc.image.empty());
  EXPECT_EQ(esc.undefined, bottom);
}

TEST(PowerImage, PreservesMeasureAndMatchesNaiveIteration) {
  auto b = build_tower_schedule(constant_schedule(BigInt(3), BigInt(4), BigInt(2)), 2);
  const auto& st = b.top();
  auto m = partial_map(st);
  std::mt19937_64 rng(6);
  for (int it = 0; it < 40; ++it) {
    std::vector<IntervalSet::Piece> ps;
    for (int j = 0; j < 3; ++j) {
      Rational lo = q(static_cast<long>(rng() % 1000), 1000), w = q(static_cast<long>(1 + rng() % 50), 1000);
      ps.push_back({lo, lo + w});
    }
    IntervalSet S(ps);
    unsigned n = static_cast<unsigned>(rng() % 60);
    auto r = power_image(m, S, BigInt(n));
    ASSERT_EQ(r.image.length() + r.undefined.length(), S.length());
    ASSERT_EQ(r.image, naive_power(st, S.subtract(r.undefined), n));
  }
}

TEST(Nonrecurrence, ChaconFirstPowers) {
  auto b = build_tower_schedule(chacon_schedule(), 6);
  for (std::size_t k = 1; k <= 4; ++k) {
    auto rep = nonrecurrence_check(b, k);
    EXPECT_EQ(rep.power, b.stages[k].height - 1);
    EXPECT_EQ(rep.overlap.total, 0) << "k=" << k;
    EXPECT_EQ(rep.overlap.undefined, 0);
    EXPECT_GT(rep.C_mass, 0);
    EXPECT_TRUE(rep.passed());
  }
  auto id = self_overlap(b, b.A, BigInt(0));
  EXPECT_EQ(id.total, q(2, 9));
}

TEST(Nonrecurrence, FourTwoSchedule) {
  auto b = build_tower_schedule(constant_schedule(BigInt(3), BigInt(4), BigInt(2)), 3);
  auto rep = nonrecurrence_check(b, 1);
  EXPECT_EQ(rep.power, 13);
  EXPECT_EQ(rep.overlap.total, 0);
  EXPECT_TRUE(rep.passed());
  EXPECT_THROW(nonrecurrence_check(b, 2), Error);
  EXPECT_THROW(nonrecurrence_check(b, 0), Error);
}

TEST(Nonrecurrence, SweepMatchesSingleChecks) {
  auto b = build_tower_schedule(chacon_schedule(), 5);
  auto all = nonrecurrence_sweep(b, {1, 2, 3});
  ASSERT_EQ(all.size(), 3u);
  for (const auto& r : all) EXPECT_EQ(r.to_json(), nonrecurrence_check(b, r.k).to_json());
}

TEST(RedLevelOracle, AgreesWithIntervals) {
  for (auto s : {chacon_schedule(), constant_schedule(BigInt(3), BigInt(4), BigInt(2)),
                 constant_schedule(BigInt(4), BigInt(5), BigInt(3))}) {
    for (std::size_t k = 1; k <= 4; ++k) {
      auto b = build_tower_schedule(s, k + 2);
      auto o = red_level_oracle(s, k);
      const auto& next = b.stages[k + 1];
      std::vector<BigInt> red;
      for (std::size_t i = 0; i < next.starts.size(); ++i) {
        if (next.level(i).intersect(b.A).length() == next.width) red.push_back(BigInt(static_cast<unsigned long>(i)));
      }
      ASSERT_EQ(red, o.red) << s.label << " k=" << k;
      EXPECT_EQ(levels_at(next, o.red), b.A);
      IntervalSet source = b.A.subtract(b.last_column(k));
      EXPECT_EQ(levels_at(next, o.checked), source);
      auto img = power_image(partial_map(b.top()), source, b.stages[k].height - 1);
      EXPECT_TRUE(img.undefined.empty());
      EXPECT_EQ(img.image, levels_at(next, o.targets)) << s.label << " k=" << k;
      EXPECT_EQ(o.hits, 0u);
      EXPECT_EQ(nonrecurrence_check(b, k).overlap.total, 0);
    }
  }
}

TEST(Shifted, Examples) {
  auto c = gen_chacon(12);
  auto one = shifted_schedule(c, BigInt(1));
  auto plain = schedule_from_sequence(c);
  ASSERT_EQ(one.schedule.steps.size(), plain.steps.size());
  for (std::size_t k = 0; k < plain.steps.size(); ++k) {
    EXPECT_EQ(one.schedule.steps[k].p, plain.steps[k].p);
    EXPECT_EQ(one.schedule.steps[k].r, plain.steps[k].r);
  }
  auto two = shifted_schedule(c, BigInt(2));
  EXPECT_EQ(two.first_index, 1u);
  EXPECT_EQ(two.schedule.n0, 3);
  // 3 -> 12 -> 39: p' = 3, r' = 1 + (3 - 1)(2 - 1).
  for (const auto& st : two.schedule.steps) EXPECT_EQ(st.r, 3);
  EXPECT_TRUE(two.identity_ok);
  EXPECT_EQ(two.schedule.height(2), c[3] - 1);
  EXPECT_EQ(two.schedule.height(1), 12);
  auto b = build_tower_schedule(two.schedule, 4);
  EXPECT_EQ(nonrecurrence_check(b, 1).overlap.total, 0);
}

TEST(Shifted, IdentityProperty) {
  std::mt19937_64 rng(10);
  for (int it = 0; it < 50; ++it) {
    std::vector<BigInt> qs;
    for (int j = 0; j < 11; ++j) qs.emplace_back(static_cast<unsigned long>(3 + rng() % 6));
    auto s = gen_recursive_q(qs, 12);
    auto sh = shifted_schedule(s, BigInt(static_cast<unsigned long>(1 + rng() % 5)));
    ASSERT_TRUE(sh.identity_ok);
  }
}
