#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "recurlab/linsys.hpp"

using namespace recurlab;

namespace {

Rational q(long n, long d) { return make_rational(BigInt(n), BigInt(d)); }

IntegerSequence triangular(std::size_t count) { return gen_triangular_pow2(count); }

DiagShiftOperator diag_op(const std::vector<Rational>& angles) {
  DiagShiftOperator op;
  for (const auto& a : angles) op.diag.push_back(AngleTurns::exact(a));
  op.weights.assign(angles.size() - 1, Rational(0));
  if (angles.size() >= 2) op.j_map = build_j_function(angles.size());
  return op;
}

Interval sqrt3() { return sqrt(Interval::exact(Rational(3))); }

}  // namespace

TEST(JFunction, Examples) {
  auto j = build_j_function(1000);
  EXPECT_EQ(j[2], 1u);
  EXPECT_EQ(j[3], 1u);
  EXPECT_EQ(j[4], 2u);
  std::vector<int> seen(11, 0);
  for (std::size_t n = 2; n <= 1000; ++n) {
    ASSERT_LT(j[n], n);
    ASSERT_GE(j[n], 1u);
    if (j[n] <= 10) ++seen[j[n]];
  }
  for (std::size_t r = 1; r <= 10; ++r) EXPECT_GE(seen[r], 30) << r;
  EXPECT_THROW(build_j_function(1), Error);
}

TEST(DiagChain, SmallChainAndTelescoping) {
  auto seq = triangular(90);
  auto eps = geometric_budgets(12, q(1, 10));
  auto ch = build_diag_chain(seq, 12, eps);
  ASSERT_EQ(ch.op.dim(), 12u);
  ASSERT_EQ(ch.edges.size(), 11u);
  EXPECT_LT(ch.budget, q(1, 10));
  // N = 2: lambda_2 sits within eps_2 of lambda_1 with a tail-exact certificate.
  EXPECT_TRUE(ch.edges[0].edge.tail_exact);
  EXPECT_TRUE(ch.edges[0].edge.value.certainly_below(Interval::exact(eps[2])));
  for (std::size_t a = 0; a < ch.op.dim(); ++a) {
    for (std::size_t b = a + 1; b < ch.op.dim(); ++b) ASSERT_NE(ch.op.diag[a].center(), ch.op.diag[b].center());
  }
  for (const auto& e : ch.edges) {
    // Walk the chain independently and add the edge bounds.
    double sum = 0;
    for (std::size_t n = e.n; n != 1;) {
      const auto& edge = ch.edges[n - 2];
      sum += edge.edge.value.hi_d();
      n = edge.parent;
    }
    EXPECT_NEAR(e.telescoped.hi_d(), sum, 1e-15 * (1 + sum));
    auto direct = d_metric_finite(ch.op.diag[e.n - 1], AngleTurns::exact(Rational(0)), seq, 40);
    EXPECT_TRUE(direct.tail_exact);
    EXPECT_LE(direct.value.lo(), e.telescoped.hi()) << "n=" << e.n;
    EXPECT_TRUE(e.telescoped.certainly_below(Interval::exact(ch.budget)) || e.telescoped.hi_d() <= ch.budget.get_d());
  }
}

TEST(DiagChain, InfeasibleBudget) {
  auto seq = triangular(6);
  EXPECT_THROW(build_diag_chain(seq, 8, geometric_budgets(8, q(1, 1000))), Error);
  EXPECT_THROW(build_diag_chain(gen_powers(BigInt(3), 5).prefix(5), 3, geometric_budgets(3, q(1, 10))), Error);
}

TEST(DiagChain, Dimension64DiagonalNorms) {
  auto seq = triangular(90);
  auto ch = build_diag_chain(seq, 64, geometric_budgets(64, q(1, 10)));
  auto cert = norm_certificate(ch.op, seq, 10, q(1, 10));
  EXPECT_TRUE(cert.pass);
  EXPECT_LE(cert.sup_DI, 0.1);
  for (const auto& r : cert.rows) {
    EXPECT_EQ(r.method, "diagonal");
    EXPECT_TRUE(r.norm_TD.is_exact_zero());
  }
  // The certified diagonal sup never exceeds the largest telescoped bound.
  double tele = 0;
  for (const auto& e : ch.edges) tele = std::max(tele, e.telescoped.hi_d());
  EXPECT_LE(cert.sup_DI, tele * (1 + 1e-12));
}

TEST(PowerNorm, CubeRootOfUnity) {
  auto op = diag_op({q(1, 3)});
  auto r = power_norm(op, BigInt(3));
  EXPECT_TRUE(r.norm_TI.is_exact_zero());
  EXPECT_EQ(r.method, "diagonal");
  PowerNormOptions force;
  force.force_matrix = true;
  auto m = power_norm(op, BigInt(3), force);
  EXPECT_EQ(m.method, "matrix");
  EXPECT_LT(m.norm_TI.hi_d(), 1e-30);
  EXPECT_NEAR(power_norm(op, BigInt(1)).norm_TI.mid_d(), std::sqrt(3.0), 1e-15);
}

TEST(PowerNorm, DiagonalFormulaInsideGenericEnclosure) {
  std::mt19937_64 rng(21);
  PowerNormOptions force;
  force.force_matrix = true;
  for (int c = 0; c < 100; ++c) {
    std::size_t N = 1 + rng() % 6;
    std::vector<Rational> angles;
    for (std::size_t i = 0; i < N; ++i) angles.push_back(q(static_cast<long>(rng() % 997), 997));
    auto op = diag_op(angles);
    for (int t = 0; t < 20; ++t) {
      BigInt n(static_cast<unsigned long>(rng() % 100000));
      auto exact = power_norm(op, n);
      auto generic = power_norm(op, n, force);
      ASSERT_TRUE(generic.norm_TI.contains(exact.norm_TI)) << "case " << c << " n=" << n.get_str();
      ASSERT_LT(generic.norm_TI.width_d(), 1e-25);
      ASSERT_LT(generic.norm_TD.hi_d(), 1e-25);
    }
  }
}

TEST(PowerNorm, WeightedShiftMatchesClosedForm) {
  // 2x2: T^n has off-diagonal alpha (l2^n - l1^n) / (l2 - l1); with l1 = l2 = 1 it is n alpha.
  DiagShiftOperator op = diag_op({Rational(0), Rational(0)});
  op.weights = {q(1, 1000)};
  auto r = power_norm(op, BigInt(50));
  EXPECT_NEAR(r.norm_TI.hi_d(), 0.05, 1e-12);
  EXPECT_LE(r.norm_TI.lo_d(), 0.05);
  EXPECT_TRUE(r.norm_DI.is_exact_zero());
}

TEST(PowerNorm, ChainWeightsHalvingAndTuning) {
  auto seq = triangular(90);
  auto ch = build_diag_chain(seq, 64, geometric_budgets(64, q(1, 10)));
  DiagShiftOperator op = ch.op;
  Rational rho = make_rational(BigInt(1), pow2(62));
  op.weights = geometric_weights(64, rho);
  auto a = norm_certificate(op, seq, 10, q(1, 10));
  op.weights = geometric_weights(64, rho / 2);
  auto b = norm_certificate(op, seq, 10, q(1, 10));
  ASSERT_GT(a.sup_TD, 0);
  double ratio = b.sup_TD / a.sup_TD;
  EXPECT_GT(ratio, 0.45);
  EXPECT_LT(ratio, 0.55);
  EXPECT_LT(b.sup_TD, a.sup_TD);

  DiagShiftOperator tuned = ch.op;
  auto cert = tune_weights(tuned, seq, 10, q(1, 10));
  EXPECT_TRUE(cert.pass);
  EXPECT_LE(cert.sup_TI, 0.2);
  EXPECT_FALSE(tuned.diagonal());
  EXPECT_EQ(cert.rows.size(), 11u);
  auto csv = cert.csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "k,n_k,norm_TI,norm_TD,bits_used");
}

TEST(BallCertificate, Examples) {
  auto zero = Interval::zero();
  auto c0 = ball_certificate(sqrt3(), zero);
  ASSERT_TRUE(c0.gamma_max);
  EXPECT_NEAR(c0.gamma_max->mid_d(), 0.46410161513775455, 1e-12);
  EXPECT_FALSE(ball_certificate(sqrt3(), sqrt3()).gamma_max);
  auto half = ball_certificate(sqrt3(), sqrt3() * Interval::exact(q(1, 2)));
  ASSERT_TRUE(half.gamma_max);
  EXPECT_NEAR(half.gamma_max->mid_d(), 0.1883451608840446, 1e-12);
  // The defining inequality holds just below gamma_max and fails just above.
  for (double g : {0.0, 0.2, 0.46}) EXPECT_GT(std::sqrt(3.0) * (1 - g), 2 * g);
  EXPECT_LT(std::sqrt(3.0) * (1 - 0.4642), 2 * 0.4642);
}

TEST(BallCertificate, MonteCarloIdentity) {
  auto seq = triangular(13);
  auto w = verify_witness(AngleTurns::exact(q(1, 3)), seq, 12);
  ASSERT_TRUE(w.verified);
  auto cert = ball_certificate(w.delta, Interval::zero(), 12, 64);
  std::vector<Rational> ones(64, Rational(0));
  auto op = diag_op(ones);
  double gamma = 0.9 * cert.gamma_max->lo_d();
  auto rep = ball_mc_verify(op, AngleTurns::exact(q(1, 3)), seq, 12, gamma, 1000, 5);
  EXPECT_EQ(rep.violations, 0u);
  EXPECT_GT(rep.min_margin, 0);
}

TEST(BallCertificate, MonteCarloWeightedChain) {
  auto seq = triangular(90);
  auto ch = build_diag_chain(seq, 16, geometric_budgets(16, q(1, 10)));
  DiagShiftOperator op = ch.op;
  op.weights = geometric_weights(16, make_rational(BigInt(1), pow2(60)));
  auto norms = norm_certificate(op, seq, 10, q(1, 10));
  auto w = verify_witness(AngleTurns::exact(q(1, 3)), seq, 10);
  auto cert = ball_certificate(w.delta, Interval(Real::zero(), Real::from_double(norms.sup_TI)), 10, 16);
  ASSERT_TRUE(cert.gamma_max);
  EXPECT_LT(cert.gamma_max->hi_d(), 0.4642);
  auto rep = ball_mc_verify(op, AngleTurns::exact(q(1, 3)), seq, 10, 0.9 * cert.gamma_max->lo_d(), 400, 8);
  EXPECT_EQ(rep.violations, 0u);
  // The rotation leaves the operator norms alone: only delta moves.
  auto again = norm_certificate(op, seq, 10, q(1, 10));
  EXPECT_EQ(again.sup_TI, norms.sup_TI);
}

TEST(Kalish, IdentityIsExact) {
  auto r = kalish_eigencheck(AngleTurns::exact(Rational(0)), 4096);
  EXPECT_TRUE(r.residual.is_exact_zero());
  EXPECT_THROW(kalish_eigencheck(AngleTurns::exact(Rational(0)), 100), Error);
}

TEST(Kalish, MatchesQuadratureOracle) {
  std::mt19937_64 rng(3);
  std::vector<Rational> thetas{q(3, 10)};
  for (int i = 0; i < 10; ++i) thetas.push_back(q(static_cast<long>(1 + rng() % 99999), 100000));
  for (const auto& th : thetas) {
    auto r = kalish_eigencheck(AngleTurns::exact(th), 4096);
    EXPECT_LT(r.residual.hi_d(), 10 * 2 * M_PI / 4096);
    // Closed form of the left-endpoint rule: |zeta_a - lambda|, a = ceil(theta G).
    long double t = static_cast<long double>(th.get_d());
    long double a = std::ceil(t * 4096.0L);
    long double oracle = 2 * std::sin(M_PI * (a - t * 4096.0L) / 4096.0L);
    EXPECT_NEAR(r.residual.mid_d(), static_cast<double>(oracle), 1e-12);
  }
}

TEST(Kalish, AverageResidualHalvesWithGrid) {
  std::mt19937_64 rng(4);
  double coarse = 0, fine = 0;
  for (int i = 0; i < 200; ++i) {
    auto th = AngleTurns::exact(q(static_cast<long>(1 + rng() % 999999), 1000000));
    coarse += kalish_eigencheck(th, 256).residual.mid_d();
    fine += kalish_eigencheck(th, 512).residual.mid_d();
  }
  double ratio = fine / coarse;
  EXPECT_GT(ratio, 0.4);
  EXPECT_LT(ratio, 0.6);
}

TEST(Serialization, OperatorAndCertificates) {
  auto op = diag_op({Rational(0), q(1, 8)});
  op.weights = {q(1, 4)};
  auto j = op.to_json();
  EXPECT_EQ(j["diag"][1], "1/8");
  EXPECT_EQ(j["weights"][0], "1/4");
  auto bc = ball_certificate(sqrt3(), sqrt3()).to_json();
  EXPECT_TRUE(bc["gamma_max"].is_null());
}
