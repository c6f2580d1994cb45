// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "recurlab/linsys.hpp"
#include "recurlab/rankone.hpp"
#include "recurlab/runner.hpp"
#include "recurlab/specmeasure.hpp"

using namespace recurlab;

namespace {

using Clock = std::chrono::steady_clock;

Rational q(long n, long d) { return make_rational(BigInt(n), BigInt(d)); }

struct Outcome {
  bool ok = true;
  std::ostringstream note;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      note << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& name, double time_limit, const std::function<void(Outcome&)>& body) {
  Outcome o;
  auto t0 = Clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.ok = false;
    o.note << " [exception: " << e.what() << "]";
  }
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (time_limit > 0 && secs >= time_limit) {
    o.ok = false;
    o.note << " [over time limit " << time_limit << " s]";
  }
  if (!o.ok) ++failures;
  std::printf("%s %2d %s (%.2f s)%s\n", o.ok ? "PASS" : "FAIL", id, name.c_str(), secs, o.note.str().c_str());
  std::fflush(stdout);
}

// |e^{2 pi i x} - 1| in long double, x in turns.
long double chord(long double x) { return 2 * std::fabs(std::sin(static_cast<long double>(M_PI) * x)); }

bool overlap(const Interval& a, const Interval& b) { return !(a.hi() < b.lo()) && !(b.hi() < a.lo()); }

}  // namespace

int main() {
  PrecisionGuard prec(128);

  criterion(1, "Chacon: m(T^{n_k-1}(A minus I_{k,p_k}) cap A) = 0 exactly, k = 1..4", 10, [](Outcome& o) {
    auto build = build_tower_schedule(chacon_schedule(), 6);
    o.require(build.stages.back().height >= 364, "tower height >= 364");
    auto reps = nonrecurrence_sweep(build, {1, 2, 3, 4});
    const long powers[] = {3, 12, 39, 120};
    o.require(reps.size() == 4, "four reports");
    for (std::size_t i = 0; i < reps.size(); ++i) {
      o.require(reps[i].power == powers[i], "power T^" + std::to_string(powers[i]));
      o.require(reps[i].overlap.total == 0 && reps[i].overlap.undefined == 0, "overlap 0 at k=" + std::to_string(i + 1));
    }
  });

  criterion(2, "Kahane: |sigma_12(n_k) - 1| <= 1/(k+1) for k <= 11, exactly 1 for k >= 12", 1, [](Outcome& o) {
    auto seq = gen_triangular_pow2(13);
    o.require(seq[12] == pow2(78), "last term 2^78");
    std::vector<Rational> a;
    for (long k = 0; k < 12; ++k) a.push_back(q(1, k + 1));
    auto r = kahane_build(seq, a, 12);
    o.require(r.certificate.chain_ok && r.certificate.deviation_ok, "certificate");
    for (std::size_t k = 0; k < 12; ++k) {
      auto dev = (r.measure.fourier(seq[k]) - ComplexInterval::exact(Rational(1))).abs();
      o.require(dev.certainly_at_most(Interval::exact(a[k])), "bound at k=" + std::to_string(k));
    }
    o.require(r.measure.fourier(seq[12]).is_exact_one(), "exact 1 at k=12");
  });

  criterion(3, "Splitter: 20 blocks satisfy all four invariants exactly", 1, [](Outcome& o) {
    auto s = alternating_split(20);
    auto c = check_split(s);
    o.require(s.blocks.size() == 20, "20 blocks");
    o.require(c.nonincreasing, "nonincreasing");
    o.require(c.block_sums, "block sums >= 1/2");
    o.require(c.cube_root_sums, "cube-root sums <= 2^-n");
    o.require(c.partition, "partition");
  });

  criterion(4, "Jamison sup < 1/4 at horizon 12 and witness 1/3 certifies sqrt(3)", 0, [](Outcome& o) {
    auto seq = gen_triangular_pow2(13);
    auto eps = q(1, 4);
    auto rep = jamison_separation_test(seq, eps, 12, seq[12]);
    o.require(rep.below_epsilon, "small-sup lambda found");
    o.require(rep.best_theta.center() != 0, "lambda != 1");
    for (std::size_t k = 0; k < 13; ++k) {
      auto d = unimod_dist(rep.best_theta, seq[k]);
      o.require(d.certainly_below(Interval::exact(eps)), "term " + std::to_string(k) + " < 1/4");
      // Oracle at the center: exact n_k t mod 1, then a long double chord.
      auto c = static_cast<double>(chord(floor_frac(rep.best_theta.center() * seq[k]).get_d()));
      o.require(d.lo_d() - 1e-12 <= c && c <= d.hi_d() + 1e-12, "oracle term " + std::to_string(k));
    }
    auto w = verify_witness(AngleTurns::exact(q(1, 3)), seq, 12);
    o.require(w.verified, "witness verified");
    auto s3 = sqrt(Interval::exact(Rational(3)));
    o.require(overlap(w.delta, s3) && w.delta.width_d() < 1e-30, "delta = sqrt 3");
    for (std::size_t k = 0; k < 13; ++k) {
      // n_k mod 3 is 1 or 2, so every term sits at the chord of a cube root of unity.
      o.require(seq[k] % 3 != 0, "n_k not divisible by 3");
      o.require(overlap(unimod_dist(AngleTurns::exact(q(1, 3)), seq[k]), s3), "term " + std::to_string(k) + " = sqrt 3");
    }
  });

  criterion(5, "Ball: gamma_max = sqrt3/(2+sqrt3) within 1e-9; MC dim 64, 1000 samples, 0 violations", 0, [](Outcome& o) {
    auto s3 = sqrt(Interval::exact(Rational(3)));
    auto cert = ball_certificate(s3, Interval::zero(), 12, 64);
    o.require(cert.gamma_max.has_value(), "gamma_max exists");
    long double oracle = std::sqrt(3.0L) / (2 + std::sqrt(3.0L));
    o.require(std::fabs(cert.gamma_max->mid_d() - static_cast<double>(oracle)) < 1e-9, "gamma_max value");
    DiagShiftOperator op;
    op.diag.assign(64, AngleTurns::exact(Rational(0)));
    op.weights.assign(63, Rational(0));
    op.j_map = build_j_function(64);
    auto seq = gen_triangular_pow2(13);
    auto mc = ball_mc_verify(op, AngleTurns::exact(q(1, 3)), seq, 12, 0.9 * cert.gamma_max->lo_d(), 1000, 1);
    o.note << " violations=" << mc.violations;
    o.require(mc.samples == 1000 && mc.violations == 0, "zero violations");
  });

  criterion(6, "Diagonal chain dim 64, budget 0.1: sup ||D^n_k - I|| <= 0.1, tuned ||T^n_k - I|| <= 0.2", 0, [](Outcome& o) {
    auto seq = gen_triangular_pow2(90);
    auto ch = build_diag_chain(seq, 64, geometric_budgets(64, q(1, 10)));
    auto diag = norm_certificate(ch.op, seq, 10, q(1, 10));
    o.note << " sup_DI=" << diag.sup_DI;
    o.require(diag.sup_DI <= 0.1, "diagonal sup");
    DiagShiftOperator op = ch.op;
    auto tuned = tune_weights(op, seq, 10, q(1, 10));
    o.note << " sup_TI=" << tuned.sup_TI;
    o.require(tuned.sup_TI <= 0.2, "tuned sup");
    bool weighted = false;
    for (const auto& w : op.weights) weighted = weighted || w != 0;
    o.require(weighted, "nonzero weights");
  });

  criterion(7, "Gaussian rectangles: 10-block split, 1e5 samples, fit under C a^{1/3}, moments within 4 SE", 0,
            [](Outcome& o) {
              auto res = run(ExperimentConfig::from_json(
                  json{{"kind", "gauss"}, {"params", {{"blocks", 10}, {"samples", 100000}}}}));
              o.note << " C=" << res.report["C"].get<double>() << " points=" << res.report["points"].size();
              o.require(res.report["fit_ok"].get<bool>(), "fit");
              o.require(res.report["moments_ok"].get<bool>(), "moments");
              o.require(res.report["points"].size() == 5, "five A blocks");
            });

  criterion(8, "Kalish: grid 4096 residual < 10*2pi/4096 for 10 random lambda, exact 0 at lambda = 1", 0, [](Outcome& o) {
    auto id = kalish_eigencheck(AngleTurns::exact(Rational(0)), 4096);
    o.require(id.residual.is_exact_zero(), "exact zero at 1");
    std::mt19937_64 rng(2024);
    double worst = 0;
    for (int i = 0; i < 10; ++i) {
      auto th = q(static_cast<long>(1 + rng() % 999999), 1000000);
      auto r = kalish_eigencheck(AngleTurns::exact(th), 4096);
      worst = std::max(worst, r.residual.hi_d());
    }
    o.note << " worst=" << worst;
    o.require(worst < 10 * 2 * M_PI / 4096, "residual bound");
  });

  criterion(9, "Bohr blocks r = 2, N = 4: formulas, witnesses, combined certificate", 10, [](Outcome& o) {
    auto res = run(ExperimentConfig::from_json(json{{"kind", "bohr"}, {"params", {{"r", 2}, {"N_max", 4}}}}));
    o.require(res.report["problems"].empty(), "block formulas");
    for (const auto& f : res.report["families"]) {
      std::string label = f["family"].get<std::string>();
      o.require(f.contains("small_sup") && f["small_sup"]["passed"].get<bool>(), "small sup " + label);
      o.require(f.contains("rotation") && f["rotation"]["passed"].get<bool>(), "rotation " + label);
    }
    o.require(res.passed && !res.report["combined"].is_null(), "combined certificate");
  });

  criterion(10, "Oracles: product vs direct Fourier, red levels vs intervals, diagonal vs generic norms", 0,
            [](Outcome& o) {
              std::mt19937_64 rng(10);
              for (std::size_t count = 1; count <= 12; ++count) {
                std::vector<DiscreteMeasure> fs;
                for (std::size_t j = 0; j < count; ++j) {
                  fs.push_back(DiscreteMeasure::two_atom(q(static_cast<long>(1 + rng() % 7), 16),
                                                         make_rational(BigInt(1), pow2(j + 1))));
                }
                ConvolutionFactorization f(fs);
                auto direct = f.expand();
                for (long n : {1L, 5L, 256L, 4096L, 12345L}) {
                  auto p = f.fourier(BigInt(n)), d = direct.fourier(BigInt(n));
                  o.require(overlap(p.re, d.re) && overlap(p.im, d.im), "fourier agreement");
                  if (n % (1L << count) == 0) o.require(p.is_exact_one() && d.is_exact_one(), "exact one");
                }
              }
              for (const auto& s : {chacon_schedule(), constant_schedule(BigInt(3), BigInt(4), BigInt(2)),
                                    constant_schedule(BigInt(4), BigInt(5), BigInt(3))}) {
                for (std::size_t k = 1; k <= 4; ++k) {
                  auto b = build_tower_schedule(s, k + 2);
                  auto orc = red_level_oracle(s, k);
                  const auto& next = b.stages[k + 1];
                  std::vector<BigInt> red;
                  for (std::size_t i = 0; i < next.starts.size(); ++i) {
                    if (next.level(i).intersect(b.A).length() == next.width) red.push_back(BigInt(static_cast<unsigned long>(i)));
                  }
                  o.require(red == orc.red, "red levels " + s.label);
                  o.require(orc.hits == 0 && nonrecurrence_check(b, k).overlap.total == 0, "no hits " + s.label);
                }
              }
              PowerNormOptions force;
              force.force_matrix = true;
              for (int c = 0; c < 100; ++c) {
                std::size_t N = 1 + rng() % 6;
                DiagShiftOperator op;
                for (std::size_t i = 0; i < N; ++i) op.diag.push_back(AngleTurns::exact(q(static_cast<long>(rng() % 997), 997)));
                op.weights.assign(N - 1, Rational(0));
                if (N >= 2) op.j_map = build_j_function(N);
                BigInt n(static_cast<unsigned long>(rng() % 100000));
                auto exact = power_norm(op, n);
                auto generic = power_norm(op, n, force);
                o.require(generic.norm_TI.contains(exact.norm_TI), "norm containment case " + std::to_string(c));
              }
            });

  std::printf("%s: %d of 10 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
