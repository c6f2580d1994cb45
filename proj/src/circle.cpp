#include "recurlab/circle.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace recurlab {

AngleTurns AngleTurns::exact(const Rational& theta) {
  AngleTurns a;
  a.center_ = floor_frac(theta);
  return a;
}

AngleTurns AngleTurns::approx(const Rational& center, const Rational& radius) {
  if (radius < 0) throw Error("AngleTurns radius must be nonnegative");
  AngleTurns a;
  a.center_ = floor_frac(center);
  a.radius_ = radius;
  return a;
}

AngleTurns AngleTurns::operator+(const AngleTurns& other) const {
  return approx(center_ + other.center_, radius_ + other.radius_);
}

AngleTurns AngleTurns::operator-(const AngleTurns& other) const {
  return approx(center_ - other.center_, radius_ + other.radius_);
}

json AngleTurns::to_json() const {
  json j{{"turns", to_string(center_)}};
  if (!is_exact()) j["radius"] = to_string(radius_);
  return j;
}

AngleTurns AngleTurns::from_json(const json& j) {
  if (j.is_string()) return exact(parse_rational(j.get<std::string>()));
  Rational c = parse_rational(j.at("turns").get<std::string>());
  if (j.contains("radius")) return approx(c, parse_rational(j.at("radius").get<std::string>()));
  return exact(c);
}

std::pair<Rational, Rational> dist_range(const Rational& start, const Rational& width) {
  const Rational half(1, 2);
  if (width >= 1) return {Rational(0), half};
  Rational s = floor_frac(start);
  Rational e = s + width;
  Rational rest = 1 - e;
  Rational lo = (s == 0 || e >= 1) ? Rational(0) : std::min(s, rest);
  bool has_half = (s <= half && half <= e) || (e >= Rational(3, 2));
  Rational hi = has_half ? half : std::max(dist_to_int(s), dist_to_int(e));
  return {lo, hi};
}

Interval unimod_dist(const AngleTurns& theta, const BigInt& n) {
  if (n < 0) throw Error("unimod_dist: n must be nonnegative");
  if (theta.is_exact()) {
    Rational d = dist_to_int(theta.center() * n);
    return two_sin_pi(d, d);
  }
  Rational start = (theta.center() - theta.radius()) * n;
  Rational width = 2 * theta.radius() * n;
  auto [lo, hi] = dist_range(start, width);
  return two_sin_pi(lo, hi);
}

json DistanceCertificate::to_json() const {
  return json{{"seq", seq_label},   {"horizon", horizon},       {"value", interval_json(value)},
              {"argmax", argmax},   {"tail_exact", tail_exact}};
}

DistanceCertificate d_metric_finite(const AngleTurns& theta1, const AngleTurns& theta2, const IntegerSequence& seq,
                                    std::size_t K) {
  if (K >= seq.size()) throw Error("d_metric_finite: horizon beyond the materialized prefix");
  AngleTurns diff = theta1 - theta2;
  DistanceCertificate cert;
  cert.seq_label = seq.label();
  cert.horizon = K;
  cert.value = Interval::zero();
  for (std::size_t k = 0; k <= K; ++k) {
    Interval v = unimod_dist(diff, seq[k]);
    if (cert.value.lo() < v.lo()) cert.argmax = k;
    cert.value = max(cert.value, v);
  }
  // With divisibility, n_K * diff in Z forces every later term to vanish.
  if (diff.is_exact()) {
    Rational last = diff.center() * seq[K];
    cert.tail_exact = diff.center() == 0 || (seq.divisibility() && last.get_den() == 1);
  }
  return cert;
}

DistanceCertificate sup_at(const AngleTurns& theta, const IntegerSequence& seq, std::size_t K) {
  return d_metric_finite(theta, AngleTurns::exact(Rational(0)), seq, K);
}

// ---------------------------------------------------------------------------
// Jamison search

namespace {

using u128 = unsigned __int128;

class PhaseTable {
 public:
  PhaseTable(const IntegerSequence& seq, std::size_t K, const BigInt& grid) : grid_(grid) {
    grid_d_ = grid.get_d();
    fast_ = mpz_sizeinbase(grid.get_mpz_t(), 2) <= 62;
    for (std::size_t k = 0; k <= K; ++k) {
      BigInt r;
      mpz_mod(r.get_mpz_t(), seq[k].get_mpz_t(), grid.get_mpz_t());
      residues_.push_back(r);
      if (fast_) residues128_.push_back(static_cast<u128>(r.get_ui()));
      Rational ratio = make_rational(seq[k], grid);
      ratio_.push_back(ratio.get_d());
    }
  }

  std::size_t size() const { return residues_.size(); }
  double ratio(std::size_t k) const { return ratio_[k]; }

  /// frac(n_k * i / G) as a double.
  double phase(std::size_t k, const BigInt& i) const {
    if (fast_) {
      u128 m = (residues128_[k] * static_cast<u128>(i.get_ui())) % static_cast<u128>(grid_.get_ui());
      return static_cast<double>(m) / grid_d_;
    }
    BigInt m = residues_[k] * i;
    mpz_mod(m.get_mpz_t(), m.get_mpz_t(), grid_.get_mpz_t());
    return m.get_d() / grid_d_;
  }

 private:
  BigInt grid_;
  double grid_d_ = 1;
  bool fast_ = false;
  std::vector<BigInt> residues_;
  std::vector<u128> residues128_;
  std::vector<double> ratio_;
};

double chord(double d) { return 2.0 * std::sin(M_PI * d); }

double dist_d(double s) {
  s -= std::floor(s);
  return std::min(s, 1.0 - s);
}

double objective(const PhaseTable& t, const BigInt& i) {
  double best = 0;
  for (std::size_t k = 0; k < t.size(); ++k) best = std::max(best, chord(dist_d(t.phase(k, i))));
  return best;
}

double objective_offset(const PhaseTable& t, const BigInt& i, double offset) {
  double best = 0;
  for (std::size_t k = 0; k < t.size(); ++k) best = std::max(best, chord(dist_d(t.phase(k, i) + t.ratio(k) * offset)));
  return best;
}

// Lower bound of the objective over theta in [lo/G, hi/G]; stops once `cutoff` is reached.
double cell_lower(const PhaseTable& t, const BigInt& lo, const BigInt& hi, double cutoff) {
  const double span = BigInt(hi - lo).get_d();
  double best = 0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    double w = t.ratio(k) * span;
    if (w >= 1.0 - 1e-12) continue;
    double s = t.phase(k, lo);
    double e = s + w;
    double dmin = (s == 0.0 || e >= 1.0) ? 0.0 : std::min(s, 1.0 - e);
    double v = chord(dmin) * (1.0 - 1e-9) - 1e-15;
    if (v > best) {
      best = v;
      if (best >= cutoff) break;
    }
  }
  return best;
}

struct Cell {
  double lower;
  BigInt lo;
  BigInt hi;
};

struct CellOrder {
  bool operator()(const Cell& a, const Cell& b) const {
    if (a.lower != b.lower) return a.lower > b.lower;
    return a.lo > b.lo;
  }
};

}  // namespace

json JamisonReport::to_json() const {
  return json{{"seq", seq_label},
              {"horizon", horizon},
              {"grid", grid.get_str()},
              {"epsilon", to_string(epsilon)},
              {"best_theta", best_theta.to_json()},
              {"sup", interval_json(sup)},
              {"argmax", argmax},
              {"below_epsilon", below_epsilon},
              {"exhaustive", exhaustive},
              {"global_lower", global_lower},
              {"nodes", nodes}};
}

JamisonReport jamison_separation_test(const IntegerSequence& seq, const Rational& epsilon, std::size_t K,
                                      const BigInt& grid, const JamisonOptions& options) {
  if (!seq.normalized()) throw Error("jamison_separation_test: sequence must start at 1");
  if (K >= seq.size()) throw Error("jamison_separation_test: horizon beyond the materialized prefix");
  if (grid < seq[K]) throw Error("jamison_separation_test: grid coarser than 1/n_K aliases the top term");

  PhaseTable table(seq, K, grid);
  const BigInt i_min = ceil_of(make_rational(grid, seq[K]));
  const BigInt i_max = floor_of(make_rational(grid, BigInt(2)));
  if (i_min > i_max) throw Error("jamison_separation_test: empty search domain");

  JamisonReport rep;
  rep.seq_label = seq.label();
  rep.horizon = K;
  rep.grid = grid;
  rep.epsilon = epsilon;

  BigInt best_i = i_min;
  double best = objective(table, i_min);
  auto consider = [&](const BigInt& i) {
    double v = objective(table, i);
    if (v < best || (v == best && i < best_i)) {
      best = v;
      best_i = i;
    }
  };
  consider(i_max);

  std::priority_queue<Cell, std::vector<Cell>, CellOrder> queue;
  queue.push(Cell{cell_lower(table, i_min, i_max, best), i_min, i_max});
  double leaf_lower = std::numeric_limits<double>::infinity();
  bool budget_hit = false;
  while (!queue.empty()) {
    if (rep.nodes >= options.node_budget) {
      budget_hit = true;
      break;
    }
    Cell c = queue.top();
    if (c.lower >= best) break;
    queue.pop();
    ++rep.nodes;
    if (c.hi - c.lo <= 1) {
      consider(c.lo);
      consider(c.hi);
      leaf_lower = std::min(leaf_lower, c.lower);
      continue;
    }
    BigInt mid = (c.lo + c.hi) / 2;
    consider(mid);
    double left = cell_lower(table, c.lo, mid, best);
    double right = cell_lower(table, mid, c.hi, best);
    if (left < best) queue.push(Cell{left, c.lo, mid});
    if (right < best) queue.push(Cell{right, mid, c.hi});
  }
  rep.exhaustive = !budget_hit;
  double remaining = queue.empty() ? best : std::min(best, queue.top().lower);
  rep.global_lower = std::min(remaining, leaf_lower);

  AngleTurns grid_theta = AngleTurns::exact(make_rational(best_i, grid));
  DistanceCertificate cert = sup_at(grid_theta, seq, K);
  rep.best_theta = grid_theta;
  rep.sup = cert.value;
  rep.argmax = cert.argmax;

  if (options.refine) {
    // Golden-section search on the continuous objective around the best grid point.
    double a = std::max(-1.0, BigInt(i_min - best_i).get_d());
    double b = std::min(1.0, BigInt(i_max - best_i).get_d());
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = objective_offset(table, best_i, x1), f2 = objective_offset(table, best_i, x2);
    for (int it = 0; it < 80; ++it) {
      if (f1 <= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - phi * (b - a);
        f1 = objective_offset(table, best_i, x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + phi * (b - a);
        f2 = objective_offset(table, best_i, x2);
      }
    }
    Rational t = dyadic_down(0.5 * (a + b), 52);
    Rational theta = (Rational(best_i) + t) / Rational(grid);
    if (theta >= make_rational(BigInt(1), seq[K]) && theta <= Rational(1, 2)) {
      AngleTurns refined = AngleTurns::exact(theta);
      DistanceCertificate rc = sup_at(refined, seq, K);
      bool better = rc.value.hi() < rep.sup.hi() ||
                    (rc.value.hi() == rep.sup.hi() && theta < rep.best_theta.center());
      if (better) {
        rep.best_theta = refined;
        rep.sup = rc.value;
        rep.argmax = rc.argmax;
      }
    }
  }
  rep.below_epsilon = rep.sup.hi() < Real::from_rational(epsilon, Round::Down);
  return rep;
}

// ---------------------------------------------------------------------------

PerturbResult perturb_divisibility(const AngleTurns& theta, const IntegerSequence& seq, std::size_t m) {
  if (!seq.divisibility()) throw Error("perturb_divisibility: sequence lacks the divisibility property");
  if (m < 1 || m >= seq.size()) throw Error("perturb_divisibility: m outside [1, prefix)");
  PerturbResult out;
  AngleTurns step = AngleTurns::exact(make_rational(BigInt(1), seq[m]));
  out.theta = theta + step;
  out.certificate.seq_label = seq.label();
  out.certificate.horizon = m - 1;
  out.certificate.value = Interval::zero();
  for (std::size_t k = 0; k < m; ++k) {
    Interval v = unimod_dist(step, seq[k]);
    if (out.certificate.value.lo() < v.lo()) out.certificate.argmax = k;
    out.certificate.value = max(out.certificate.value, v);
  }
  out.certificate.tail_exact = true;
  return out;
}

// ---------------------------------------------------------------------------
// Rotation witnesses

json WitnessCertificate::to_json() const {
  return json{{"seq", seq_label}, {"theta", theta.to_json()}, {"delta", interval_json(delta)},
              {"horizon", horizon}, {"argmin", argmin},       {"method", method},
              {"verified", verified}};
}

WitnessCertificate verify_witness(const AngleTurns& theta, const IntegerSequence& seq, std::size_t K,
                                  const std::string& method) {
  if (K >= seq.size()) throw Error("verify_witness: horizon beyond the materialized prefix");
  WitnessCertificate c;
  c.seq_label = seq.label();
  c.theta = theta;
  c.horizon = K;
  c.method = method;
  for (std::size_t k = 0; k <= K; ++k) {
    Interval v = unimod_dist(theta, seq[k]);
    if (k == 0) {
      c.delta = v;
    } else {
      if (v.hi() < c.delta.hi()) c.argmin = k;
      c.delta = min(c.delta, v);
    }
  }
  c.verified = c.delta.lo().sign() > 0;
  return c;
}

json WitnessResult::to_json() const {
  return json{{"found", found},
              {"target", to_string(target)},
              {"certificate", certificate.to_json()},
              {"survivors", survivors},
              {"log", log}};
}

Rational simplest_rational(const Rational& lo, const Rational& hi) {
  if (lo < 0 || hi < lo) throw Error("simplest_rational: need 0 <= lo <= hi");
  BigInt c = ceil_of(lo);
  if (c <= hi) return Rational(c);
  BigInt f = floor_of(lo);
  // lo and hi share the integer part f and neither is an integer.
  Rational inner = simplest_rational(1 / (hi - f), 1 / (lo - f));
  return Rational(f) + 1 / inner;
}

Rational removal_radius(const Rational& delta) {
  if (delta <= 0 || delta > 2) throw Error("removal_radius: delta must lie in (0, 2]");
  Real half = Real::from_rational(delta / 2, Round::Up);
  Real as;
  mpfr_asin(as.get(), half.get(), MPFR_RNDU);
  Real rho = div(as, Real::pi(Round::Down), Round::Up);
  // Round up to 64 fractional bits.
  Rational r = rho.to_rational();
  BigInt scale = pow2(64);
  Rational out = make_rational(ceil_of(r * scale), scale);
  return std::min(out, Rational(1, 2));
}

namespace {

struct Span {
  Rational lo;
  Rational hi;
};

// Survivors of [0,1] after removing, for every k <= K, the phases within rho of Z.
std::vector<Span> nested_survivors(const IntegerSequence& seq, std::size_t K, const Rational& rho,
                                   const WitnessOptions& opt, std::vector<std::string>* log) {
  std::vector<Span> live{{Rational(0), Rational(1)}};
  for (std::size_t k = 0; k <= K && !live.empty(); ++k) {
    const BigInt& n = seq[k];
    std::vector<Span> next;
    for (const Span& s : live) {
      BigInt j = floor_of(s.lo * n) - 1;
      const BigInt j_end = floor_of(s.hi * n);
      std::size_t pieces = 0;
      for (; j <= j_end && pieces < opt.max_pieces; ++j) {
        Rational a = make_rational(j, n) + rho / n;
        Rational b = make_rational(j + 1, n) - rho / n;
        Rational lo = std::max(a, s.lo), hi = std::min(b, s.hi);
        if (lo <= hi) {
          next.push_back({lo, hi});
          ++pieces;
        }
      }
    }
    std::stable_sort(next.begin(), next.end(), [](const Span& x, const Span& y) {
      Rational lx = x.hi - x.lo, ly = y.hi - y.lo;
      if (lx != ly) return lx > ly;
      return x.lo < y.lo;
    });
    if (next.size() > opt.beam) next.resize(opt.beam);
    std::sort(next.begin(), next.end(), [](const Span& x, const Span& y) { return x.lo < y.lo; });
    if (log) log->push_back("k=" + std::to_string(k) + " survivors=" + std::to_string(next.size()));
    live = std::move(next);
  }
  return live;
}

}  // namespace

WitnessResult witness_nested_intervals(const IntegerSequence& seq, std::size_t K, const Rational& delta_target,
                                       const WitnessOptions& options) {
  if (K >= seq.size()) throw Error("witness_nested_intervals: horizon beyond the materialized prefix");
  auto ratio = seq.prefix(K + 1).min_ratio();
  if (ratio && *ratio < options.min_ratio) {
    throw Error("witness_nested_intervals: sequence not lacunary over the prefix (min ratio " + to_string(*ratio) + ")");
  }
  if (delta_target <= 0 || delta_target >= 2) throw Error("witness_nested_intervals: target must lie in (0, 2)");

  auto attempt = [&](const Rational& target, WitnessResult& out) {
    out.log.clear();
    Rational rho = removal_radius(target);
    auto live = nested_survivors(seq, K, rho, options, &out.log);
    out.survivors = live.size();
    if (live.empty()) return false;
    const Span* pick = &live.front();
    for (const Span& s : live) {
      if (s.hi - s.lo > pick->hi - pick->lo) pick = &s;
    }
    Rational theta = simplest_rational(pick->lo, pick->hi);
    out.certificate = verify_witness(AngleTurns::exact(theta), seq, K, "nested-intervals");
    out.target = target;
    return out.certificate.verified && out.certificate.delta.lo() >= Real::from_rational(target, Round::Up);
  };

  WitnessResult result;
  if (attempt(delta_target, result)) {
    result.found = true;
    return result;
  }
  // Bisect the target downward, keeping the best success.
  Rational lo = 0, hi = delta_target;
  WitnessResult best;
  for (int step = 0; step < options.bisect_steps; ++step) {
    Rational mid = (lo + hi) / 2;
    WitnessResult trial;
    if (attempt(mid, trial)) {
      trial.found = true;
      best = trial;
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (best.found) {
    best.log.push_back("target lowered from " + to_string(delta_target) + " to " + to_string(best.target));
    return best;
  }
  result.found = false;
  result.log.push_back("no witness at any bisected target");
  return result;
}

}  // namespace recurlab
