#include "recurlab/specmeasure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

namespace recurlab {

namespace {

std::vector<Atom> merge_sorted(std::map<Rational, Rational>& acc) {
  std::vector<Atom> out;
  out.reserve(acc.size());
  for (auto& [angle, weight] : acc) out.push_back({angle, weight});
  return out;
}

Interval deviation_from_one(const ComplexInterval& z) {
  if (z.is_exact_one()) return Interval::zero();
  return (z - ComplexInterval::exact(Rational(1))).abs();
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms) {
  std::map<Rational, Rational> acc;
  Rational total = 0;
  for (auto& a : atoms) {
    a.angle.canonicalize();
    a.weight.canonicalize();
    if (a.weight <= 0) throw Error("DiscreteMeasure: weights must be positive");
    Rational angle = floor_frac(a.angle);
    if (!acc.emplace(angle, a.weight).second) throw Error("DiscreteMeasure: repeated angle " + to_string(angle));
    total += a.weight;
  }
  if (total != 1) throw Error("DiscreteMeasure: weights sum to " + to_string(total));
  atoms_ = merge_sorted(acc);
}

DiscreteMeasure DiscreteMeasure::dirac(const Rational& angle) { return DiscreteMeasure({{angle, Rational(1)}}); }

DiscreteMeasure DiscreteMeasure::two_atom(const Rational& t, const Rational& angle) {
  if (t <= 0 || t >= 1) throw Error("two_atom: t must lie in (0,1)");
  if (floor_frac(angle) == 0) throw Error("two_atom: second atom coincides with 0");
  Rational rest = 1 - t;
  return DiscreteMeasure({{Rational(0), rest}, {angle, t}});
}

ComplexInterval DiscreteMeasure::fourier(const BigInt& n) const {
  Rational exact_part = 0;
  ComplexInterval sum = ComplexInterval::exact(Rational(0));
  for (const auto& a : atoms_) {
    Rational phase = floor_frac(a.angle * n);
    if (phase == 0) {
      exact_part += a.weight;
    } else {
      sum = sum + Interval::exact(a.weight) * ComplexInterval::unit_root(phase);
    }
  }
  return ComplexInterval::exact(exact_part) + sum;
}

Rational DiscreteMeasure::max_mass() const {
  Rational m = 0;
  for (const auto& a : atoms_) m = std::max(m, a.weight);
  return m;
}

Rational DiscreteMeasure::atom_energy() const {
  Rational e = 0;
  for (const auto& a : atoms_) e += a.weight * a.weight;
  return e;
}

BigInt DiscreteMeasure::lcm_denominator() const {
  BigInt l = 1;
  for (const auto& a : atoms_) l = lcm(l, a.angle.get_den());
  return l;
}

bool DiscreteMeasure::operator==(const DiscreteMeasure& other) const {
  if (atoms_.size() != other.atoms_.size()) return false;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (atoms_[i].angle != other.atoms_[i].angle || atoms_[i].weight != other.atoms_[i].weight) return false;
  }
  return true;
}

json DiscreteMeasure::to_json() const {
  json atoms = json::array();
  for (const auto& a : atoms_) atoms.push_back({{"angle", to_string(a.angle)}, {"weight", to_string(a.weight)}});
  return json{{"atoms", atoms}};
}

DiscreteMeasure DiscreteMeasure::from_json(const json& j) {
  std::vector<Atom> atoms;
  for (const auto& a : j.at("atoms")) {
    atoms.push_back({parse_rational(a.at("angle").get<std::string>()), parse_rational(a.at("weight").get<std::string>())});
  }
  return DiscreteMeasure(std::move(atoms));
}

DiscreteMeasure convolve(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  std::map<Rational, Rational> acc;
  for (const auto& x : mu.atoms()) {
    for (const auto& y : nu.atoms()) {
      Rational angle = floor_frac(x.angle + y.angle);
      Rational w = x.weight * y.weight;
      auto [it, inserted] = acc.emplace(angle, w);
      if (!inserted) it->second += w;
    }
  }
  return DiscreteMeasure(merge_sorted(acc));
}

// ---------------------------------------------------------------------------

ComplexInterval ConvolutionFactorization::fourier(const BigInt& n) const {
  ComplexInterval z = ComplexInterval::exact(Rational(1));
  for (const auto& f : factors_) {
    ComplexInterval v = f.fourier(n);
    if (!v.is_exact_one()) z = z * v;
  }
  return z;
}

DiscreteMeasure ConvolutionFactorization::expand(std::size_t max_atoms) const {
  DiscreteMeasure m = DiscreteMeasure::dirac();
  for (const auto& f : factors_) {
    if (m.size() * f.size() > max_atoms) throw Error("expand: too many atoms");
    m = convolve(m, f);
  }
  return m;
}

Rational ConvolutionFactorization::max_mass() const {
  Rational m = 1;
  for (const auto& f : factors_) m *= f.max_mass();
  return m;
}

json ConvolutionFactorization::to_json() const {
  json fs = json::array();
  for (const auto& f : factors_) fs.push_back(f.to_json());
  return json{{"factors", fs}};
}

// ---------------------------------------------------------------------------

Rational kahane_weight(const Rational& a) {
  if (a <= 0) throw Error("kahane_weight: target must be positive");
  Real t(64);
  Real four_pi = mul(Real::pi(Round::Up), Real::from_rational(Rational(4), Round::Up), Round::Up);
  Real num = Real::from_rational(a, Round::Down);
  mpfr_div(t.get(), num.get(), four_pi.get(), MPFR_RNDD);
  Rational q = t.to_rational();
  Rational half(1, 2);
  return std::min(q, half);
}

json KahaneCertificate::to_json() const {
  json rows = json::array();
  for (std::size_t k = 0; k < targets.size(); ++k) {
    rows.push_back({{"k", k},
                    {"a", to_string(targets[k])},
                    {"t", to_string(weights[k])},
                    {"chain", interval_json(chain[k], 20)},
                    {"deviation", interval_json(deviation[k], 20)}});
  }
  return json{{"seq", seq_label},       {"stages", stages},
              {"factor_family", factor_family},
              {"chain_ok", chain_ok},   {"deviation_ok", deviation_ok},
              {"max_mass", Real::from_rational(max_mass, Round::Up).to_decimal(Round::Up, 20)},
              {"warnings", warnings},   {"rows", rows}};
}

KahaneResult kahane_build(const IntegerSequence& seq, const std::vector<Rational>& a, std::size_t N) {
  if (!seq.divisibility()) throw Error("kahane_build: sequence lacks the divisibility flag");
  if (seq.size() < N + 1) throw Error("kahane_build: need n_0..n_N");
  if (a.size() < N) throw Error("kahane_build: need N targets");
  for (std::size_t k = 0; k < N; ++k) {
    if (a[k] <= 0 || a[k] > 1) throw Error("kahane_build: targets must lie in (0,1]");
    if (k > 0 && a[k] > a[k - 1]) throw Error("kahane_build: targets must be nonincreasing");
  }

  KahaneResult out;
  auto& cert = out.certificate;
  cert.seq_label = seq.label();
  cert.stages = N;
  cert.targets.assign(a.begin(), a.begin() + static_cast<long>(N));
  if (N >= 2) {
    // Divergence cannot be decided from a prefix; flag tails that already decay like k^-2.
    Rational tail = a[N - 1] * Rational(static_cast<unsigned long>(N * N));
    if (tail < a[0]) cert.warnings.push_back("targets decay at least like k^-2; partial sums look convergent");
  }

  std::vector<DiscreteMeasure> factors;
  cert.max_mass = 1;
  for (std::size_t j = 0; j < N; ++j) {
    Rational t = kahane_weight(a[j]);
    cert.weights.push_back(t);
    factors.push_back(DiscreteMeasure::two_atom(t, make_rational(BigInt(1), seq[j + 1])));
    Rational rest = 1 - t;
    cert.max_mass *= std::max(rest, t);
  }
  out.measure = ConvolutionFactorization(std::move(factors));

  cert.chain_ok = cert.deviation_ok = true;
  const Interval two_pi = Interval::exact(Rational(2)) * Interval::pi();
  for (std::size_t k = 0; k < N; ++k) {
    Interval s = Interval::zero();
    for (std::size_t j = k; j < N; ++j) {
      s = s + two_pi * Interval::exact(cert.weights[j] * Rational(seq[k]) / Rational(seq[j + 1]));
    }
    cert.chain.push_back(s);
    Interval dev = deviation_from_one(out.measure.fourier(seq[k]));
    cert.deviation.push_back(dev);
    const Interval target = Interval::exact(a[k]);
    cert.chain_ok = cert.chain_ok && s.certainly_at_most(target);
    cert.deviation_ok = cert.deviation_ok && dev.certainly_at_most(target);
  }
  return out;
}

json RigidityCertificate::to_json() const {
  json devs = json::array();
  for (const auto& d : deviation) devs.push_back(interval_json(d, 20));
  json j{{"passed", passed}, {"min_slack", min_slack}, {"max_slack", max_slack}, {"deviation", devs}};
  j["first_violation"] = first_violation ? json(*first_violation) : json(nullptr);
  return j;
}

RigidityCertificate rigidity_check(const ConvolutionFactorization& measure, const IntegerSequence& seq,
                                   const std::vector<Rational>& a, std::size_t K) {
  if (K >= seq.size() || K >= a.size()) throw Error("rigidity_check: horizon past the sequence or targets");
  RigidityCertificate c;
  c.passed = true;
  c.min_slack = INFINITY;
  c.max_slack = -INFINITY;
  for (std::size_t k = 0; k <= K; ++k) {
    Interval dev = deviation_from_one(measure.fourier(seq[k]));
    c.deviation.push_back(dev);
    double slack = a[k].get_d() - dev.hi_d();
    c.min_slack = std::min(c.min_slack, slack);
    c.max_slack = std::max(c.max_slack, slack);
    if (!dev.certainly_at_most(Interval::exact(a[k])) && c.passed) {
      c.passed = false;
      c.first_violation = k;
    }
  }
  return c;
}

namespace {

template <class F>
WienerEnergy wiener_average(F&& fourier, std::uint64_t N, Rational energy) {
  if (N < 1) throw Error("wiener_energy: N must be >= 1");
  Interval sum = Interval::zero();
  for (std::uint64_t n = 1; n <= N; ++n) {
    ComplexInterval z = fourier(BigInt(static_cast<unsigned long>(n)));
    sum = sum + sqr(z.re) + sqr(z.im);
  }
  return {sum / Interval::exact(Rational(static_cast<unsigned long>(N))), std::move(energy)};
}

}  // namespace

WienerEnergy wiener_energy(const DiscreteMeasure& measure, std::uint64_t N) {
  return wiener_average([&](const BigInt& n) { return measure.fourier(n); }, N, measure.atom_energy());
}

WienerEnergy wiener_energy(const ConvolutionFactorization& measure, std::uint64_t N) {
  // Energies multiply only when the atom sums never collide; the expanded measure decides.
  Rational energy;
  try {
    energy = measure.expand().atom_energy();
  } catch (const Error&) {
    energy = 1;
    for (const auto& f : measure.factors()) energy *= f.atom_energy();
  }
  return wiener_average([&](const BigInt& n) { return measure.fourier(n); }, N, energy);
}

// ---------------------------------------------------------------------------

json RecursiveQReport::to_json() const {
  json j{{"k", k},
         {"L", interval_json(L, 20)},
         {"R", interval_json(R, 20)},
         {"deviation_k", interval_json(deviation_k, 20)},
         {"deviation_k1", interval_json(deviation_k1, 20)},
         {"premise_k", premise_k},
         {"premise_k1", premise_k1},
         {"consistent", consistent()}};
  j["conclusion"] = conclusion ? json(*conclusion) : json(nullptr);
  return j;
}

RecursiveQReport recursive_q_diagnostic(const DiscreteMeasure& measure, const IntegerSequence& seq, std::size_t k) {
  const json& gen = seq.generator();
  if (!gen.contains("q") || gen.value("family", "") != "recursive_q") {
    throw Error("recursive_q_diagnostic: sequence was not built by gen_recursive_q");
  }
  std::vector<BigInt> q;
  for (const auto& v : gen.at("q")) q.push_back(parse_bigint(v.get<std::string>()));
  if (k + 1 >= seq.size() || k + 1 >= q.size()) throw Error("recursive_q_diagnostic: k too large");

  RecursiveQReport r;
  r.k = k;
  r.L = Interval::zero();
  for (const auto& a : measure.atoms()) {
    Rational d = dist_to_int(a.angle);
    r.L = r.L + Interval::exact(a.weight) * two_sin_pi(d, d);
  }
  Interval qk = Interval::exact(Rational(q[k])), qk1 = Interval::exact(Rational(q[k + 1]));
  Interval two_sqrt2 = Interval::exact(Rational(2)) * sqrt(Interval::exact(Rational(2)));
  Interval one = Interval::exact(Rational(1));
  r.R = two_sqrt2 * (one / sqr(qk1) + one / qk);

  r.deviation_k = deviation_from_one(measure.fourier(seq[k]));
  r.deviation_k1 = deviation_from_one(measure.fourier(seq[k + 1]));
  auto inv4 = [](const BigInt& x) { return Interval::exact(make_rational(BigInt(1), x * x * x * x)); };
  r.premise_k = r.deviation_k.certainly_at_most(inv4(q[k]));
  r.premise_k1 = r.deviation_k1.certainly_at_most(inv4(q[k + 1]));
  if (r.premise_k && r.premise_k1) r.conclusion = r.L.certainly_at_most(r.R);
  return r;
}

// ---------------------------------------------------------------------------

json McEstimate::to_json() const {
  return json{{"n", n.get_str()},
              {"samples", samples},
              {"workers", workers},
              {"p_in", p_in},
              {"p_in_se", p_in_se},
              {"p_in_out", p_in_out},
              {"p_in_out_se", p_in_out_se},
              {"p_sym_diff", p_sym_diff},
              {"p_sym_diff_se", p_sym_diff_se},
              {"second_moment", second_moment},
              {"second_moment_se", second_moment_se},
              {"second_moment_expected", second_moment_expected},
              {"diff_moment", diff_moment},
              {"diff_moment_se", diff_moment_se},
              {"diff_moment_expected", diff_moment_expected}};
}

std::string McEstimate::csv_header() { return "n,p_in,p_sym_diff,stderr,second_moment"; }

std::string McEstimate::csv_row() const {
  std::ostringstream os;
  os.precision(10);
  os << n.get_str() << ',' << p_in << ',' << p_sym_diff << ',' << p_sym_diff_se << ',' << second_moment;
  return os.str();
}

namespace {

struct WorkerTally {
  std::uint64_t in = 0, in_out = 0, sym = 0;
  double m2 = 0, m4 = 0, d2 = 0, d4 = 0;
};

double binomial_se(double p, std::uint64_t s) {
  const double S = static_cast<double>(s);
  return std::max(std::sqrt(p * (1 - p) / S), 1.0 / S);
}

}  // namespace

McEstimate gauss_rectangle_overlap_mc(const GaussianRectangleModel& model, const BigInt& n, std::uint64_t samples,
                                      unsigned workers) {
  const auto& atoms = model.measure.atoms();
  if (model.coeffs.size() != atoms.size()) throw Error("gauss mc: one coefficient per atom required");
  if (samples < 1000) throw Error("gauss mc: at least 1000 samples required");
  if (!(model.rect.a < model.rect.b && model.rect.c < model.rect.d)) throw Error("gauss mc: degenerate rectangle");

  const std::size_t m = atoms.size();
  std::vector<std::complex<double>> base(m), shifted(m), diff(m);
  McEstimate est;
  est.n = n;
  est.samples = samples;
  est.workers = workers == 0 ? 4 : workers;
  bool any = false;
  for (std::size_t i = 0; i < m; ++i) {
    const double w = atoms[i].weight.get_d();
    // Centered phase, so lambda - 1 = 2i sin(pi x) e^{i pi x} keeps its relative accuracy near 1.
    Rational x = floor_frac(atoms[i].angle * n);
    if (x > Rational(1, 2)) x -= 1;
    const double phase = x.get_d();
    const std::complex<double> lam = std::polar(1.0, 2 * std::numbers::pi * phase);
    const double s = std::sin(std::numbers::pi * phase);
    const std::complex<double> lam_minus_1 = std::complex<double>(0, 2 * s) * std::polar(1.0, std::numbers::pi * phase);
    base[i] = std::sqrt(w) * model.coeffs[i];
    shifted[i] = lam * base[i];
    diff[i] = lam_minus_1 * base[i];
    any = any || model.coeffs[i] != 0.0;
    est.second_moment_expected += w * std::norm(model.coeffs[i]);
    est.diff_moment_expected += w * 4 * s * s * std::norm(model.coeffs[i]);
  }
  if (!any) throw Error("gauss mc: zero-variance model");

  std::vector<WorkerTally> tallies(est.workers);
  auto run = [&](unsigned w, std::uint64_t count) {
    std::seed_seq seq{static_cast<std::uint32_t>(model.seed), static_cast<std::uint32_t>(model.seed >> 32), w};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    WorkerTally& t = tallies[w];
    for (std::uint64_t s = 0; s < count; ++s) {
      std::complex<double> f = 0, fn = 0, d = 0;
      for (std::size_t i = 0; i < m; ++i) {
        const std::complex<double> z(g(rng), g(rng));
        f += base[i] * z;
        fn += shifted[i] * z;
        d += diff[i] * z;
      }
      const bool a = model.rect.contains(f), b = model.rect.contains(fn);
      t.in += a;
      t.in_out += a && !b;
      t.sym += a != b;
      const double nf = std::norm(f), nd = std::norm(d);
      t.m2 += nf;
      t.m4 += nf * nf;
      t.d2 += nd;
      t.d4 += nd * nd;
    }
  };

  std::vector<std::thread> pool;
  const std::uint64_t share = samples / est.workers, extra = samples % est.workers;
  for (unsigned w = 0; w < est.workers; ++w) pool.emplace_back(run, w, share + (w < extra ? 1 : 0));
  for (auto& th : pool) th.join();

  WorkerTally total;
  for (const auto& t : tallies) {
    total.in += t.in;
    total.in_out += t.in_out;
    total.sym += t.sym;
    total.m2 += t.m2;
    total.m4 += t.m4;
    total.d2 += t.d2;
    total.d4 += t.d4;
  }
  const double S = static_cast<double>(samples);
  est.p_in = static_cast<double>(total.in) / S;
  est.p_in_out = static_cast<double>(total.in_out) / S;
  est.p_sym_diff = static_cast<double>(total.sym) / S;
  est.p_in_se = binomial_se(est.p_in, samples);
  est.p_in_out_se = binomial_se(est.p_in_out, samples);
  est.p_sym_diff_se = binomial_se(est.p_sym_diff, samples);
  est.second_moment = total.m2 / S;
  est.second_moment_se = std::sqrt(std::max(0.0, total.m4 / S - est.second_moment * est.second_moment) / S);
  est.diff_moment = total.d2 / S;
  est.diff_moment_se = std::sqrt(std::max(0.0, total.d4 / S - est.diff_moment * est.diff_moment) / S);
  return est;
}

}  // namespace recurlab
