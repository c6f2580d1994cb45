#include "recurlab/bohrgen.hpp"

#include <algorithm>
#include <sstream>

namespace recurlab {

std::string BohrFamily::label() const {
  switch (kind) {
    case Kind::Zero:
      return "0";
    case Kind::Empty:
      return "empty";
    case Kind::Subset: {
      std::string s = "A{";
      for (std::size_t i = 0; i < subset.size(); ++i) s += (i ? "," : "") + std::to_string(subset[i]);
      return s + "}";
    }
  }
  return "?";
}

BohrFamily BohrFamily::parse(const std::string& label) {
  BohrFamily f;
  if (label == "0") return f;
  if (label == "empty") {
    f.kind = Kind::Empty;
    return f;
  }
  if (label.size() < 4 || label.rfind("A{", 0) != 0 || label.back() != '}') {
    throw Error("BohrFamily: unknown family '" + label + "'");
  }
  f.kind = Kind::Subset;
  std::stringstream ss(label.substr(2, label.size() - 3));
  std::string item;
  while (std::getline(ss, item, ',')) f.subset.push_back(std::stoi(item));
  if (f.subset.empty()) throw Error("BohrFamily: empty subset label");
  return f;
}

namespace {

json bigints_json(const std::vector<BigInt>& v, std::size_t from = 0) {
  json a = json::array();
  for (std::size_t i = from; i < v.size(); ++i) a.push_back(v[i].get_str());
  return a;
}

std::vector<BigInt> bigints_from(const json& j, const char* key) {
  std::vector<BigInt> out;
  if (j.contains(key)) {
    for (const auto& x : j.at(key)) out.push_back(parse_bigint(x.is_string() ? x.get<std::string>() : x.dump()));
  }
  return out;
}

}  // namespace

json BohrSeeds::to_json() const {
  return json{{"H1", H1.get_str()},           {"Q", bigints_json(Q)},
              {"Theta", bigints_json(Theta)}, {"L", bigints_json(L)},
              {"delta_empty", delta_empty.get_str()}, {"delta_by_size", bigints_json(delta_by_size)}};
}

BohrSeeds BohrSeeds::from_json(const json& j) {
  BohrSeeds s;
  if (j.contains("H1")) s.H1 = parse_bigint(j["H1"].is_string() ? j["H1"].get<std::string>() : j["H1"].dump());
  s.Q = bigints_from(j, "Q");
  s.Theta = bigints_from(j, "Theta");
  s.L = bigints_from(j, "L");
  if (j.contains("delta_empty")) {
    const auto& d = j["delta_empty"];
    s.delta_empty = parse_bigint(d.is_string() ? d.get<std::string>() : d.dump());
  }
  s.delta_by_size = bigints_from(j, "delta_by_size");
  return s;
}

std::vector<BohrFamily> BohrSchedule::families() const {
  std::vector<BohrFamily> out{BohrFamily{}};
  for (const auto& a : subsets) out.push_back(BohrFamily{BohrFamily::Kind::Subset, a});
  out.push_back(BohrFamily{BohrFamily::Kind::Empty, {}});
  return out;
}

BigInt BohrSchedule::delta(const BohrFamily& f) const {
  switch (f.kind) {
    case BohrFamily::Kind::Zero:
      throw Error("BohrSchedule: family 0 has no Delta");
    case BohrFamily::Kind::Empty:
      return delta_empty;
    case BohrFamily::Kind::Subset:
      for (std::size_t i = 0; i < subsets.size(); ++i) {
        if (subsets[i] == f.subset) return delta_subset[i];
      }
  }
  throw Error("BohrSchedule: family " + f.label() + " not in this schedule");
}

BigInt BohrSchedule::spread(std::size_t N) const {
  BigInt x = std::max(Q[N], delta_empty);
  for (const auto& d : delta_subset) {
    BigInt y = d * (L[N] * Theta[N] + 1);
    if (y > x) x = y;
  }
  return x;
}

bool BohrSchedule::growth_ok(std::size_t N) const {
  Rational bound = Rational(pow2(N - 1) * 2) * M * Rational(H[N] * spread(N));
  return Rational(H[N + 1]) > bound;
}

json BohrSchedule::to_json() const {
  json subs = json::array();
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    subs.push_back(json{{"A", subsets[i]}, {"delta", delta_subset[i].get_str()}});
  }
  return json{{"r", r},
              {"N_max", N_max},
              {"H", bigints_json(H, 1)},
              {"Q", bigints_json(Q, 1)},
              {"Theta", bigints_json(Theta, 1)},
              {"L", bigints_json(L, 1)},
              {"delta_empty", delta_empty.get_str()},
              {"subsets", subs},
              {"M", to_string(M)},
              {"seeds", seeds.to_json()}};
}

BohrSchedule schedule_build(int r, const BohrSeeds& seeds, std::size_t N_max) {
  if (r < 1) throw Error("schedule_build: r must be at least 1");
  if (N_max < 1) throw Error("schedule_build: N_max must be at least 1");
  if (seeds.H1 <= 0 || seeds.H1 % 3 != 0) throw Error("schedule_build: H_1 must be a positive multiple of 3");
  if (seeds.delta_empty < 1) throw Error("schedule_build: Delta must be positive");
  BohrSchedule s;
  s.r = r;
  s.N_max = N_max;
  s.seeds = seeds;
  s.M = Rational(710, 113);
  s.delta_empty = seeds.delta_empty;
  for (unsigned mask = 1; mask < (1u << (r - 1)); ++mask) {
    std::vector<int> a;
    for (int i = 0; i < r - 1; ++i) {
      if (mask & (1u << i)) a.push_back(i + 1);
    }
    s.subsets.push_back(a);
  }
  std::sort(s.subsets.begin(), s.subsets.end(),
            [](const auto& x, const auto& y) { return x.size() != y.size() ? x.size() < y.size() : x < y; });
  for (const auto& a : s.subsets) {
    std::size_t i = a.size() - 1;
    BigInt d = i < seeds.delta_by_size.size() ? seeds.delta_by_size[i] : BigInt(static_cast<unsigned long>(a.size() + 1));
    if (d < 1) throw Error("schedule_build: Delta must be positive");
    s.delta_subset.push_back(d);
  }
  auto pick = [](const std::vector<BigInt>& v, std::size_t N, const BigInt& dflt) {
    BigInt x = N - 1 < v.size() ? v[N - 1] : dflt;
    if (x < 1) throw Error("schedule_build: block parameters must be positive");
    return x;
  };
  s.Q.assign(N_max + 1, BigInt(0));
  s.Theta.assign(N_max + 1, BigInt(0));
  s.L.assign(N_max + 1, BigInt(0));
  s.H.assign(N_max + 2, BigInt(0));
  s.H[1] = seeds.H1;
  for (std::size_t N = 1; N <= N_max; ++N) {
    BigInt n1(static_cast<unsigned long>(N + 1));
    s.Q[N] = pick(seeds.Q, N, n1);
    s.Theta[N] = pick(seeds.Theta, N, n1);
    s.L[N] = pick(seeds.L, N, 3 * pow2(N));
  }
  for (std::size_t N = 1; N <= N_max; ++N) {
    BigInt unit = 3 * s.H[N];
    Rational bound = Rational(pow2(N)) * s.M * Rational(s.H[N] * s.spread(N));
    BigInt m = floor_of(bound / Rational(unit)) + 1;
    s.H[N + 1] = m * unit;
  }
  return s;
}

std::vector<BigInt> BohrSet::family_elements(const BohrFamily& f) const {
  std::vector<BigInt> out;
  for (const auto& b : blocks) {
    if (b.family == f) out.insert(out.end(), b.elements.begin(), b.elements.end());
  }
  return out;
}

std::vector<BigInt> BohrSet::homogeneous_elements(const BohrFamily& f) const {
  const auto& s = schedule;
  std::vector<BigInt> out{BigInt(1)};
  for (std::size_t N = 1; N <= s.N_max; ++N) {
    switch (f.kind) {
      case BohrFamily::Kind::Zero:
        for (BigInt q = 1; q <= s.Q[N]; ++q) out.push_back(s.H[N] * q);
        break;
      case BohrFamily::Kind::Subset: {
        BigInt d = s.delta(f);
        for (BigInt j = 1; j <= s.Theta[N]; ++j) out.push_back(s.H[N] * d * s.L[N] * j);
        break;
      }
      case BohrFamily::Kind::Empty:
        out.push_back(s.H[N] * s.delta_empty);
        break;
    }
  }
  return out;
}

json BohrSet::to_json(bool with_elements) const {
  json bs = json::array();
  for (const auto& b : blocks) {
    json e{{"N", b.N}, {"family", b.family.label()}, {"size", b.elements.size()}};
    if (with_elements) e["elements"] = bigints_json(b.elements);
    bs.push_back(e);
  }
  json out{{"schedule", schedule.to_json()}, {"blocks", bs}, {"size", merged.size()}};
  if (with_elements) out["merged"] = bigints_json(merged);
  return out;
}

BohrSet build_bohr_set(const BohrSchedule& schedule) {
  BohrSet set;
  set.schedule = schedule;
  const auto& s = schedule;
  for (std::size_t N = 1; N <= s.N_max; ++N) {
    for (const auto& f : s.families()) {
      BohrBlock b;
      b.N = N;
      b.family = f;
      switch (f.kind) {
        case BohrFamily::Kind::Zero:
          for (BigInt q = 1; q <= s.Q[N]; ++q) b.elements.push_back(s.H[N] * q + 1);
          break;
        case BohrFamily::Kind::Subset: {
          BigInt d = s.delta(f);
          for (BigInt j = 1; j <= s.Theta[N]; ++j) b.elements.push_back(s.H[N] * d * (s.L[N] * j + 1));
          break;
        }
        case BohrFamily::Kind::Empty:
          b.elements.push_back(s.H[N] * s.delta_empty);
          break;
      }
      set.merged.insert(set.merged.end(), b.elements.begin(), b.elements.end());
      set.blocks.push_back(std::move(b));
    }
  }
  std::sort(set.merged.begin(), set.merged.end());
  set.merged.erase(std::unique(set.merged.begin(), set.merged.end()), set.merged.end());
  return set;
}

std::vector<std::string> check_bohr_set(const BohrSet& set) {
  std::vector<std::string> bad;
  const auto& s = set.schedule;
  for (std::size_t N = 1; N <= s.N_max; ++N) {
    if (s.H[N] % 3 != 0) bad.push_back("H_" + std::to_string(N) + " not divisible by 3");
    if (s.H[N + 1] % s.H[N] != 0) bad.push_back("H_" + std::to_string(N) + " does not divide H_" + std::to_string(N + 1));
    if (!s.growth_ok(N)) bad.push_back("growth fails at N = " + std::to_string(N));
  }
  std::size_t total = 0;
  BigInt prev_max = 0;
  for (std::size_t N = 1; N <= s.N_max; ++N) {
    BigInt lo = -1, hi = 0;
    for (const auto& b : set.blocks) {
      if (b.N != N) continue;
      total += b.elements.size();
      for (std::size_t i = 0; i < b.elements.size(); ++i) {
        const BigInt& x = b.elements[i];
        BigInt t(static_cast<unsigned long>(i + 1));
        BigInt expect;
        switch (b.family.kind) {
          case BohrFamily::Kind::Zero:
            expect = s.H[N] * t + 1;
            break;
          case BohrFamily::Kind::Subset:
            expect = s.H[N] * s.delta(b.family) * (s.L[N] * t + 1);
            break;
          case BohrFamily::Kind::Empty:
            expect = s.H[N] * s.delta_empty;
            break;
        }
        if (x != expect) bad.push_back("block formula fails for " + b.family.label() + " at N = " + std::to_string(N));
        if (lo < 0 || x < lo) lo = x;
        if (x > hi) hi = x;
      }
    }
    if (lo >= 0 && lo <= prev_max) bad.push_back("blocks at N = " + std::to_string(N) + " overlap earlier levels");
    prev_max = std::max(prev_max, hi);
  }
  if (set.merged.size() != total) bad.push_back("blocks are not pairwise disjoint");
  return bad;
}

json BlockWitness::to_json() const {
  json out{{"family", family},   {"kind", kind},     {"theta", theta.to_json()},
           {"value", interval_json(value, 17)},    {"checked", checked},
           {"N0", N0},           {"threshold", to_string(threshold)}, {"passed", passed},
           {"log", log}};
  out["beyond_horizon"] = beyond_horizon ? interval_json(*beyond_horizon, 17) : json(nullptr);
  return out;
}

namespace {

Interval sup_over(const Rational& theta, const std::vector<BigInt>& xs) {
  Interval best = Interval::zero();
  auto t = AngleTurns::exact(theta);
  for (const auto& x : xs) best = max(best, unimod_dist(t, x));
  return best;
}

Interval min_over(const Rational& theta, const std::vector<BigInt>& xs) {
  auto t = AngleTurns::exact(theta);
  Interval best = unimod_dist(t, xs.front());
  for (std::size_t i = 1; i < xs.size(); ++i) best = min(best, unimod_dist(t, xs[i]));
  return best;
}

}  // namespace

BlockWitness block_jamison_witness(const BohrSet& set, const BohrFamily& family, const Rational& eps) {
  const auto& s = set.schedule;
  auto xs = set.homogeneous_elements(family);
  BlockWitness w;
  w.family = family.label();
  w.kind = "small_sup";
  w.threshold = eps;
  w.checked = xs.size();
  Interval target = Interval::exact(eps);
  for (std::size_t N0 = 1; N0 <= s.N_max; ++N0) {
    Rational theta = 0;
    for (std::size_t N = N0; N <= s.N_max; ++N) theta += make_rational(BigInt(1), s.H[N + 1]);
    Interval v = sup_over(theta, xs);
    w.log.push_back("N0=" + std::to_string(N0) + " sup<=" + v.hi().to_decimal(Round::Up, 6));
    // Elements past the horizon are multiples of H_{N_max+1}: exact zero.
    if (v.certainly_below(target) || N0 == s.N_max) {
      w.theta = AngleTurns::exact(theta);
      w.value = v;
      w.N0 = N0;
      w.passed = v.certainly_below(target);
      w.beyond_horizon = Interval::zero();
      if (!w.passed) throw Error("block_jamison_witness: schedule growth too slow for eps = " + to_string(eps));
      return w;
    }
  }
  throw Error("block_jamison_witness: empty schedule");
}

BlockWitness block_rotation_witness(const BohrSet& set, const BohrFamily& family, const Rational& keep_floor) {
  const auto& s = set.schedule;
  auto xs = set.family_elements(family);
  if (xs.empty()) throw Error("block_rotation_witness: family has no elements");
  BlockWitness w;
  w.family = family.label();
  w.kind = "rotation";
  w.threshold = Rational(1, 2);
  w.checked = xs.size();
  Rational theta;
  if (family.kind == BohrFamily::Kind::Zero) {
    theta = Rational(1, 3);
    Interval floor_iv = Interval::exact(keep_floor);
    for (std::size_t N = 1; N <= s.N_max; ++N) {
      Rational trial = theta + make_rational(BigInt(1), s.H[N + 1]);
      Interval v = min_over(trial, xs);
      bool keep = floor_iv.certainly_at_most(v);
      w.log.push_back("c_" + std::to_string(N) + "=" + (keep ? "1" : "0"));
      if (keep) theta = trial;
    }
    // Past N_max every H_{N+1} in theta divides H_N and 3 | H_N, so each
    // element's phase is theta itself.
    w.beyond_horizon = two_sin_pi(dist_to_int(theta), dist_to_int(theta));
  } else {
    BigInt d = s.delta(family);
    theta = 0;
    for (std::size_t N = 1; N <= s.N_max; ++N) theta += make_rational(BigInt(1), 3 * s.H[N] * d);
    for (std::size_t N = 1; N <= s.N_max; ++N) {
      if (family.kind == BohrFamily::Kind::Subset && s.L[N] % 3 != 0) {
        w.log.push_back("L_" + std::to_string(N) + " not divisible by 3");
      }
    }
  }
  w.theta = AngleTurns::exact(theta);
  w.value = min_over(theta, xs);
  w.passed = Interval::exact(w.threshold).certainly_below(w.value);
  if (!w.passed) w.log.push_back("tail penalty exceeds sqrt(3) - 1/2");
  return w;
}

json ProbeReport::to_json() const {
  json rs = json::array();
  for (const auto& a : rotations) rs.push_back(a.to_json());
  json out{{"rotations", rs},   {"eps", to_string(eps)},          {"found", found},
           {"scanned", scanned}, {"value", interval_json(value, 17)}};
  if (found) {
    out["k"] = k;
    out["element"] = element.get_str();
  }
  return out;
}

std::string ProbeReport::csv_row() const {
  std::string tuple;
  for (std::size_t i = 0; i < rotations.size(); ++i) tuple += (i ? ";" : "") + to_string(rotations[i].center());
  std::ostringstream os;
  os.precision(17);
  os << tuple << ',' << to_string(eps) << ',' << (found ? std::to_string(k) : std::string("-1")) << ','
     << value.hi_d();
  return os.str();
}

ProbeReport bohr_recurrence_probe(const std::vector<BigInt>& elements, int r, const std::vector<AngleTurns>& rotations,
                                  const Rational& eps) {
  if (rotations.empty()) throw Error("bohr_recurrence_probe: no rotations");
  if (static_cast<int>(rotations.size()) > r) throw Error("bohr_recurrence_probe: more than r rotations");
  ProbeReport rep;
  rep.rotations = rotations;
  rep.eps = eps;
  Interval target = Interval::exact(eps);
  std::optional<Interval> best;
  for (std::size_t k = 0; k < elements.size(); ++k) {
    Interval v = Interval::zero();
    for (const auto& a : rotations) v = max(v, unimod_dist(a, elements[k]));
    ++rep.scanned;
    if (!best || v.hi() < best->hi()) best = v;
    if (v.certainly_below(target)) {
      rep.found = true;
      rep.k = k;
      rep.element = elements[k];
      rep.value = v;
      return rep;
    }
  }
  rep.value = best ? *best : Interval::zero();
  return rep;
}

ProbeReport bohr_recurrence_probe(const BohrSet& set, const std::vector<AngleTurns>& rotations, const Rational& eps) {
  return bohr_recurrence_probe(set.merged, set.schedule.r, rotations, eps);
}

}  // namespace recurlab
