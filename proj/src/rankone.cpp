#include "recurlab/rankone.hpp"

#include <algorithm>
#include <future>
#include <set>

namespace recurlab {

namespace {

constexpr unsigned long kMaxHeight = 5'000'000;

std::size_t to_index(const BigInt& n) {
  if (n < 0 || n > kMaxHeight) throw Error("rankone: height " + n.get_str() + " out of simulated range");
  return n.get_ui();
}

}  // namespace

// ---------------------------------------------------------------------------
// IntervalSet

IntervalSet::IntervalSet(std::vector<Piece> pieces) {
  std::erase_if(pieces, [](const Piece& p) { return !(p.lo < p.hi); });
  std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) { return a.lo < b.lo; });
  for (auto& p : pieces) {
    if (!pieces_.empty() && p.lo <= pieces_.back().hi) {
      if (p.hi > pieces_.back().hi) pieces_.back().hi = p.hi;
    } else {
      pieces_.push_back(std::move(p));
    }
  }
}

IntervalSet IntervalSet::single(const Rational& lo, const Rational& hi) { return IntervalSet({{lo, hi}}); }

Rational IntervalSet::length() const {
  Rational s = 0;
  for (const auto& p : pieces_) s += p.hi - p.lo;
  return s;
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
  std::vector<Piece> all = pieces_;
  all.insert(all.end(), other.pieces_.begin(), other.pieces_.end());
  return IntervalSet(std::move(all));
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
  std::vector<Piece> out;
  std::size_t i = 0, j = 0;
  while (i < pieces_.size() && j < other.pieces_.size()) {
    const auto& a = pieces_[i];
    const auto& b = other.pieces_[j];
    const Rational& lo = a.lo < b.lo ? b.lo : a.lo;
    const Rational& hi = a.hi < b.hi ? a.hi : b.hi;
    if (lo < hi) out.push_back({lo, hi});
    if (a.hi < b.hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::subtract(const IntervalSet& other) const {
  std::vector<Piece> out;
  std::size_t j = 0;
  for (const auto& a : pieces_) {
    Rational cur = a.lo;
    while (j < other.pieces_.size() && other.pieces_[j].hi <= cur) ++j;
    std::size_t t = j;
    while (t < other.pieces_.size() && other.pieces_[t].lo < a.hi) {
      const auto& b = other.pieces_[t];
      if (cur < b.lo) out.push_back({cur, b.lo});
      if (b.hi > cur) cur = b.hi;
      if (b.hi >= a.hi) break;
      ++t;
    }
    if (cur < a.hi) out.push_back({cur, a.hi});
  }
  return IntervalSet(std::move(out));
}

bool IntervalSet::operator==(const IntervalSet& other) const {
  if (pieces_.size() != other.pieces_.size()) return false;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (pieces_[i].lo != other.pieces_[i].lo || pieces_[i].hi != other.pieces_[i].hi) return false;
  }
  return true;
}

json IntervalSet::to_json() const {
  json out = json::array();
  for (const auto& p : pieces_) out.push_back({to_string(p.lo), to_string(p.hi)});
  return out;
}

// ---------------------------------------------------------------------------
// Schedules

const StackStep& RankOneSchedule::step(std::size_t k) const {
  if (steps.empty()) throw Error("schedule has no steps");
  return k < steps.size() ? steps[k] : steps.back();
}

BigInt RankOneSchedule::height(std::size_t k) const {
  BigInt h = n0;
  for (std::size_t j = 0; j < k; ++j) h = step(j).p * h + step(j).r;
  return h;
}

Rational RankOneSchedule::base_length() const {
  if (steps.empty()) throw Error("schedule has no steps");
  Rational total(n0);
  BigInt prod = 1;
  for (const auto& s : steps) {
    prod *= s.p;
    total += make_rational(s.r, prod);
  }
  const auto& last = steps.back();
  total += make_rational(last.r, prod * (last.p - 1));
  return 1 / total;
}

json RankOneSchedule::to_json() const {
  json st = json::array();
  for (const auto& s : steps) st.push_back({{"p", s.p.get_str()}, {"r", s.r.get_str()}});
  return json{{"label", label}, {"n0", n0.get_str()}, {"steps", st}, {"last_step_repeats", true}};
}

RankOneSchedule schedule_from_sequence(const IntegerSequence& seq) {
  if (seq.size() < 2) throw Error("schedule_from_sequence: need at least two terms");
  RankOneSchedule s;
  s.label = seq.label();
  s.n0 = seq[0];
  for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
    auto d = decompose_pk_rk(seq, k);
    s.steps.push_back({d.p, d.r});
  }
  return s;
}

RankOneSchedule chacon_schedule() { return constant_schedule(BigInt(1), BigInt(3), BigInt(1)); }

RankOneSchedule constant_schedule(const BigInt& n0, const BigInt& p, const BigInt& r) {
  RankOneSchedule s;
  s.label = "p=" + p.get_str() + ",r=" + r.get_str() + " from height " + n0.get_str();
  s.n0 = n0;
  s.steps.push_back({p, r});
  return s;
}

// ---------------------------------------------------------------------------
// Towers

json TowerStage::to_json(bool with_levels) const {
  json j{{"k", k}, {"height", height.get_str()}, {"width", to_string(width)}};
  std::size_t reds = std::count(red.begin(), red.end(), true);
  j["red_levels"] = reds;
  if (with_levels) {
    json lv = json::array();
    for (std::size_t i = 0; i < starts.size(); ++i) {
      lv.push_back({{"lo", to_string(starts[i])},
                    {"hi", to_string(starts[i] + width)},
                    {"column", column[i]},
                    {"red", static_cast<bool>(red[i])}});
    }
    j["levels"] = lv;
  }
  return j;
}

IntervalSet TowerBuild::last_column(std::size_t k) const {
  if (k + 1 >= stages.size()) throw Error("last_column: stage k+1 not built");
  const auto& st = stages[k];
  const Rational sub = stages[k + 1].width;
  std::vector<IntervalSet::Piece> out;
  out.reserve(st.starts.size());
  for (const auto& s : st.starts) out.push_back({s + st.width - sub, s + st.width});
  return IntervalSet(std::move(out));
}

json TowerBuild::to_json(bool with_levels) const {
  json st = json::array();
  for (const auto& s : stages) st.push_back(s.to_json(with_levels));
  json j{{"schedule", schedule.to_json()},
         {"base_length", to_string(base_length)},
         {"A", A.to_json()},
         {"A_mass", to_string(A.length())},
         {"pool_start", to_string(pool_start)},
         {"flags", flags},
         {"stages", st}};
  j["spacer_stage"] = spacer_stage ? json(*spacer_stage) : json(nullptr);
  return j;
}

TowerBuild build_tower_schedule(const RankOneSchedule& schedule, std::size_t K) {
  if (schedule.n0 < 1) throw Error("build_tower_schedule: n_0 must be positive");
  for (std::size_t k = 0; k < std::max<std::size_t>(K, schedule.steps.size()); ++k) {
    const auto& s = schedule.step(k);
    if (s.p < 3) throw Error("build_tower_schedule: p_" + std::to_string(k) + " < 3");
    if (s.r < 0) throw Error("build_tower_schedule: signed r_k not supported");
  }
  TowerBuild b;
  b.schedule = schedule;
  b.base_length = schedule.base_length();
  if (schedule.bootstrap()) b.flags.push_back("bootstrap from height " + schedule.n0.get_str() + " < 3");

  TowerStage s0;
  s0.k = 0;
  s0.height = schedule.n0;
  s0.width = b.base_length;
  const std::size_t h0 = to_index(schedule.n0);
  for (std::size_t i = 0; i < h0; ++i) {
    s0.starts.push_back(b.base_length * static_cast<unsigned long>(i));
    s0.column.push_back(1);
    s0.red.push_back(false);
  }
  b.pool_start = b.base_length * static_cast<unsigned long>(h0);
  b.stages.push_back(std::move(s0));

  for (std::size_t k = 0; k < K; ++k) {
    const auto& prev = b.stages.back();
    const auto& st = schedule.step(k);
    const std::size_t p = to_index(st.p), r = to_index(st.r), a = p / 3;
    TowerStage next;
    next.k = k + 1;
    next.height = st.p * prev.height + st.r;
    next.width = prev.width / st.p;
    const std::size_t h = prev.starts.size();
    next.starts.reserve(to_index(next.height));

    auto add_spacer = [&]() {
      if (b.pool_start + next.width > 1) throw Error("build_tower_schedule: spacer pool exhausted");
      const bool first = !b.spacer_stage.has_value();
      next.starts.push_back(b.pool_start);
      next.column.push_back(0);
      next.red.push_back(first);
      if (first) {
        b.spacer_stage = k + 1;
        b.A = IntervalSet::single(b.pool_start, b.pool_start + next.width);
      }
      b.pool_start += next.width;
    };

    for (std::size_t j = 1; j <= p; ++j) {
      const Rational shift = next.width * static_cast<unsigned long>(j - 1);
      for (std::size_t i = 0; i < h; ++i) {
        next.starts.push_back(prev.starts[i] + shift);
        next.column.push_back(static_cast<int>(j));
        next.red.push_back(prev.red[i]);
      }
      if (r >= 1 && j == a) add_spacer();
    }
    for (std::size_t extra = 1; extra < r; ++extra) add_spacer();
    b.stages.push_back(std::move(next));
  }
  return b;
}

TowerBuild build_tower_schedule(const IntegerSequence& seq, std::size_t K) {
  return build_tower_schedule(schedule_from_sequence(seq), K);
}

// ---------------------------------------------------------------------------
// Partial map

PiecewiseTranslation::PiecewiseTranslation(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
  std::sort(pieces_.begin(), pieces_.end(), [](const Piece& a, const Piece& b) { return a.lo < b.lo; });
  const std::size_t n = pieces_.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (pieces_[i].hi > pieces_[i + 1].lo) throw Error("PiecewiseTranslation: overlapping sources");
  }
  std::vector<long> succ(n, -1), pred(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    Rational img = pieces_[i].lo + pieces_[i].offset;
    auto it = std::lower_bound(pieces_.begin(), pieces_.end(), img,
                               [](const Piece& p, const Rational& v) { return p.lo < v; });
    if (it != pieces_.end() && it->lo == img && it->hi - it->lo == pieces_[i].hi - pieces_[i].lo) {
      const auto j = static_cast<std::size_t>(it - pieces_.begin());
      succ[i] = static_cast<long>(j);
      pred[j] = static_cast<long>(i);
    }
  }
  chain_of_.assign(n, n);
  pos_in_chain_.assign(n, 0);
  auto walk = [&](std::size_t head, bool cyclic) {
    std::vector<std::size_t> chain;
    std::size_t cur = head;
    do {
      chain_of_[cur] = chains_.size();
      pos_in_chain_[cur] = chain.size();
      chain.push_back(cur);
      if (succ[cur] < 0) break;
      cur = static_cast<std::size_t>(succ[cur]);
    } while (cur != head);
    chains_.push_back(std::move(chain));
    cyclic_.push_back(cyclic);
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (pred[i] < 0) walk(i, false);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (chain_of_[i] == n) walk(i, true);
  }
}

Rational PiecewiseTranslation::domain_length() const {
  Rational s = 0;
  for (const auto& p : pieces_) s += p.hi - p.lo;
  return s;
}

Rational PiecewiseTranslation::image_length() const {
  std::vector<IntervalSet::Piece> img;
  for (const auto& p : pieces_) img.push_back({p.lo + p.offset, p.hi + p.offset});
  IntervalSet s(std::move(img));
  return s.length();
}

PiecewiseTranslation partial_map(const TowerStage& stage) {
  std::vector<PiecewiseTranslation::Piece> pieces;
  for (std::size_t i = 0; i + 1 < stage.starts.size(); ++i) {
    pieces.push_back({stage.starts[i], stage.starts[i] + stage.width, stage.starts[i + 1] - stage.starts[i]});
  }
  return PiecewiseTranslation(std::move(pieces));
}

PowerImage power_image(const PiecewiseTranslation& map, const IntervalSet& set, const BigInt& n) {
  if (n < 0) throw Error("power_image: negative power");
  struct Work {
    Rational lo, hi;
    BigInt steps;
    Rational moved;  // total translation so far, to recover the source point
  };
  std::vector<IntervalSet::Piece> image, undefined;
  std::vector<Work> stack;
  for (const auto& p : set.pieces()) stack.push_back({p.lo, p.hi, n, Rational(0)});
  const auto& pieces = map.pieces_;

  while (!stack.empty()) {
    Work w = std::move(stack.back());
    stack.pop_back();
    if (w.steps == 0) {
      image.push_back({w.lo, w.hi});
      continue;
    }
    // Last piece with lo <= w.lo.
    auto it = std::upper_bound(pieces.begin(), pieces.end(), w.lo,
                               [](const Rational& v, const PiecewiseTranslation::Piece& p) { return v < p.lo; });
    if (it == pieces.begin() || !(w.lo < std::prev(it)->hi)) {
      const Rational next = it == pieces.end() ? w.hi : std::min(Rational(it->lo), w.hi);
      undefined.push_back({w.lo - w.moved, next - w.moved});
      if (next < w.hi) stack.push_back({next, w.hi, w.steps, w.moved});
      continue;
    }
    const auto idx = static_cast<std::size_t>(std::prev(it) - pieces.begin());
    const auto& piece = pieces[idx];
    if (piece.hi < w.hi) {
      stack.push_back({piece.hi, w.hi, w.steps, w.moved});
      w.hi = piece.hi;
    }
    const auto& chain = map.chains_[map.chain_of_[idx]];
    const std::size_t pos = map.pos_in_chain_[idx];
    const std::size_t len = chain.size();
    Rational shift;
    BigInt used;
    if (map.cyclic_[map.chain_of_[idx]]) {
      const BigInt rem = w.steps % BigInt(static_cast<unsigned long>(len));
      const std::size_t target = (pos + rem.get_ui()) % len;
      shift = pieces[chain[target]].lo - piece.lo;
      used = w.steps;
    } else {
      const std::size_t room = len - pos;  // steps until the image of the last chain piece
      if (w.steps < room) {
        const std::size_t target = pos + w.steps.get_ui();
        shift = pieces[chain[target]].lo - piece.lo;
        used = w.steps;
      } else {
        const auto& last = pieces[chain.back()];
        shift = last.lo + last.offset - piece.lo;
        used = BigInt(static_cast<unsigned long>(room));
      }
    }
    stack.push_back({w.lo + shift, w.hi + shift, w.steps - used, w.moved + shift});
  }
  return {IntervalSet(std::move(image)), IntervalSet(std::move(undefined))};
}

// ---------------------------------------------------------------------------
// Overlaps

json OverlapResult::to_json() const {
  json w = json::array();
  for (const auto& p : witnesses) w.push_back({to_string(p.lo), to_string(p.hi)});
  return json{{"total", to_string(total)}, {"undefined", to_string(undefined)}, {"witnesses", w}};
}

namespace {

OverlapResult overlap_of(const PiecewiseTranslation& map, const IntervalSet& source, const IntervalSet& target,
                         const BigInt& n) {
  PowerImage img = power_image(map, source, n);
  IntervalSet hit = img.image.intersect(target);
  return {hit.length(), hit.pieces(), img.undefined.length()};
}

}  // namespace

OverlapResult self_overlap(const TowerBuild& build, const IntervalSet& set, const BigInt& n) {
  return overlap_of(partial_map(build.top()), set, set, n);
}

bool NonrecurrenceReport::passed() const {
  bool ok = overlap.total == 0 && overlap.undefined == 0 && C_mass > 0;
  if (C_overlap) ok = ok && C_overlap->total == 0 && C_overlap->undefined == 0;
  return ok;
}

json NonrecurrenceReport::to_json() const {
  json j{{"k", k},
         {"power", power.get_str()},
         {"overlap", overlap.to_json()},
         {"kappa", kappa},
         {"C_mass", to_string(C_mass)},
         {"column_bound", to_string(column_bound)},
         {"passed", passed()}};
  j["C_overlap"] = C_overlap ? C_overlap->to_json() : json(nullptr);
  return j;
}

NonrecurrenceReport nonrecurrence_check(const TowerBuild& build, std::size_t k, std::optional<std::size_t> kappa) {
  const std::size_t K = build.stages.size() - 1;
  if (K < k + 2) throw Error("nonrecurrence_check: build stages to at least k+2");
  if (!build.spacer_stage || *build.spacer_stage > k) throw Error("nonrecurrence_check: A is not in the stage-k tower");

  NonrecurrenceReport rep;
  rep.k = k;
  rep.power = build.stages[k].height - 1;
  const PiecewiseTranslation map = partial_map(build.top());
  const IntervalSet source = build.A.subtract(build.last_column(k));
  rep.overlap = overlap_of(map, source, build.A, rep.power);

  auto C_of = [&](std::size_t from) {
    IntervalSet C = build.A;
    for (std::size_t j = from; j < K; ++j) C = C.subtract(build.last_column(j));
    return C;
  };
  std::size_t kap = *build.spacer_stage;
  if (kappa) {
    kap = *kappa;
  } else {
    while (kap + 1 < K && C_of(kap).length() == 0) ++kap;
  }
  rep.kappa = kap;
  const IntervalSet C = C_of(kap);
  rep.C_mass = C.length();
  rep.column_bound = build.A.length();
  for (std::size_t j = kap; j < K; ++j) {
    rep.column_bound -= make_rational(BigInt(1), build.schedule.step(j).p * build.stages[j].height);
  }
  if (k >= kap) rep.C_overlap = overlap_of(map, C, C, rep.power);
  return rep;
}

std::vector<NonrecurrenceReport> nonrecurrence_sweep(const TowerBuild& build, const std::vector<std::size_t>& ks) {
  std::vector<std::future<NonrecurrenceReport>> jobs;
  for (std::size_t k : ks) jobs.push_back(std::async(std::launch::async, [&build, k] { return nonrecurrence_check(build, k); }));
  std::vector<NonrecurrenceReport> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

// ---------------------------------------------------------------------------
// Level-index oracle

RedLevelOracle red_level_oracle(const RankOneSchedule& schedule, std::size_t k) {
  std::set<BigInt> red;  // red heights in the current tower
  BigInt h = schedule.n0;
  for (std::size_t s = 0; s <= k; ++s) {
    const auto& st = schedule.step(s);
    const BigInt a = st.p / 3;
    std::set<BigInt> next, checked;
    for (BigInt j = 1; j <= st.p; ++j) {
      const BigInt offset = (j - 1) * h + ((st.r >= 1 && j > a) ? 1 : 0);
      for (const auto& x : red) {
        next.insert(offset + x);
        if (j < st.p) checked.insert(offset + x);
      }
    }
    if (red.empty() && st.r >= 1) {
      if (s == k) throw Error("red_level_oracle: A is not in the stage-k tower");
      next.insert(a * h);
    }
    if (s == k) {
      RedLevelOracle o;
      o.red.assign(next.begin(), next.end());
      o.checked.assign(checked.begin(), checked.end());
      for (const auto& x : o.checked) {
        o.targets.push_back(x + h - 1);
        o.hits += next.count(x + h - 1);
      }
      return o;
    }
    red = std::move(next);
    h = st.p * h + st.r;
  }
  return {};
}

ShiftedSchedule shifted_schedule(const IntegerSequence& seq, const BigInt& p) {
  if (p < 1) throw Error("shifted_schedule: p must be >= 1");
  ShiftedSchedule out;
  std::size_t first = 0;
  while (first < seq.size() && seq[first] - p + 1 < 1) ++first;
  if (first + 1 >= seq.size()) throw Error("shifted_schedule: fewer than two admissible terms");
  out.first_index = first;
  out.schedule.label = "n_k - " + p.get_str() + " + 1 of " + seq.label();
  out.schedule.n0 = seq[first] - p + 1;
  out.identity_ok = true;
  for (std::size_t k = first; k + 1 < seq.size(); ++k) {
    auto d = decompose_pk_rk(seq, k);
    BigInt r2 = d.r + (d.p - 1) * (p - 1);
    out.schedule.steps.push_back({d.p, r2});
    out.identity_ok = out.identity_ok && (d.p * (seq[k] - p + 1) + r2 == seq[k + 1] - p + 1);
  }
  return out;
}

}  // namespace recurlab
