#pragma once

// Exact-rational cutting and stacking: towers, the partial translation map,
// exact images of interval unions and the non-recurrence overlaps.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "recurlab/jsonio.hpp"
#include "recurlab/numeric.hpp"
#include "recurlab/seqcore.hpp"

namespace recurlab {

/// Finite union of half-open intervals [lo, hi), kept sorted and merged.
class IntervalSet {
 public:
  struct Piece {
    Rational lo, hi;
  };

  IntervalSet() = default;
  explicit IntervalSet(std::vector<Piece> pieces);
  static IntervalSet single(const Rational& lo, const Rational& hi);

  const std::vector<Piece>& pieces() const { return pieces_; }
  bool empty() const { return pieces_.empty(); }
  Rational length() const;

  IntervalSet unite(const IntervalSet& other) const;
  IntervalSet intersect(const IntervalSet& other) const;
  IntervalSet subtract(const IntervalSet& other) const;
  bool operator==(const IntervalSet& other) const;

  json to_json() const;

 private:
  std::vector<Piece> pieces_;
};

struct StackStep {
  BigInt p;
  BigInt r;
};

/// n_0 followed by (p_k, r_k) steps; the last step repeats forever.
struct RankOneSchedule {
  std::string label;
  BigInt n0;
  std::vector<StackStep> steps;

  const StackStep& step(std::size_t k) const;
  BigInt height(std::size_t k) const;
  /// l_0 with total mass exactly 1.
  Rational base_length() const;
  bool bootstrap() const { return n0 < 3; }

  json to_json() const;
};

RankOneSchedule schedule_from_sequence(const IntegerSequence& seq);
RankOneSchedule chacon_schedule();
RankOneSchedule constant_schedule(const BigInt& n0, const BigInt& p, const BigInt& r);

struct TowerStage {
  std::size_t k = 0;
  BigInt height;
  Rational width;
  std::vector<Rational> starts;  // level i is [starts[i], starts[i] + width)
  std::vector<int> column;       // previous-stage column (1-based) or 0 for a spacer
  std::vector<bool> red;         // level inside the first added spacer

  IntervalSet level(std::size_t i) const { return IntervalSet::single(starts[i], starts[i] + width); }
  json to_json(bool with_levels = false) const;
};

struct TowerBuild {
  RankOneSchedule schedule;
  Rational base_length;
  std::vector<TowerStage> stages;  // stages[0..K]
  std::optional<std::size_t> spacer_stage;  // stage that received the first added spacer
  IntervalSet A;
  Rational pool_start;             // left end of the unused spacer pool
  std::vector<std::string> flags;

  const TowerStage& top() const { return stages.back(); }
  /// Part of the stage-k tower lying in its last column I_{k,p_k}; needs stage k+1.
  IntervalSet last_column(std::size_t k) const;
  json to_json(bool with_levels = false) const;
};

/// Stages 0..K. p_k >= 3 and r_k >= 0 are required.
TowerBuild build_tower_schedule(const RankOneSchedule& schedule, std::size_t K);
TowerBuild build_tower_schedule(const IntegerSequence& seq, std::size_t K);

struct PowerImage;
class PiecewiseTranslation;
PowerImage power_image(const PiecewiseTranslation& map, const IntervalSet& set, const BigInt& n);

class PiecewiseTranslation {
 public:
  struct Piece {
    Rational lo, hi, offset;
  };

  PiecewiseTranslation() = default;
  explicit PiecewiseTranslation(std::vector<Piece> pieces);

  const std::vector<Piece>& pieces() const { return pieces_; }
  Rational domain_length() const;
  Rational image_length() const;

 private:
  friend PowerImage power_image(const PiecewiseTranslation& map, const IntervalSet& set, const BigInt& n);

  std::vector<Piece> pieces_;  // sorted by lo
  // Pieces whose image is exactly another piece are linked into chains so a
  // power can jump along a tower in one step.
  std::vector<std::size_t> chain_of_, pos_in_chain_;
  std::vector<std::vector<std::size_t>> chains_;
  std::vector<bool> cyclic_;
};

PiecewiseTranslation partial_map(const TowerStage& stage);

struct PowerImage {
  IntervalSet image;
  IntervalSet undefined;  // source points whose orbit leaves the domain
};

PowerImage power_image(const PiecewiseTranslation& map, const IntervalSet& set, const BigInt& n);

struct OverlapResult {
  Rational total;
  std::vector<IntervalSet::Piece> witnesses;
  Rational undefined;

  json to_json() const;
};

/// m(T^n S cap S) on the partial map of the top stage.
OverlapResult self_overlap(const TowerBuild& build, const IntervalSet& set, const BigInt& n);

struct NonrecurrenceReport {
  std::size_t k = 0;
  BigInt power;                   // n_k - 1
  OverlapResult overlap;          // T^{n_k-1}(A \ I_{k,p_k}) cap A
  std::size_t kappa = 0;
  Rational C_mass;                // m(C_kappa), C_kappa = A minus I_{j,p_j} for kappa <= j < K
  Rational column_bound;          // m(A) - sum_{kappa<=j<K} 1/(p_j n_j)
  std::optional<OverlapResult> C_overlap;  // when k >= kappa
  bool passed() const;

  json to_json() const;
};

/// Needs K >= k + 2 and k >= spacer stage.
NonrecurrenceReport nonrecurrence_check(const TowerBuild& build, std::size_t k,
                                        std::optional<std::size_t> kappa = std::nullopt);

/// Independent checks run concurrently.
std::vector<NonrecurrenceReport> nonrecurrence_sweep(const TowerBuild& build, const std::vector<std::size_t>& ks);

// Level-index oracle: works only with heights and stacking offsets.
struct RedLevelOracle {
  std::vector<BigInt> red;        // red heights at stage k+1
  std::vector<BigInt> checked;    // red heights from columns 1..p_k-1
  std::vector<BigInt> targets;    // checked + n_k - 1
  std::size_t hits = 0;           // targets that are red
};

RedLevelOracle red_level_oracle(const RankOneSchedule& schedule, std::size_t k);

struct ShiftedSchedule {
  RankOneSchedule schedule;
  std::size_t first_index = 0;    // first k with n_k - p + 1 >= 1
  bool identity_ok = false;       // p'_k (n_k - p + 1) + r'_k = n_{k+1} - p + 1 for every k checked
};

/// Schedule for n'_k = n_k - p + 1 with p'_k = p_k and r'_k = r_k + (p_k - 1)(p - 1).
ShiftedSchedule shifted_schedule(const IntegerSequence& seq, const BigInt& p);

}  // namespace recurlab
