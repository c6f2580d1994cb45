#pragma once

// Block sets built from a rapidly growing H-chain: schedule, block
// assembly, small-sup witnesses for the homogeneous families, rotation
// witnesses for the shifted families and a recurrence probe.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "recurlab/circle.hpp"
#include "recurlab/jsonio.hpp"
#include "recurlab/numeric.hpp"

namespace recurlab {

/// Family 0, a nonempty subset A of {1..r-1}, or the empty subset.
struct BohrFamily {
  enum class Kind { Zero, Subset, Empty };
  Kind kind = Kind::Zero;
  std::vector<int> subset;  // for Kind::Subset

  std::string label() const;
  bool operator==(const BohrFamily& other) const = default;
  static BohrFamily parse(const std::string& label);
};

struct BohrSeeds {
  BigInt H1{6};
  // Per-N overrides (entry N-1 for level N); missing entries use the defaults
  // Q_N = N+1, Theta_N = N+1, L_N = 3 * 2^N.
  std::vector<BigInt> Q, Theta, L;
  BigInt delta_empty{1};
  // Delta_A = |A| + 1 unless overridden here, indexed by |A| - 1.
  std::vector<BigInt> delta_by_size;

  json to_json() const;
  static BohrSeeds from_json(const json& j);
};

struct BohrSchedule {
  int r = 1;
  std::size_t N_max = 0;
  std::vector<BigInt> H;             // H[1..N_max+1]
  std::vector<BigInt> Q, Theta, L;   // [1..N_max]
  BigInt delta_empty;
  std::vector<std::vector<int>> subsets;  // nonempty subsets of {1..r-1}
  std::vector<BigInt> delta_subset;       // parallel to subsets
  Rational M;                        // rational upper bound on 2 pi
  BohrSeeds seeds;

  std::vector<BohrFamily> families() const;
  BigInt delta(const BohrFamily& f) const;
  /// max(Q_N, Delta_empty, Delta_A (L_N Theta_N + 1) over A).
  BigInt spread(std::size_t N) const;
  /// H_{N+1} > 2^N M H_N spread(N), checked exactly.
  bool growth_ok(std::size_t N) const;
  json to_json() const;
};

/// H_{N+1} is the least multiple of 3 H_N above 2^N M H_N spread(N).
BohrSchedule schedule_build(int r, const BohrSeeds& seeds, std::size_t N_max);

struct BohrBlock {
  std::size_t N = 0;
  BohrFamily family;
  std::vector<BigInt> elements;  // sorted
};

struct BohrSet {
  BohrSchedule schedule;
  std::vector<BohrBlock> blocks;
  std::vector<BigInt> merged;

  /// Shifted elements of one family over N = 1..N_max.
  std::vector<BigInt> family_elements(const BohrFamily& f) const;
  /// {1} followed by the shift-free version: H_N q, H_N Delta L_N j, H_N Delta_empty.
  std::vector<BigInt> homogeneous_elements(const BohrFamily& f) const;
  json to_json(bool with_elements = true) const;
};

BohrSet build_bohr_set(const BohrSchedule& schedule);

/// Empty when the block formulas, ordering and disjointness all hold.
std::vector<std::string> check_bohr_set(const BohrSet& set);

struct BlockWitness {
  std::string family;
  std::string kind;              // "small_sup" or "rotation"
  AngleTurns theta;
  Interval value;                // sup (small_sup) or min (rotation) over the checked elements
  std::size_t checked = 0;
  std::size_t N0 = 0;            // first level used in theta (small_sup)
  Rational threshold;            // eps, or 1/2
  bool passed = false;
  std::optional<Interval> beyond_horizon;  // exact value for every element past N_max, when known
  std::vector<std::string> log;

  json to_json() const;
};

/// theta = sum_{N >= N0} 1/H_{N+1} with the least N0 whose certified sup over
/// the homogeneous family is below eps.
BlockWitness block_jamison_witness(const BohrSet& set, const BohrFamily& family, const Rational& eps);

/// Family 0: theta = 1/3 + sum c_N / H_{N+1}, c_N kept greedily while the
/// certified minimum stays at least keep_floor. Other families:
/// theta = sum_N 1/(3 H_N Delta).
BlockWitness block_rotation_witness(const BohrSet& set, const BohrFamily& family,
                                    const Rational& keep_floor = Rational(17, 10));

struct ProbeReport {
  std::vector<AngleTurns> rotations;
  Rational eps;
  bool found = false;
  std::size_t k = 0;
  BigInt element;
  Interval value;                // max_i |lambda_i^{n_k} - 1| at the reported k, or the min seen
  std::size_t scanned = 0;

  json to_json() const;
  std::string csv_row() const;   // tuple,eps,found_k,value
  static std::string csv_header() { return "tuple,eps,found_k,value"; }
};

ProbeReport bohr_recurrence_probe(const std::vector<BigInt>& elements, int r, const std::vector<AngleTurns>& rotations,
                                  const Rational& eps);
ProbeReport bohr_recurrence_probe(const BohrSet& set, const std::vector<AngleTurns>& rotations, const Rational& eps);

}  // namespace recurlab
