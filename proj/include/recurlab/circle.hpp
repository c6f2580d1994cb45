#pragma once

// Points of the unit circle as turns, the sup-distance along a sequence,
// Jamison separation search, divisibility perturbations and rotation
// witnesses.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "recurlab/numeric.hpp"
#include "recurlab/seqcore.hpp"

namespace recurlab {

/// lambda = e^{2 pi i theta}; theta in [0,1) is either an exact rational or a
/// rational center with a rational error radius.
class AngleTurns {
 public:
  AngleTurns() = default;
  static AngleTurns exact(const Rational& theta);
  static AngleTurns approx(const Rational& center, const Rational& radius);

  const Rational& center() const { return center_; }
  const Rational& radius() const { return radius_; }
  bool is_exact() const { return radius_ == 0; }

  AngleTurns operator+(const AngleTurns& other) const;
  AngleTurns operator-(const AngleTurns& other) const;
  bool operator==(const AngleTurns& other) const = default;

  json to_json() const;
  static AngleTurns from_json(const json& j);

 private:
  Rational center_{0};
  Rational radius_{0};
};

/// Range of the distance to the nearest integer over the phase interval
/// [start, start + width], width >= 0.
std::pair<Rational, Rational> dist_range(const Rational& start, const Rational& width);

/// Enclosure of |lambda^n - 1| = 2 |sin(pi n theta)|.
Interval unimod_dist(const AngleTurns& theta, const BigInt& n);

struct DistanceCertificate {
  std::string seq_label;
  std::size_t horizon = 0;  // terms k = 0..horizon were evaluated
  Interval value;           // sup over the evaluated terms
  std::size_t argmax = 0;
  bool tail_exact = false;  // terms beyond the horizon are provably 0

  json to_json() const;
};

DistanceCertificate d_metric_finite(const AngleTurns& theta1, const AngleTurns& theta2, const IntegerSequence& seq,
                                    std::size_t K);

struct JamisonOptions {
  std::size_t node_budget = 200000;
  bool refine = true;
};

struct JamisonReport {
  std::string seq_label;
  std::size_t horizon = 0;
  BigInt grid;
  Rational epsilon;
  AngleTurns best_theta;
  Interval sup;                  // certified sup_{k<=K} |lambda^{n_k} - 1| at best_theta
  std::size_t argmax = 0;
  bool below_epsilon = false;    // certified sup < epsilon
  bool exhaustive = false;       // branch and bound closed every cell
  double global_lower = 0;       // lower bound of the objective over the searched domain
  std::size_t nodes = 0;

  json to_json() const;
};

/// Searches theta in [1/n_K, 1/2] for the smallest sup_{k<=K} |lambda^{n_k} - 1|.
/// The grid must be at least n_K.
JamisonReport jamison_separation_test(const IntegerSequence& seq, const Rational& epsilon, std::size_t K,
                                      const BigInt& grid, const JamisonOptions& options = {});

/// Certified sup_{k<=K} |lambda^{n_k} - 1| at a given angle.
DistanceCertificate sup_at(const AngleTurns& theta, const IntegerSequence& seq, std::size_t K);

struct PerturbResult {
  AngleTurns theta;
  DistanceCertificate certificate;
};

/// theta' = theta + 1/n_m; the distance to theta along the whole sequence is
/// max_{k<m} |e^{2 pi i n_k / n_m} - 1|, every later term vanishing exactly.
PerturbResult perturb_divisibility(const AngleTurns& theta, const IntegerSequence& seq, std::size_t m);

struct WitnessCertificate {
  std::string seq_label;
  AngleTurns theta;
  Interval delta;  // min_{k<=K} |lambda^{n_k} - 1|
  std::size_t horizon = 0;
  std::size_t argmin = 0;
  std::string method;
  bool verified = false;  // delta.lo > 0

  json to_json() const;
};

WitnessCertificate verify_witness(const AngleTurns& theta, const IntegerSequence& seq, std::size_t K,
                                  const std::string& method = "explicit");

struct WitnessOptions {
  Rational min_ratio{11, 10};   // lacunarity required over the prefix
  std::size_t beam = 64;        // surviving intervals kept per step
  std::size_t max_pieces = 4096;// pieces kept per interval per step
  int bisect_steps = 24;
};

struct WitnessResult {
  bool found = false;
  Rational target;              // delta for which the survivors were built
  WitnessCertificate certificate;
  std::size_t survivors = 0;
  std::vector<std::string> log;

  json to_json() const;
};

WitnessResult witness_nested_intervals(const IntegerSequence& seq, std::size_t K, const Rational& delta_target,
                                       const WitnessOptions& options = {});

/// Simplest rational (smallest denominator) in the closed interval [lo, hi], lo >= 0.
Rational simplest_rational(const Rational& lo, const Rational& hi);

/// Phase radius rho (rounded up) with 2 sin(pi rho) = delta.
Rational removal_radius(const Rational& delta);

}  // namespace recurlab
