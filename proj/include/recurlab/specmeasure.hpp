#pragma once

// Finitely supported probability measures on the circle, their Fourier
// coefficients, the two-atom convolution construction and Gaussian
// rectangle Monte-Carlo.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "recurlab/jsonio.hpp"
#include "recurlab/numeric.hpp"
#include "recurlab/seqcore.hpp"

namespace recurlab {

struct Atom {
  Rational angle;   // turns, in [0,1)
  Rational weight;  // > 0
};

/// Convention: hat sigma(n) = sum_i w_i e^{2 pi i n angle_i}.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  /// Angles are reduced mod 1 and must be distinct; weights must sum to 1.
  explicit DiscreteMeasure(std::vector<Atom> atoms);

  static DiscreteMeasure dirac(const Rational& angle = Rational(0));
  /// (1 - t) delta_0 + t delta_angle.
  static DiscreteMeasure two_atom(const Rational& t, const Rational& angle);

  const std::vector<Atom>& atoms() const { return atoms_; }  // sorted by angle
  std::size_t size() const { return atoms_.size(); }

  ComplexInterval fourier(const BigInt& n) const;
  Rational max_mass() const;
  Rational atom_energy() const;  // sum w_i^2
  BigInt lcm_denominator() const;

  bool operator==(const DiscreteMeasure& other) const;

  json to_json() const;
  static DiscreteMeasure from_json(const json& j);

 private:
  std::vector<Atom> atoms_;
};

DiscreteMeasure convolve(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

class ConvolutionFactorization {
 public:
  ConvolutionFactorization() = default;
  explicit ConvolutionFactorization(std::vector<DiscreteMeasure> factors) : factors_(std::move(factors)) {}

  const std::vector<DiscreteMeasure>& factors() const { return factors_; }
  /// Product of the factor coefficients.
  ComplexInterval fourier(const BigInt& n) const;
  /// Full convolution; throws past `max_atoms`.
  DiscreteMeasure expand(std::size_t max_atoms = 1u << 16) const;
  Rational max_mass() const;  // product of factor max masses

  json to_json() const;

 private:
  std::vector<DiscreteMeasure> factors_;
};

/// min(1/2, a/(4 pi)) rounded down to a 64-bit-mantissa dyadic.
Rational kahane_weight(const Rational& a);

struct KahaneCertificate {
  std::string seq_label;
  std::size_t stages = 0;
  std::vector<Rational> targets;   // a_k, k < stages
  std::vector<Rational> weights;   // t_j
  std::vector<Interval> chain;     // sum_{k<=j<N} 2 pi t_j n_k / n_{j+1}
  std::vector<Interval> deviation; // |hat sigma_N(n_k) - 1|
  bool chain_ok = false;           // chain[k] <= a_k for every k
  bool deviation_ok = false;       // deviation[k] <= a_k for every k
  Rational max_mass;               // prod (1 - t_j)
  std::vector<std::string> warnings;
  std::string factor_family = "two-atom (1-t_j) delta_0 + t_j delta_{1/n_{j+1}}";

  json to_json() const;
};

struct KahaneResult {
  ConvolutionFactorization measure;
  KahaneCertificate certificate;
};

/// Needs n_k | n_{k+1}, at least N+1 terms, and N nonincreasing targets in (0,1].
KahaneResult kahane_build(const IntegerSequence& seq, const std::vector<Rational>& a, std::size_t N);

struct RigidityCertificate {
  bool passed = false;
  std::optional<std::size_t> first_violation;
  std::vector<Interval> deviation;  // |hat sigma(n_k) - 1|
  double min_slack = 0;             // min_k a_k - deviation_k.hi
  double max_slack = 0;

  json to_json() const;
};

RigidityCertificate rigidity_check(const ConvolutionFactorization& measure, const IntegerSequence& seq,
                                   const std::vector<Rational>& a, std::size_t K);

struct WienerEnergy {
  Interval average;  // (1/N) sum_{n=1}^N |hat sigma(n)|^2
  Rational atom_energy;
};

WienerEnergy wiener_energy(const DiscreteMeasure& measure, std::uint64_t N);
WienerEnergy wiener_energy(const ConvolutionFactorization& measure, std::uint64_t N);

struct RecursiveQReport {
  std::size_t k = 0;
  Interval L;                     // integral of |lambda - 1|
  Interval R;                     // 2 sqrt 2 (q_{k+1}^{-2} + q_k^{-1})
  Interval deviation_k, deviation_k1;
  bool premise_k = false, premise_k1 = false;
  std::optional<bool> conclusion; // L <= R, only when both premises hold
  bool consistent() const { return !conclusion.has_value() || *conclusion; }

  json to_json() const;
};

/// seq must come from gen_recursive_q (n_{k+1} = q_k n_k + 1); q is read from its generator.
RecursiveQReport recursive_q_diagnostic(const DiscreteMeasure& measure, const IntegerSequence& seq, std::size_t k);

struct Rectangle {
  double a, b, c, d;  // a < Re < b, c < Im < d
  bool contains(std::complex<double> z) const {
    return a < z.real() && z.real() < b && c < z.imag() && z.imag() < d;
  }
};

struct GaussianRectangleModel {
  DiscreteMeasure measure;
  std::vector<std::complex<double>> coeffs;  // one per atom
  Rectangle rect{0, 1, 0, 1};
  std::uint64_t seed = 1;
};

struct McEstimate {
  BigInt n;
  std::uint64_t samples = 0;
  unsigned workers = 0;
  double p_in = 0, p_in_se = 0;            // P(f in R)
  double p_in_out = 0, p_in_out_se = 0;    // P(f in R, f_n not in R)
  double p_sym_diff = 0, p_sym_diff_se = 0;
  double second_moment = 0, second_moment_se = 0;            // E|f|^2
  double second_moment_expected = 0;                          // sum w |c|^2
  double diff_moment = 0, diff_moment_se = 0;                 // E|f_n - f|^2
  double diff_moment_expected = 0;                            // sum w |lambda^n - 1|^2 |c|^2

  json to_json() const;
  static std::string csv_header();
  std::string csv_row() const;
};

/// Samples f = sum sqrt(w_i) c_i g_i and f_n = sum sqrt(w_i) lambda_i^n c_i g_i.
/// Deterministic for a fixed seed and worker count.
McEstimate gauss_rectangle_overlap_mc(const GaussianRectangleModel& model, const BigInt& n, std::uint64_t samples,
                                      unsigned workers = 0);

}  // namespace recurlab
