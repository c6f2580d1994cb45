#pragma once

// Finite truncations of diagonal-plus-backward-shift operators: the
// perturbation chain of eigenvalues, certified power norms, ball
// certificates and the Kalish eigenvector check.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "recurlab/circle.hpp"
#include "recurlab/jsonio.hpp"
#include "recurlab/numeric.hpp"
#include "recurlab/seqcore.hpp"

namespace recurlab {

/// j(2), ..., j(N) from the enumeration 1; 1,2; 1,2,3; ... (entry n-1 gives j(n)).
/// Returned vector is indexed by n, entries 0 and 1 unused.
std::vector<std::size_t> build_j_function(std::size_t N);

/// T e_n = lambda_n e_n + alpha_{n-1} e_{n-1}; indices are 1-based in comments,
/// 0-based in the vectors.
struct DiagShiftOperator {
  std::vector<AngleTurns> diag;   // lambda_1..lambda_N as exact turns
  std::vector<Rational> weights;  // alpha_1..alpha_{N-1}
  std::vector<std::size_t> j_map; // from build_j_function

  std::size_t dim() const { return diag.size(); }
  bool diagonal() const;
  json to_json() const;
};

struct ChainEdge {
  std::size_t n = 0;             // 1-based index of lambda_n
  std::size_t parent = 0;        // j(n)
  std::size_t m = 0;             // lambda_n = lambda_{j(n)} + 1/n_m
  Rational epsilon;
  DistanceCertificate edge;      // d(lambda_n, lambda_{j(n)}), tail exact
  Interval telescoped;           // sum of edge bounds along the chain to lambda_1
};

struct DiagChain {
  DiagShiftOperator op;          // weights all zero
  std::vector<ChainEdge> edges;  // n = 2..N
  Rational budget;               // sum of epsilons
  json to_json() const;
};

/// eps_n = total_budget * 2^{-(n-1)} for n >= 2, so the sum stays below the budget.
std::vector<Rational> geometric_budgets(std::size_t N, const Rational& total_budget);

/// lambda_1 = 1; lambda_n = lambda_{j(n)} + 1/n_m with the least m whose certified
/// distance is below eps_n and whose angle is new.
DiagChain build_diag_chain(const IntegerSequence& seq, std::size_t N, const std::vector<Rational>& eps);

/// alpha_n = rho 4^{-n}.
std::vector<Rational> geometric_weights(std::size_t N, const Rational& rho);

struct PowerNorm {
  BigInt n;
  // Enclosures: hi from sqrt(||X||_1 ||X||_inf), lo from the largest column.
  Interval norm_TI;    // ||T^n - I||
  Interval norm_TD;    // ||T^n - D^n||
  Interval norm_DI;    // ||D^n - I|| = max_i |lambda_i^n - 1|
  int bits = 0;
  std::string method;  // "diagonal" or "matrix"
};

struct PowerNormOptions {
  bool force_matrix = false;  // skip the diagonal formula
  int max_bits = 1024;
  double error_ceiling = 1e-6;  // retry with more bits while the tracked error is above this
};

PowerNorm power_norm(const DiagShiftOperator& op, const BigInt& n, const PowerNormOptions& options = {});

struct NormCertificate {
  std::size_t N = 0;
  std::size_t K = 0;
  Rational delta;
  Rational rho;                    // weight scale used
  std::vector<PowerNorm> rows;     // k = 0..K
  double sup_TI = 0, sup_TD = 0, sup_DI = 0;  // upper bounds
  bool pass = false;               // sup_DI <= delta and sup_TD < delta
  std::vector<std::string> log;

  json to_json() const;
  std::string csv() const;         // k,n_k,norm_TI,norm_TD,bits_used
};

/// Powers for k = 0..K, computed incrementally when the sequence has divisibility.
NormCertificate norm_certificate(const DiagShiftOperator& op, const IntegerSequence& seq, std::size_t K,
                                 const Rational& delta, const PowerNormOptions& options = {});

/// Tunes rho downward from 1/(4 n_K) until the T^{n_k} - D^{n_k} bound meets delta.
NormCertificate tune_weights(DiagShiftOperator& op, const IntegerSequence& seq, std::size_t K,
                             const Rational& delta, int max_rounds = 12);

struct BallCertificate {
  Interval delta;
  Interval c;
  std::optional<Interval> gamma_max;  // (delta - c) / (2 + delta + c) when c < delta
  std::size_t K = 0;
  std::size_t N = 0;

  json to_json() const;
};

BallCertificate ball_certificate(const Interval& delta, const Interval& c, std::size_t K = 0, std::size_t N = 0);

struct BallMcReport {
  std::uint64_t samples = 0;
  double gamma = 0;
  std::size_t violations = 0;
  double min_margin = 0;  // min over samples and k of ||S^{n_k} u - u|| - 2 gamma
  json to_json() const;
};

/// Samples u uniformly in the ball of radius gamma around e_1 and checks
/// ||S^{n_k} u - u|| > 2 gamma for S = lambda0 T, k = 0..K.
BallMcReport ball_mc_verify(const DiagShiftOperator& op, const AngleTurns& lambda0, const IntegerSequence& seq,
                            std::size_t K, double gamma, std::uint64_t samples, std::uint64_t seed);

struct KalishReport {
  AngleTurns lambda;
  std::uint64_t grid = 0;
  Interval residual;  // sup over nodes of |(M - J) chi - lambda chi|
  json to_json() const;
};

/// chi_lambda = indicator of the arc from lambda to 1 (angles >= theta), sampled on
/// zeta_m = e^{2 pi i m / G}; J integrates dz along the arc from 1 with the
/// left-endpoint rule.
KalishReport kalish_eigencheck(const AngleTurns& lambda, std::uint64_t grid);

}  // namespace recurlab
