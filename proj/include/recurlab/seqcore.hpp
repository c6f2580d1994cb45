#pragma once

// Integer sequences, their p/r decompositions, shifted sets and the
// alternating-block splitter.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "recurlab/jsonio.hpp"
#include "recurlab/numeric.hpp"

namespace recurlab {

class IntegerSequence {
 public:
  IntegerSequence() = default;
  IntegerSequence(std::string label, std::vector<BigInt> terms, json generator = json::object(),
                  bool divisibility = false);

  const std::string& label() const { return label_; }
  const std::vector<BigInt>& terms() const { return terms_; }
  const json& generator() const { return generator_; }
  bool divisibility() const { return divisibility_; }
  bool normalized() const { return !terms_.empty() && terms_.front() == 1; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const BigInt& operator[](std::size_t k) const { return terms_.at(k); }
  const BigInt& back() const { return terms_.back(); }

  /// Prefix of the first `count` terms (same label and generator).
  IntegerSequence prefix(std::size_t count) const;
  /// Smallest ratio n_{k+1}/n_k over the prefix; nullopt when fewer than two terms.
  std::optional<Rational> min_ratio() const;

  json to_json() const;
  static IntegerSequence from_json(const json& j);

 private:
  std::string label_;
  std::vector<BigInt> terms_;
  json generator_ = json::object();
  bool divisibility_ = false;
};

IntegerSequence gen_divisibility(const BigInt& base, const std::vector<BigInt>& ratios, std::size_t count);
/// Ratio given by a rule in k (n_{k+1} = ratio(k) * n_k).
IntegerSequence gen_divisibility(const BigInt& base, const std::function<BigInt(std::size_t)>& ratio,
                                 std::size_t count, const std::string& label, const json& generator);
IntegerSequence gen_recursive_q(const std::vector<BigInt>& q, std::size_t count);
IntegerSequence gen_block_multiples(const std::vector<BigInt>& p, bool shifted);

// Named families used throughout.
IntegerSequence gen_powers(const BigInt& base, std::size_t count);  // base^k, divisibility
IntegerSequence gen_triangular_pow2(std::size_t count);               // 2^{k(k+1)/2}
IntegerSequence gen_naturals(std::size_t count);                       // 1, 2, 3, ...
IntegerSequence gen_chacon(std::size_t count);                         // 1, 4, 13, 40, ...

/// Builds a sequence from a JSON description, e.g.
/// {"family": "triangular_pow2", "count": 13} or {"family": "explicit", "terms": ["1","3"]}.
IntegerSequence make_sequence(const json& spec);

struct PkRk {
  BigInt p;
  BigInt r;
  bool canonical = true;  // 0 <= r < n_k
  bool p_at_least_3 = false;
  Rational partial_sum;   // sum_{j<=k} r_j / (p_j n_j)
};

/// n_{k+1} = p n_k + r with 0 <= r < n_k.
PkRk decompose_pk_rk(const IntegerSequence& seq, std::size_t k);

struct ShiftResult {
  IntegerSequence seq;
  std::optional<std::size_t> k0;  // smallest k with n_k - p >= 1
};

ShiftResult shift_set(const IntegerSequence& seq, const BigInt& p);

// ---------------------------------------------------------------------------
// Splitter. Every value it produces is a power of two, stored by exponent;
// block lengths grow like 2^{3^n}, so exponents are the only viable encoding.

/// Sum of distinct powers of two, kept as a sorted exponent list.
struct SparseBinary {
  std::vector<BigInt> exponents;  // strictly increasing

  bool is_zero() const { return exponents.empty(); }
  /// Exact value; throws if the largest exponent exceeds `max_bits`.
  BigInt value(unsigned long max_bits = 1u << 16) const;
  /// Decimal when small, otherwise "2^e1 + 2^e2 + ...".
  std::string to_string() const;
  bool operator==(const SparseBinary&) const = default;
};

struct SplitBlock {
  int n = 0;               // 1-based block number
  SparseBinary first;      // p_{n-1} + 1
  SparseBinary last;       // p_n
  BigInt length_exp;       // block length 2^length_exp
  BigInt a_exp;            // a_k = 2^a_exp on the block
  BigInt b_exp;            // b_k = 2^b_exp on the block
  bool in_A() const { return n % 2 == 0; }
};

struct SplitterOutput {
  std::vector<SplitBlock> blocks;

  std::vector<int> A_blocks() const;  // even blocks
  std::vector<int> B_blocks() const;  // odd blocks
  /// Block containing index k (1-based); nullopt when k is past the last block.
  std::optional<int> block_of(const BigInt& k) const;
  Rational a_value(int block) const;  // throws when the exponent is too large to materialize
  Rational b_value(int block) const;
  json to_json() const;
};

struct SplitCheck {
  bool nonincreasing = false;
  bool block_sums = false;     // sum of a (odd) / b (even) over the block >= 1/2
  bool cube_root_sums = false; // sum of b^{1/3} (odd) / a^{1/3} (even) <= 2^{-n}
  bool partition = false;
  bool ok() const { return nonincreasing && block_sums && cube_root_sums && partition; }
};

SplitterOutput alternating_split(int block_count);
SplitCheck check_split(const SplitterOutput& out);

}  // namespace recurlab
