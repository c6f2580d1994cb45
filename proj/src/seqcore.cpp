#include "recurlab/seqcore.hpp"

#include <algorithm>
#include <sstream>

namespace recurlab {

IntegerSequence::IntegerSequence(std::string label, std::vector<BigInt> terms, json generator, bool divisibility)
    : label_(std::move(label)), terms_(std::move(terms)), generator_(std::move(generator)), divisibility_(divisibility) {
  if (!terms_.empty() && terms_.front() < 1) throw Error("sequence terms must be positive");
  for (std::size_t k = 1; k < terms_.size(); ++k) {
    if (terms_[k] <= terms_[k - 1]) throw Error("sequence must be strictly increasing (index " + std::to_string(k) + ")");
  }
  if (divisibility_) {
    for (std::size_t k = 1; k < terms_.size(); ++k) {
      if (!mpz_divisible_p(terms_[k].get_mpz_t(), terms_[k - 1].get_mpz_t())) {
        throw Error("divisibility flag set but n_" + std::to_string(k - 1) + " does not divide n_" + std::to_string(k));
      }
    }
  }
  if (label_.rfind("normalized", 0) == 0 && !normalized()) {
    throw Error("sequence labelled normalized must start at 1");
  }
}

IntegerSequence IntegerSequence::prefix(std::size_t count) const {
  if (count > terms_.size()) throw Error("prefix longer than materialized sequence");
  return IntegerSequence(label_, std::vector<BigInt>(terms_.begin(), terms_.begin() + static_cast<long>(count)),
                         generator_, divisibility_);
}

std::optional<Rational> IntegerSequence::min_ratio() const {
  if (terms_.size() < 2) return std::nullopt;
  Rational best = make_rational(terms_[1], terms_[0]);
  for (std::size_t k = 2; k < terms_.size(); ++k) best = std::min(best, make_rational(terms_[k], terms_[k - 1]));
  return best;
}

json IntegerSequence::to_json() const {
  json terms = json::array();
  for (const auto& t : terms_) terms.push_back(t.get_str());
  return json{{"label", label_}, {"terms", terms}, {"generator", generator_}, {"divisibility", divisibility_}};
}

IntegerSequence IntegerSequence::from_json(const json& j) {
  std::vector<BigInt> terms;
  for (const auto& t : j.at("terms")) terms.push_back(parse_bigint(t.get<std::string>()));
  return IntegerSequence(j.value("label", std::string()), std::move(terms), j.value("generator", json::object()),
                         j.value("divisibility", false));
}

// ---------------------------------------------------------------------------

IntegerSequence gen_divisibility(const BigInt& base, const std::function<BigInt(std::size_t)>& ratio,
                                 std::size_t count, const std::string& label, const json& generator) {
  if (base < 1) throw Error("gen_divisibility: base must be >= 1");
  std::vector<BigInt> terms;
  terms.reserve(count);
  if (count > 0) terms.push_back(base);
  for (std::size_t k = 0; k + 1 < count; ++k) {
    BigInt r = ratio(k);
    if (r < 2) throw Error("gen_divisibility: ratio " + r.get_str() + " < 2 at k=" + std::to_string(k));
    terms.push_back(terms.back() * r);
  }
  return IntegerSequence(label, std::move(terms), generator, true);
}

IntegerSequence gen_divisibility(const BigInt& base, const std::vector<BigInt>& ratios, std::size_t count) {
  if (count > ratios.size() + 1) throw Error("gen_divisibility: not enough ratios for requested count");
  json ratios_json = json::array();
  for (const auto& r : ratios) ratios_json.push_back(r.get_str());
  json gen{{"family", "divisibility"}, {"base", base.get_str()}, {"ratios", ratios_json}};
  return gen_divisibility(
      base, [&](std::size_t k) { return ratios[k]; }, count, "divisibility", gen);
}

IntegerSequence gen_recursive_q(const std::vector<BigInt>& q, std::size_t count) {
  if (count > q.size() + 1) throw Error("gen_recursive_q: not enough q values for requested count");
  std::vector<BigInt> terms;
  json q_json = json::array();
  for (const auto& v : q) q_json.push_back(v.get_str());
  if (count > 0) terms.push_back(BigInt(1));
  for (std::size_t k = 0; k + 1 < count; ++k) {
    if (q[k] < 2) throw Error("gen_recursive_q: q_k must be >= 2");
    terms.push_back(q[k] * terms.back() + 1);
  }
  return IntegerSequence("normalized recursive_q", std::move(terms), json{{"family", "recursive_q"}, {"q", q_json}});
}

IntegerSequence gen_block_multiples(const std::vector<BigInt>& p, bool shifted) {
  std::vector<BigInt> terms;
  json p_json = json::array();
  for (std::size_t j = 0; j < p.size(); ++j) {
    p_json.push_back(p[j].get_str());
    const unsigned long block = j + 1;
    if (p[j] < 1) throw Error("gen_block_multiples: p_j must be positive");
    if (j + 1 < p.size() && !(p[j] * block < p[j + 1])) {
      throw Error("gen_block_multiples: blocks interleave at j=" + std::to_string(block));
    }
    for (unsigned long i = 1; i <= block; ++i) terms.push_back(p[j] * i + (shifted ? 1 : 0));
  }
  return IntegerSequence(shifted ? "block_multiples shifted" : "block_multiples", std::move(terms),
                         json{{"family", "block_multiples"}, {"p", p_json}, {"shifted", shifted}});
}

IntegerSequence gen_powers(const BigInt& base, std::size_t count) {
  return gen_divisibility(
      BigInt(1), [&](std::size_t) { return base; }, count, "normalized powers of " + base.get_str(),
      json{{"family", "powers"}, {"base", base.get_str()}, {"count", count}});
}

IntegerSequence gen_triangular_pow2(std::size_t count) {
  return gen_divisibility(
      BigInt(1), [](std::size_t k) { return pow2(k + 1); }, count, "normalized 2^{k(k+1)/2}",
      json{{"family", "triangular_pow2"}, {"count", count}});
}

IntegerSequence gen_naturals(std::size_t count) {
  std::vector<BigInt> terms;
  for (std::size_t k = 1; k <= count; ++k) terms.emplace_back(static_cast<unsigned long>(k));
  return IntegerSequence("normalized naturals", std::move(terms), json{{"family", "naturals"}, {"count", count}});
}

IntegerSequence gen_chacon(std::size_t count) {
  std::vector<BigInt> q(count > 0 ? count - 1 : 0, BigInt(3));
  IntegerSequence s = gen_recursive_q(q, count);
  return IntegerSequence("normalized chacon", s.terms(), json{{"family", "chacon"}, {"count", count}});
}

namespace {

std::vector<BigInt> bigint_list(const json& j) {
  std::vector<BigInt> out;
  for (const auto& v : j) out.push_back(v.is_string() ? parse_bigint(v.get<std::string>()) : BigInt(v.get<long>()));
  return out;
}

}  // namespace

IntegerSequence make_sequence(const json& spec) {
  if (!spec.is_object() || !spec.contains("family")) throw Error("sequence spec needs a \"family\" field");
  const std::string family = spec.at("family").get<std::string>();
  auto count = [&](std::size_t fallback) { return spec.value("count", fallback); };
  if (family == "triangular_pow2") return gen_triangular_pow2(count(13));
  if (family == "powers") {
    BigInt base = parse_bigint(spec.value("base", std::string("2")));
    return gen_powers(base, count(11));
  }
  if (family == "naturals") return gen_naturals(count(100));
  if (family == "chacon") return gen_chacon(count(6));
  if (family == "divisibility") {
    auto ratios = bigint_list(spec.at("ratios"));
    BigInt base = parse_bigint(spec.value("base", std::string("1")));
    return gen_divisibility(base, ratios, count(ratios.size() + 1));
  }
  if (family == "recursive_q") {
    auto q = bigint_list(spec.at("q"));
    return gen_recursive_q(q, count(q.size() + 1));
  }
  if (family == "block_multiples") {
    return gen_block_multiples(bigint_list(spec.at("p")), spec.value("shifted", false));
  }
  if (family == "explicit") {
    return IntegerSequence(spec.value("label", std::string("explicit")), bigint_list(spec.at("terms")),
                           spec, spec.value("divisibility", false));
  }
  throw Error("unknown sequence family '" + family + "'");
}

// ---------------------------------------------------------------------------

PkRk decompose_pk_rk(const IntegerSequence& seq, std::size_t k) {
  if (k + 1 >= seq.size()) throw Error("decompose_pk_rk: k+1 outside the materialized prefix");
  PkRk out;
  out.partial_sum = 0;
  for (std::size_t j = 0; j <= k; ++j) {
    BigInt p, r;
    mpz_fdiv_qr(p.get_mpz_t(), r.get_mpz_t(), seq[j + 1].get_mpz_t(), seq[j].get_mpz_t());
    out.partial_sum += make_rational(r, p * seq[j]);
    if (j == k) {
      out.p = p;
      out.r = r;
    }
  }
  out.canonical = out.r >= 0 && out.r < seq[k];
  out.p_at_least_3 = out.p >= 3;
  return out;
}

ShiftResult shift_set(const IntegerSequence& seq, const BigInt& p) {
  ShiftResult out;
  std::vector<BigInt> terms;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    BigInt v = seq[k] - p;
    if (v >= 1) {
      if (!out.k0) out.k0 = k;
      terms.push_back(v);
    }
  }
  json gen{{"family", "shift"}, {"p", p.get_str()}, {"source", seq.generator()}};
  // p = 0 keeps the sequence unchanged, including its flags.
  if (p == 0) {
    out.seq = seq;
    return out;
  }
  out.seq = IntegerSequence("shifted by -" + p.get_str() + ": " + seq.label(), std::move(terms), gen, false);
  return out;
}

// ---------------------------------------------------------------------------

BigInt SparseBinary::value(unsigned long max_bits) const {
  BigInt v = 0;
  for (const auto& e : exponents) {
    if (e < 0 || e > max_bits) throw Error("SparseBinary value too large to materialize");
    v += pow2(e.get_ui());
  }
  return v;
}

std::string SparseBinary::to_string() const {
  if (exponents.empty()) return "0";
  if (exponents.back() <= 256) return value().get_str();
  std::ostringstream os;
  for (std::size_t i = exponents.size(); i-- > 0;) {
    os << "2^" << exponents[i].get_str();
    if (i > 0) os << " + ";
  }
  return os.str();
}

namespace {

SparseBinary plus_power(SparseBinary s, const BigInt& e) {
  if (!s.exponents.empty() && e <= s.exponents.back()) throw Error("SparseBinary exponents must increase");
  s.exponents.push_back(e);
  return s;
}

// s + 1 where s is a sum of distinct powers all >= 2^0; carries are resolved exactly.
SparseBinary plus_one(const SparseBinary& s) {
  SparseBinary out;
  BigInt carry = 0;  // exponent of the pending carry bit
  std::size_t i = 0;
  while (i < s.exponents.size() && s.exponents[i] == carry) {
    carry += 1;
    ++i;
  }
  out.exponents.push_back(carry);
  for (; i < s.exponents.size(); ++i) out.exponents.push_back(s.exponents[i]);
  return out;
}

int compare(const SparseBinary& a, const SparseBinary& b) {
  std::size_t i = a.exponents.size(), j = b.exponents.size();
  while (i > 0 && j > 0) {
    --i;
    --j;
    if (a.exponents[i] != b.exponents[j]) return a.exponents[i] < b.exponents[j] ? -1 : 1;
  }
  if (i > 0) return 1;
  if (j > 0) return -1;
  return 0;
}

Rational pow2_rational(const BigInt& e) {
  if (e > 1 << 20 || e < -(1 << 20)) throw Error("dyadic exponent too large to materialize");
  long v = e.get_si();
  if (v >= 0) return Rational(pow2(static_cast<unsigned long>(v)));
  return make_rational(BigInt(1), pow2(static_cast<unsigned long>(-v)));
}

// Sparse binary number as an exact integer comparison against a BigInt (k small).
int compare(const SparseBinary& a, const BigInt& k) {
  if (k < 1) return a.is_zero() ? (k == 0 ? 0 : 1) : 1;
  SparseBinary kb;
  std::size_t bits = mpz_sizeinbase(k.get_mpz_t(), 2);
  for (std::size_t b = 0; b < bits; ++b) {
    if (mpz_tstbit(k.get_mpz_t(), b)) kb.exponents.emplace_back(static_cast<unsigned long>(b));
  }
  return compare(a, kb);
}

}  // namespace

std::vector<int> SplitterOutput::A_blocks() const {
  std::vector<int> out;
  for (const auto& b : blocks) if (b.in_A()) out.push_back(b.n);
  return out;
}

std::vector<int> SplitterOutput::B_blocks() const {
  std::vector<int> out;
  for (const auto& b : blocks) if (!b.in_A()) out.push_back(b.n);
  return out;
}

std::optional<int> SplitterOutput::block_of(const BigInt& k) const {
  for (const auto& b : blocks) {
    if (compare(b.first, k) <= 0 && compare(b.last, k) >= 0) return b.n;
  }
  return std::nullopt;
}

Rational SplitterOutput::a_value(int block) const { return pow2_rational(blocks.at(block - 1).a_exp); }
Rational SplitterOutput::b_value(int block) const { return pow2_rational(blocks.at(block - 1).b_exp); }

json SplitterOutput::to_json() const {
  json out = json::array();
  for (const auto& b : blocks) {
    out.push_back({{"block", b.n},
                   {"set", b.in_A() ? "A" : "B"},
                   {"first", b.first.to_string()},
                   {"last", b.last.to_string()},
                   {"length", "2^" + b.length_exp.get_str()},
                   {"a", "2^" + b.a_exp.get_str()},
                   {"b", "2^" + b.b_exp.get_str()}});
  }
  return json{{"blocks", out}};
}

SplitterOutput alternating_split(int block_count) {
  if (block_count < 1) throw Error("alternating_split: block_count must be >= 1");
  SplitterOutput out;
  SplitBlock first;
  first.n = 1;
  first.first.exponents = {BigInt(0)};
  first.last.exponents = {BigInt(0)};
  first.length_exp = 0;
  first.a_exp = -1;
  first.b_exp = -3;
  out.blocks.push_back(first);
  for (int n = 2; n <= block_count; ++n) {
    const SplitBlock& prev = out.blocks.back();
    SplitBlock cur;
    cur.n = n;
    cur.first = plus_one(prev.last);
    const bool even = n % 2 == 0;
    // Least length L = 2^e with L * (carried value) >= 1/2.
    const BigInt& carried = even ? prev.b_exp : prev.a_exp;
    cur.length_exp = -carried - 1;
    // Largest constant v with L * v^{1/3} <= 2^{-n}: v = 2^{3(-n - e)}.
    BigInt cap = 3 * (-BigInt(n) - cur.length_exp);
    if (even) {
      cur.b_exp = prev.b_exp;
      cur.a_exp = std::min(prev.a_exp, cap);
    } else {
      cur.a_exp = prev.a_exp;
      cur.b_exp = std::min(prev.b_exp, cap);
    }
    cur.last = plus_power(prev.last, cur.length_exp);
    out.blocks.push_back(cur);
  }
  return out;
}

SplitCheck check_split(const SplitterOutput& out) {
  SplitCheck c;
  c.nonincreasing = c.block_sums = c.cube_root_sums = c.partition = true;
  SparseBinary expected_first;
  expected_first.exponents = {BigInt(0)};
  for (std::size_t i = 0; i < out.blocks.size(); ++i) {
    const SplitBlock& b = out.blocks[i];
    if (b.n != static_cast<int>(i) + 1) c.partition = false;
    if (i > 0) {
      const SplitBlock& p = out.blocks[i - 1];
      if (b.a_exp > p.a_exp || b.b_exp > p.b_exp) c.nonincreasing = false;
      if (!(b.first == plus_one(p.last))) c.partition = false;
      // last = first - 1 + length, with first - 1 = previous last.
      if (!(b.last == plus_power(p.last, b.length_exp))) c.partition = false;
    } else if (!(b.first == expected_first) || !(b.last == expected_first) || b.length_exp != 0) {
      c.partition = false;
    }
    const bool odd = b.n % 2 == 1;
    const BigInt& sum_exp = odd ? b.a_exp : b.b_exp;
    const BigInt& root_exp = odd ? b.b_exp : b.a_exp;
    // L * v >= 1/2  <=>  e_L + e_v >= -1.
    if (b.length_exp + sum_exp < -1) c.block_sums = false;
    // L * w^{1/3} <= 2^{-n}  <=>  L^3 w <= 2^{-3n}  <=>  3 e_L + e_w <= -3n.
    if (3 * b.length_exp + root_exp > -3 * BigInt(b.n)) c.cube_root_sums = false;
  }
  // Values must tend to 0: the final block must push both below their start.
  if (out.blocks.size() >= 3) {
    const auto& last = out.blocks.back();
    if (!(last.a_exp < out.blocks.front().a_exp && last.b_exp < out.blocks.front().b_exp)) c.nonincreasing = false;
  }
  return c;
}

}  // namespace recurlab
