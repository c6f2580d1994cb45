#include "recurlab/linsys.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <set>
#include <sstream>

namespace recurlab {

std::vector<std::size_t> build_j_function(std::size_t N) {
  if (N < 2) throw Error("build_j_function: N must be at least 2");
  std::vector<std::size_t> j(N + 1, 0);
  std::size_t pos = 0;  // 0-based position in 1; 1,2; 1,2,3; ...
  for (std::size_t block = 1; pos + 2 <= N; ++block) {
    for (std::size_t v = 1; v <= block && pos + 2 <= N; ++v, ++pos) j[pos + 2] = v;
  }
  return j;
}

bool DiagShiftOperator::diagonal() const {
  return std::all_of(weights.begin(), weights.end(), [](const Rational& w) { return w == 0; });
}

json DiagShiftOperator::to_json() const {
  json d = json::array(), w = json::array(), jj = json::array();
  for (const auto& a : diag) d.push_back(to_string(a.center()));
  for (const auto& x : weights) w.push_back(to_string(x));
  for (std::size_t n = 2; n < j_map.size(); ++n) jj.push_back(j_map[n]);
  return json{{"N", dim()}, {"diag", d}, {"weights", w}, {"j", jj}};
}

json DiagChain::to_json() const {
  json e = json::array();
  for (const auto& x : edges) {
    e.push_back(json{{"n", x.n},
                     {"parent", x.parent},
                     {"m", x.m},
                     {"epsilon", to_string(x.epsilon)},
                     {"edge", x.edge.to_json()},
                     {"telescoped", interval_json(x.telescoped)}});
  }
  return json{{"operator", op.to_json()}, {"edges", e}, {"budget", to_string(budget)}};
}

std::vector<Rational> geometric_budgets(std::size_t N, const Rational& total_budget) {
  std::vector<Rational> eps(N + 1, Rational(0));
  for (std::size_t n = 2; n <= N; ++n) eps[n] = make_rational(total_budget.get_num(), total_budget.get_den() * pow2(n - 1));
  return eps;
}

DiagChain build_diag_chain(const IntegerSequence& seq, std::size_t N, const std::vector<Rational>& eps) {
  if (!seq.divisibility()) throw Error("build_diag_chain: sequence lacks the divisibility property");
  if (eps.size() < N + 1) throw Error("build_diag_chain: need eps_2..eps_N");
  DiagChain out;
  out.op.j_map = build_j_function(N);
  out.op.diag.push_back(AngleTurns::exact(Rational(0)));
  out.op.weights.assign(N - 1, Rational(0));
  out.budget = 0;
  std::set<Rational> used{Rational(0)};
  std::vector<Interval> tele(N + 1, Interval::zero());
  for (std::size_t n = 2; n <= N; ++n) {
    std::size_t parent = out.op.j_map[n];
    const AngleTurns& base = out.op.diag[parent - 1];
    Interval target = Interval::exact(eps[n]);
    double eps_d = eps[n].get_d();
    bool placed = false;
    for (std::size_t m = 1; m < seq.size(); ++m) {
      // Cheap screen: the sup is at least the k = m-1 term.
      double ratio = Rational(make_rational(seq[m - 1], seq[m])).get_d();
      if (2 * std::sin(M_PI * std::min(ratio, 0.5)) > 2 * eps_d) continue;
      auto pr = perturb_divisibility(base, seq, m);
      Rational th = floor_frac(pr.theta.center());
      if (!pr.certificate.value.certainly_below(target) || used.count(th)) continue;
      used.insert(th);
      out.op.diag.push_back(AngleTurns::exact(th));
      ChainEdge e;
      e.n = n;
      e.parent = parent;
      e.m = m;
      e.epsilon = eps[n];
      e.edge = pr.certificate;
      tele[n] = tele[parent] + Interval(pr.certificate.value.hi(), pr.certificate.value.hi());
      e.telescoped = tele[n];
      out.edges.push_back(std::move(e));
      out.budget += eps[n];
      placed = true;
      break;
    }
    if (!placed) throw Error("build_diag_chain: budget infeasible at n = " + std::to_string(n));
  }
  return out;
}

std::vector<Rational> geometric_weights(std::size_t N, const Rational& rho) {
  std::vector<Rational> w;
  for (std::size_t n = 1; n < N; ++n) w.push_back(make_rational(rho.get_num(), rho.get_den() * pow2(2 * n)));
  return w;
}

// ---------------------------------------------------------------------------
// Upper-triangular complex matrices: midpoints at a fixed precision plus a
// bound on the spectral norm of the distance to the true matrix.

namespace {

struct CMat {
  std::size_t N = 0;
  int bits = 0;
  std::vector<Real> re, im;  // full N x N storage, lower part stays zero
  Real err;                  // upward-rounded

  CMat(std::size_t n, int b) : N(n), bits(b), err(Real::zero()) {
    re.reserve(n * n);
    im.reserve(n * n);
    for (std::size_t i = 0; i < n * n; ++i) {
      re.emplace_back(b);
      im.emplace_back(b);
      mpfr_set_zero(re.back().get(), 1);
      mpfr_set_zero(im.back().get(), 1);
    }
  }
  Real& r(std::size_t i, std::size_t j) { return re[i * N + j]; }
  Real& c(std::size_t i, std::size_t j) { return im[i * N + j]; }
  const Real& r(std::size_t i, std::size_t j) const { return re[i * N + j]; }
  const Real& c(std::size_t i, std::size_t j) const { return im[i * N + j]; }
};

Real pow2_real(long e) {
  Real out(64);
  mpfr_set_ui_2exp(out.get(), 1, e, MPFR_RNDN);
  return out;
}

// sqrt(||X||_1 ||X||_inf), rounded up; bounds the spectral norm of X and of |X|.
Real holder_bound(const CMat& X) {
  std::vector<Real> rows(X.N, Real::zero()), cols(X.N, Real::zero());
  Real a(X.bits);
  for (std::size_t i = 0; i < X.N; ++i) {
    for (std::size_t j = i; j < X.N; ++j) {
      mpfr_hypot(a.get(), X.r(i, j).get(), X.c(i, j).get(), MPFR_RNDU);
      rows[i] = add(rows[i], a, Round::Up);
      cols[j] = add(cols[j], a, Round::Up);
    }
  }
  Real r1 = Real::zero(), ri = Real::zero();
  for (std::size_t i = 0; i < X.N; ++i) {
    r1 = max(r1, cols[i]);
    ri = max(ri, rows[i]);
  }
  return sqrt(mul(r1, ri, Round::Up), Round::Up);
}

// Largest column 2-norm, rounded down: a lower bound on the spectral norm.
Real column_lower(const CMat& X) {
  Real best = Real::zero(), a(X.bits), s(X.bits);
  for (std::size_t j = 0; j < X.N; ++j) {
    mpfr_set_zero(s.get(), 1);
    for (std::size_t i = 0; i <= j; ++i) {
      mpfr_hypot(a.get(), X.r(i, j).get(), X.c(i, j).get(), MPFR_RNDD);
      mpfr_sqr(a.get(), a.get(), MPFR_RNDD);
      mpfr_add(s.get(), s.get(), a.get(), MPFR_RNDD);
    }
    mpfr_sqrt(s.get(), s.get(), MPFR_RNDD);
    best = max(best, s);
  }
  return best;
}

// Per-product rounding: |fl(AB) - AB| <= gamma |A||B| entrywise.
Real gamma_for(std::size_t N, int bits) {
  return mul(Real::from_bigint(BigInt(static_cast<unsigned long>(4 * (N + 4))), Round::Up), pow2_real(-bits),
             Round::Up);
}

CMat multiply(const CMat& A, const CMat& B) {
  CMat C(A.N, A.bits);
  Real t(A.bits);
  for (std::size_t i = 0; i < A.N; ++i) {
    for (std::size_t j = i; j < A.N; ++j) {
      Real& cr = C.r(i, j);
      Real& ci = C.c(i, j);
      for (std::size_t k = i; k <= j; ++k) {
        mpfr_fmms(t.get(), A.r(i, k).get(), B.r(k, j).get(), A.c(i, k).get(), B.c(k, j).get(), MPFR_RNDN);
        mpfr_add(cr.get(), cr.get(), t.get(), MPFR_RNDN);
        mpfr_fmma(t.get(), A.r(i, k).get(), B.c(k, j).get(), A.c(i, k).get(), B.r(k, j).get(), MPFR_RNDN);
        mpfr_add(ci.get(), ci.get(), t.get(), MPFR_RNDN);
      }
    }
  }
  Real na = holder_bound(A), nb = holder_bound(B);
  Real e = add(mul(na, B.err, Round::Up), mul(nb, A.err, Round::Up), Round::Up);
  e = add(e, mul(A.err, B.err, Round::Up), Round::Up);
  e = add(e, mul(gamma_for(A.N, A.bits), mul(na, nb, Round::Up), Round::Up), Round::Up);
  C.err = e;
  return C;
}

CMat identity(std::size_t N, int bits) {
  CMat I(N, bits);
  for (std::size_t i = 0; i < N; ++i) mpfr_set_ui(I.r(i, i).get(), 1, MPFR_RNDN);
  return I;
}

// Midpoint of an enclosure and an upper bound on its radius.
void set_from_interval(Real& mid, Real& rad, const Interval& x) {
  mpfr_add(mid.get(), x.lo().get(), x.hi().get(), MPFR_RNDN);
  mpfr_div_2ui(mid.get(), mid.get(), 1, MPFR_RNDN);
  Real a = sub(x.hi(), mid, Round::Up), b = sub(mid, x.lo(), Round::Up);
  rad = max(a, b);
}

CMat build_matrix(const DiagShiftOperator& op, int bits) {
  PrecisionGuard guard(bits);
  std::size_t N = op.dim();
  CMat T(N, bits);
  Real diag_err = Real::zero(), w_err = Real::zero(), rr(bits), ri(bits);
  for (std::size_t i = 0; i < N; ++i) {
    if (!op.diag[i].is_exact()) throw Error("power_norm: diagonal angles must be exact");
    auto z = ComplexInterval::unit_root(op.diag[i].center());
    set_from_interval(T.r(i, i), rr, z.re);
    set_from_interval(T.c(i, i), ri, z.im);
    diag_err = max(diag_err, add(rr, ri, Round::Up));
  }
  for (std::size_t i = 0; i + 1 < N; ++i) {
    Real w = Real::from_rational(op.weights[i], Round::Nearest);
    mpfr_set(T.r(i, i + 1).get(), w.get(), MPFR_RNDN);
    Rational d = op.weights[i] - T.r(i, i + 1).to_rational();
    if (d < 0) d = -d;
    w_err = max(w_err, Real::from_rational(d, Round::Up));
  }
  T.err = add(diag_err, w_err, Round::Up);
  return T;
}

CMat power(const CMat& T, const BigInt& n) {
  CMat R = identity(T.N, T.bits);
  if (n == 0) return R;
  std::size_t top = mpz_sizeinbase(n.get_mpz_t(), 2);
  for (std::size_t b = top; b-- > 0;) {
    R = multiply(R, R);
    if (mpz_tstbit(n.get_mpz_t(), b)) R = multiply(R, T);
  }
  return R;
}

Interval diag_formula(const DiagShiftOperator& op, const BigInt& n) {
  Interval best = Interval::zero();
  for (const auto& a : op.diag) best = max(best, unimod_dist(a, n));
  return best;
}

// Norms of X - I and X - D^n from the midpoints of X = T^n.
void fill_norms(PowerNorm& out, const CMat& X, const DiagShiftOperator& op) {
  PrecisionGuard guard(X.bits);
  CMat Y = X;  // X - I
  CMat Z = X;  // X - D^n
  Real dr(X.bits), di(X.bits), rad_r(X.bits), rad_i(X.bits), d_err = Real::zero();
  for (std::size_t i = 0; i < X.N; ++i) {
    mpfr_sub_ui(Y.r(i, i).get(), Y.r(i, i).get(), 1, MPFR_RNDN);
    auto z = ComplexInterval::unit_root(floor_frac(op.diag[i].center() * out.n));
    set_from_interval(dr, rad_r, z.re);
    set_from_interval(di, rad_i, z.im);
    d_err = max(d_err, add(rad_r, rad_i, Round::Up));
    mpfr_sub(Z.r(i, i).get(), Z.r(i, i).get(), dr.get(), MPFR_RNDN);
    mpfr_sub(Z.c(i, i).get(), Z.c(i, i).get(), di.get(), MPFR_RNDN);
  }
  Real nx = holder_bound(X);
  // Subtraction rounding on the diagonal: at most 2^-p (|x| + 1) per entry.
  Real sub_err = mul(pow2_real(-X.bits + 1), add(nx, Real::from_double(2.0), Round::Up), Round::Up);
  Real e_y = add(X.err, sub_err, Round::Up);
  Real e_z = add(e_y, d_err, Round::Up);
  auto enclose = [](const CMat& M, const Real& e) {
    Real hi = add(holder_bound(M), e, Round::Up);
    Real lo = sub(column_lower(M), e, Round::Down);
    if (lo.sign() < 0) lo = Real::zero();
    return Interval(lo, hi);
  };
  out.norm_TI = enclose(Y, e_y);
  out.norm_TD = enclose(Z, e_z);
}

double error_of(const CMat& X) { return X.err.to_double(Round::Up); }

}  // namespace

PowerNorm power_norm(const DiagShiftOperator& op, const BigInt& n, const PowerNormOptions& options) {
  if (op.dim() == 0) throw Error("power_norm: empty operator");
  if (op.weights.size() + 1 != op.dim()) throw Error("power_norm: need N-1 weights");
  if (n < 0) throw Error("power_norm: negative power");
  PowerNorm out;
  out.n = n;
  out.norm_DI = diag_formula(op, n);
  if (op.diagonal() && !options.force_matrix) {
    out.norm_TI = out.norm_DI;
    out.norm_TD = Interval::zero();
    out.bits = precision_bits();
    out.method = "diagonal";
    return out;
  }
  out.method = "matrix";
  for (int bits = precision_bits();; bits *= 2) {
    CMat X = power(build_matrix(op, bits), n);
    if (error_of(X) <= options.error_ceiling || bits * 2 > options.max_bits) {
      if (error_of(X) > options.error_ceiling) {
        throw Error("power_norm: precision insufficient at " + std::to_string(bits) + " bits");
      }
      out.bits = bits;
      fill_norms(out, X, op);
      return out;
    }
  }
}

json NormCertificate::to_json() const {
  json rs = json::array();
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    rs.push_back(json{{"k", k},
                      {"n_k", r.n.get_str()},
                      {"norm_TI", interval_json(r.norm_TI, 17)},
                      {"norm_TD", interval_json(r.norm_TD, 17)},
                      {"norm_DI", interval_json(r.norm_DI, 17)},
                      {"bits", r.bits},
                      {"method", r.method}});
  }
  return json{{"N", N},           {"K", K},           {"delta", to_string(delta)}, {"rho", to_string(rho)},
              {"sup_TI", sup_TI}, {"sup_TD", sup_TD}, {"sup_DI", sup_DI},          {"pass", pass},
              {"rows", rs},       {"log", log}};
}

std::string NormCertificate::csv() const {
  std::ostringstream os;
  os << "k,n_k,norm_TI,norm_TD,bits_used\n";
  os.precision(17);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    os << k << ',' << rows[k].n.get_str() << ',' << rows[k].norm_TI.hi_d() << ',' << rows[k].norm_TD.hi_d() << ','
       << rows[k].bits << '\n';
  }
  return os.str();
}

NormCertificate norm_certificate(const DiagShiftOperator& op, const IntegerSequence& seq, std::size_t K,
                                 const Rational& delta, const PowerNormOptions& options) {
  if (K >= seq.size()) throw Error("norm_certificate: horizon beyond the materialized prefix");
  NormCertificate cert;
  cert.N = op.dim();
  cert.K = K;
  cert.delta = delta;
  bool incremental = seq.divisibility() && !(op.diagonal() && !options.force_matrix);
  if (!incremental) {
    for (std::size_t k = 0; k <= K; ++k) cert.rows.push_back(power_norm(op, seq[k], options));
  } else {
    for (int bits = precision_bits();; bits *= 2) {
      cert.rows.clear();
      CMat T = build_matrix(op, bits);
      CMat P = power(T, seq[0]);
      bool ok = true;
      for (std::size_t k = 0; k <= K; ++k) {
        if (k > 0) P = power(P, seq[k] / seq[k - 1]);
        if (error_of(P) > options.error_ceiling) {
          ok = false;
          break;
        }
        PowerNorm row;
        row.n = seq[k];
        row.bits = bits;
        row.method = "matrix";
        row.norm_DI = diag_formula(op, seq[k]);
        fill_norms(row, P, op);
        cert.rows.push_back(std::move(row));
      }
      if (ok) break;
      cert.log.push_back("tracked error above ceiling at " + std::to_string(bits) + " bits");
      if (bits * 2 > options.max_bits) throw Error("norm_certificate: precision insufficient");
    }
  }
  for (const auto& r : cert.rows) {
    cert.sup_TI = std::max(cert.sup_TI, r.norm_TI.hi_d());
    cert.sup_TD = std::max(cert.sup_TD, r.norm_TD.hi_d());
    cert.sup_DI = std::max(cert.sup_DI, r.norm_DI.hi_d());
  }
  Interval d = Interval::exact(delta);
  bool di_ok = true, td_ok = true;
  for (const auto& r : cert.rows) {
    di_ok = di_ok && r.norm_DI.certainly_at_most(d);
    td_ok = td_ok && r.norm_TD.certainly_below(d);
  }
  cert.pass = di_ok && td_ok;
  if (!op.weights.empty()) cert.rho = op.weights[0] * 4;
  return cert;
}

NormCertificate tune_weights(DiagShiftOperator& op, const IntegerSequence& seq, std::size_t K, const Rational& delta,
                             int max_rounds) {
  if (K >= seq.size()) throw Error("tune_weights: horizon beyond the materialized prefix");
  std::size_t e = mpz_sizeinbase(seq[K].get_mpz_t(), 2) + 1;
  Rational rho = make_rational(BigInt(1), pow2(e));
  std::vector<std::string> log;
  for (int round = 0; round < max_rounds; ++round) {
    op.weights = geometric_weights(op.dim(), rho);
    NormCertificate cert = norm_certificate(op, seq, K, delta);
    cert.rho = rho;
    std::ostringstream os;
    os << "rho=" << to_string(rho) << " sup_TD=" << cert.sup_TD << " sup_DI=" << cert.sup_DI;
    log.push_back(os.str());
    bool di_blocks = cert.sup_DI > delta.get_d();
    if (cert.pass || di_blocks || round + 1 == max_rounds) {
      if (di_blocks) log.push_back("diagonal part already exceeds delta; weights cannot fix it");
      cert.log.insert(cert.log.begin(), log.begin(), log.end());
      return cert;
    }
    // First-order scaling: shrink rho by the overshoot, at least a factor 2.
    double factor = cert.sup_TD / (0.5 * delta.get_d());
    long shift = std::max(1L, static_cast<long>(std::ceil(std::log2(std::max(factor, 2.0)))));
    rho /= Rational(pow2(static_cast<unsigned long>(shift)));
  }
  throw Error("tune_weights: max_rounds must be positive");
}

// ---------------------------------------------------------------------------

json BallCertificate::to_json() const {
  json out{{"delta", interval_json(delta)}, {"c", interval_json(c)}, {"K", K}, {"N", N}};
  out["gamma_max"] = gamma_max ? interval_json(*gamma_max) : json(nullptr);
  return out;
}

BallCertificate ball_certificate(const Interval& delta, const Interval& c, std::size_t K, std::size_t N) {
  BallCertificate out;
  out.delta = delta;
  out.c = c;
  out.K = K;
  out.N = N;
  if (c.certainly_below(delta)) {
    out.gamma_max = (delta - c) / (Interval::exact(Rational(2)) + delta + c);
  }
  return out;
}

json BallMcReport::to_json() const {
  return json{{"samples", samples}, {"gamma", gamma}, {"violations", violations}, {"min_margin", min_margin}};
}

BallMcReport ball_mc_verify(const DiagShiftOperator& op, const AngleTurns& lambda0, const IntegerSequence& seq,
                            std::size_t K, double gamma, std::uint64_t samples, std::uint64_t seed) {
  if (K >= seq.size()) throw Error("ball_mc_verify: horizon beyond the materialized prefix");
  using cd = std::complex<double>;
  const std::size_t N = op.dim();
  // S^{n_k} as dense double matrices.
  std::vector<std::vector<cd>> powers;
  std::optional<CMat> P;
  for (std::size_t k = 0; k <= K; ++k) {
    std::vector<cd> M(N * N, cd(0, 0));
    double ph = 2 * M_PI * floor_frac(lambda0.center() * seq[k]).get_d();
    cd rot(std::cos(ph), std::sin(ph));
    if (op.diagonal()) {
      for (std::size_t i = 0; i < N; ++i) {
        double a = 2 * M_PI * floor_frac(op.diag[i].center() * seq[k]).get_d();
        M[i * N + i] = rot * cd(std::cos(a), std::sin(a));
      }
    } else {
      if (P && seq.divisibility()) {
        P = power(*P, seq[k] / seq[k - 1]);
      } else {
        P = power(build_matrix(op, precision_bits()), seq[k]);
      }
      for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = i; j < N; ++j) M[i * N + j] = rot * cd(P->r(i, j).to_double(), P->c(i, j).to_double());
      }
    }
    powers.push_back(std::move(M));
  }
  BallMcReport rep;
  rep.samples = samples;
  rep.gamma = gamma;
  rep.min_margin = INFINITY;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0, 1);
  std::uniform_real_distribution<double> U(0, 1);
  std::vector<cd> u(N), v(N);
  for (std::uint64_t s = 0; s < samples; ++s) {
    double norm = 0;
    for (auto& x : u) {
      x = cd(g(rng), g(rng));
      norm += std::norm(x);
    }
    double r = gamma * std::pow(U(rng), 1.0 / static_cast<double>(2 * N)) / std::sqrt(norm);
    for (auto& x : u) x *= r;
    u[0] += 1.0;
    for (const auto& M : powers) {
      double d2 = 0;
      for (std::size_t i = 0; i < N; ++i) {
        cd acc = 0;
        for (std::size_t j = i; j < N; ++j) acc += M[i * N + j] * u[j];
        d2 += std::norm(acc - u[i]);
      }
      double margin = std::sqrt(d2) - 2 * gamma;
      rep.min_margin = std::min(rep.min_margin, margin);
      if (margin <= 0) ++rep.violations;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------

json KalishReport::to_json() const {
  return json{{"lambda", lambda.to_json()}, {"grid", grid}, {"residual", interval_json(residual, 17)}};
}

KalishReport kalish_eigencheck(const AngleTurns& lambda, std::uint64_t grid) {
  if (grid < 256) throw Error("kalish_eigencheck: grid must have at least 2^8 points");
  if (!lambda.is_exact()) throw Error("kalish_eigencheck: lambda must be exact");
  const Rational theta = floor_frac(lambda.center());
  const BigInt G(static_cast<unsigned long>(grid));
  auto node = [&](std::uint64_t m) {
    return ComplexInterval::unit_root(make_rational(BigInt(static_cast<unsigned long>(m)), G));
  };
  auto chi = [&](std::uint64_t m) { return make_rational(BigInt(static_cast<unsigned long>(m)), G) >= theta ? 1 : 0; };
  const ComplexInterval lam = ComplexInterval::unit_root(theta);
  const ComplexInterval zero = ComplexInterval::exact(Rational(0));

  // Left-endpoint rule on each run of constant chi telescopes:
  // J chi(zeta_m) = sum of closed runs c (zeta_end - zeta_start) + c_cur (zeta_m - zeta_start),
  // so (M - J) chi(zeta_m) = c_cur zeta_start - sum of closed runs.
  ComplexInterval closed = zero;
  ComplexInterval zstart = node(0);
  Interval worst = Interval::zero();
  for (std::uint64_t m = 0; m < grid; ++m) {
    int c = chi(m);
    if (m > 0 && c != chi(m - 1)) {
      ComplexInterval zm = node(m);
      if (chi(m - 1)) closed = closed + (zm - zstart);
      zstart = zm;
    }
    ComplexInterval value = c ? zstart - closed : zero - closed;
    ComplexInterval expect = c ? lam : zero;
    worst = max(worst, (value - expect).abs());
  }
  KalishReport rep;
  rep.lambda = AngleTurns::exact(theta);
  rep.grid = grid;
  rep.residual = worst;
  return rep;
}

}  // namespace recurlab
