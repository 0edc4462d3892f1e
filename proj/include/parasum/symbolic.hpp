#pragma once

#include <boost/rational.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "parasum/matrix.hpp"

// Exact arithmetic for diagonal operators on l^2 whose entries follow closed
// forms on the odd and on the even basis vectors.  Entries are finite sums of
//     c * rho * prod_j (n + g_j)^{q_j}
// with rational c, g_j, negative rational q_j, a positive surd rho, and n >= 1
// the index inside the parity class.

namespace parasum::symbolic {

using Rational = boost::rational<std::int64_t>;

class NonRepresentable : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NonMonomialRule : public NonRepresentable {
 public:
  using NonRepresentable::NonRepresentable;
};

inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Rational floor(const Rational& r) {
  return Rational(floor_div(r.numerator(), r.denominator()));
}

inline Rational ipow(Rational base, std::int64_t e) {
  if (e < 0) {
    base = Rational(1) / base;
    e = -e;
  }
  Rational r(1);
  while (e-- > 0) r *= base;
  return r;
}

inline std::map<std::int64_t, std::int64_t> factorize(std::int64_t n) {
  if (n <= 0) throw std::invalid_argument("factorize: positive integer required");
  std::map<std::int64_t, std::int64_t> f;
  for (std::int64_t p = 2; p * p <= n; ++p)
    while (n % p == 0) {
      ++f[p];
      n /= p;
    }
  if (n > 1) ++f[n];
  return f;
}

/// Positive surd prod_p p^{e_p}, every p prime and e_p in (0, 1).
struct Radical {
  std::map<std::int64_t, Rational> exps;

  bool is_one() const { return exps.empty(); }
  double value() const {
    double v = 1.0;
    for (const auto& [p, e] : exps)
      v *= std::pow(static_cast<double>(p), boost::rational_cast<double>(e));
    return v;
  }
  std::string str() const {
    std::string s;
    for (const auto& [p, e] : exps) {
      if (!s.empty()) s += "*";
      s += std::to_string(p) + "^(" + to_string(e) + ")";
    }
    return s;
  }
  friend auto operator<=>(const Radical&, const Radical&) = default;
};

/// coeff * radical with prime-power carries folded into the coefficient.
struct SurdTerm {
  Rational coeff{0};
  Radical radical;
};

/// p^e for rational e, canonicalized.
inline SurdTerm prime_power(std::int64_t p, const Rational& e) {
  const Rational whole = floor(e);
  const Rational frac = e - whole;
  SurdTerm t{ipow(Rational(p), whole.numerator()), {}};
  if (frac != Rational(0)) t.radical.exps[p] = frac;
  return t;
}

inline SurdTerm multiply(const SurdTerm& a, const SurdTerm& b) {
  SurdTerm r{a.coeff * b.coeff, a.radical};
  for (const auto& [p, e] : b.radical.exps) {
    Rational total = r.radical.exps.count(p) ? r.radical.exps[p] + e : e;
    r.radical.exps.erase(p);
    const auto pp = prime_power(p, total);
    r.coeff *= pp.coeff;
    for (const auto& kv : pp.radical.exps) r.radical.exps.insert(kv);
  }
  return r;
}

/// base^q for positive rational base and rational q.
inline SurdTerm rational_power(const Rational& base, const Rational& q) {
  if (base <= Rational(0)) throw NonRepresentable("rational_power: base must be positive");
  SurdTerm r{Rational(1), {}};
  if (q == Rational(0)) return r;
  for (const auto& [p, k] : factorize(base.numerator())) r = multiply(r, prime_power(p, q * k));
  for (const auto& [p, k] : factorize(base.denominator()))
    r = multiply(r, prime_power(p, -q * k));
  return r;
}

/// Exact real: sum of surd terms with distinct radicals.  Distinct radicals
/// are linearly independent over Q, so this form is canonical.
class ExactValue {
 public:
  ExactValue() = default;
  ExactValue(Rational r) { add(SurdTerm{r, {}}); }  // NOLINT: implicit by intent
  ExactValue(std::int64_t r) : ExactValue(Rational(r)) {}
  explicit ExactValue(const SurdTerm& t) { add(t); }

  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one()); }
  std::optional<Rational> as_rational() const {
    if (terms_.empty()) return Rational(0);
    if (is_rational()) return terms_.begin()->second;
    return std::nullopt;
  }
  bool is_single_term() const { return terms_.size() <= 1; }
  const std::map<Radical, Rational>& terms() const { return terms_; }

  double to_double() const {
    long double v = 0.0L;
    for (const auto& [rad, c] : terms_)
      v += static_cast<long double>(boost::rational_cast<double>(c)) * rad.value();
    return static_cast<double>(v);
  }

  /// Sign; exact for a single term, otherwise decided in floating point.
  int sign() const {
    if (terms_.empty()) return 0;
    if (terms_.size() == 1) return terms_.begin()->second > Rational(0) ? 1 : -1;
    const double v = to_double();
    if (v == 0.0) throw NonRepresentable("sign of a surd sum is numerically ambiguous");
    return v > 0 ? 1 : -1;
  }

  ExactValue abs() const { return sign() < 0 ? -*this : *this; }

  /// Square root of a nonnegative single-term value.
  ExactValue sqrt() const {
    if (terms_.empty()) return {};
    if (terms_.size() != 1) throw NonMonomialRule("sqrt of a surd sum is not representable");
    const auto& [rad, c] = *terms_.begin();
    if (c < Rational(0)) throw NonRepresentable("sqrt of a negative value");
    SurdTerm r = rational_power(c, Rational(1, 2));
    for (const auto& [p, e] : rad.exps) r = multiply(r, prime_power(p, e / 2));
    return ExactValue(r);
  }

  ExactValue& operator+=(const ExactValue& o) {
    for (const auto& [rad, c] : o.terms_) add(SurdTerm{c, rad});
    return *this;
  }
  ExactValue operator-() const {
    ExactValue r = *this;
    for (auto& kv : r.terms_) kv.second = -kv.second;
    return r;
  }
  friend ExactValue operator+(ExactValue a, const ExactValue& b) { return a += b; }
  friend ExactValue operator-(ExactValue a, const ExactValue& b) { return a += -b; }
  friend ExactValue operator*(const ExactValue& a, const ExactValue& b) {
    ExactValue r;
    for (const auto& [ra, ca] : a.terms_)
      for (const auto& [rb, cb] : b.terms_) r.add(multiply(SurdTerm{ca, ra}, SurdTerm{cb, rb}));
    return r;
  }
  friend bool operator==(const ExactValue&, const ExactValue&) = default;

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [rad, c] : terms_) {
      if (!s.empty()) s += " + ";
      s += to_string(c);
      if (!rad.is_one()) s += "*" + rad.str();
    }
    return s;
  }

 private:
  void add(const SurdTerm& t) {
    if (t.coeff == Rational(0)) return;
    auto& c = terms_[t.radical];
    c += t.coeff;
    if (c == Rational(0)) terms_.erase(t.radical);
  }

  std::map<Radical, Rational> terms_;
};

// ---------------------------------------------------------------------------
// Entry rules

/// prod_j (n + g_j)^{q_j}, q_j < 0, keyed by shift g_j.
using Factors = std::map<Rational, Rational>;

struct MonomialKey {
  Radical radical;
  Factors factors;
  friend auto operator<=>(const MonomialKey&, const MonomialKey&) = default;
};

/// Closed form for the entries of one parity class, as a function of the
/// index n >= 1 inside the class.
class EntryRule {
 public:
  EntryRule() = default;

  static EntryRule constant(const ExactValue& v) {
    EntryRule r;
    for (const auto& [rad, c] : v.terms()) r.add(MonomialKey{rad, {}}, c);
    return r;
  }

  /// c * (alpha n + beta)^q.
  static EntryRule power_of_linear(const Rational& c, const Rational& alpha, const Rational& beta,
                                   const Rational& q) {
    if (c == Rational(0)) return {};
    if (alpha == Rational(0)) {
      if (q == Rational(0)) return constant(ExactValue(c));
      return constant(ExactValue(c) * ExactValue(rational_power(beta, q)));
    }
    if (q == Rational(0)) return constant(ExactValue(c));
    if (q > Rational(0)) throw NonRepresentable("entry rules admit only nonpositive exponents");
    if (alpha < Rational(0)) throw NonRepresentable("alpha n + beta must be positive for n >= 1");
    const Rational shift = beta / alpha;
    if (!(shift > Rational(-1)))
      throw NonRepresentable("alpha n + beta must be positive for n >= 1");
    const SurdTerm scale = multiply(SurdTerm{c, {}}, rational_power(alpha, q));
    EntryRule r;
    r.add(MonomialKey{scale.radical, Factors{{shift, q}}}, scale.coeff);
    return r;
  }

  bool is_zero() const { return terms_.empty(); }
  bool is_monomial() const { return terms_.size() == 1; }
  const std::map<MonomialKey, Rational>& terms() const { return terms_; }

  ExactValue evaluate(std::int64_t n) const {
    if (n < 1) throw std::out_of_range("entry rules are indexed from 1");
    ExactValue v;
    for (const auto& [key, c] : terms_) {
      ExactValue t(SurdTerm{c, key.radical});
      for (const auto& [shift, q] : key.factors)
        t = t * ExactValue(rational_power(Rational(n) + shift, q));
      v += t;
    }
    return v;
  }

  double evaluate_double(std::int64_t n) const {
    long double v = 0.0L;
    for (const auto& [key, c] : terms_) {
      long double t = boost::rational_cast<double>(c) * key.radical.value();
      for (const auto& [shift, q] : key.factors)
        t *= std::pow(static_cast<long double>(n) + boost::rational_cast<long double>(shift),
                      boost::rational_cast<long double>(q));
      v += t;
    }
    return static_cast<double>(v);
  }

  /// Exact limit as n -> infinity: the factor-free terms.
  ExactValue limit() const {
    ExactValue v;
    for (const auto& [key, c] : terms_)
      if (key.factors.empty()) v += ExactValue(SurdTerm{c, key.radical});
    return v;
  }

  /// Every term is a positive multiple of a positive function of n.
  bool provably_nonnegative() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const auto& kv) { return kv.second > Rational(0); });
  }

  /// Zero, provably nonnegative, or mixed-sign with a positive limit and
  /// nonnegative exact entries on 1..checked.
  bool is_nonnegative(std::int64_t checked = 64) const {
    if (is_zero() || provably_nonnegative()) return true;
    if (limit().sign() <= 0) return false;
    for (std::int64_t n = 1; n <= checked; ++n)
      if (evaluate(n).sign() < 0) return false;
    return true;
  }

  EntryRule& operator+=(const EntryRule& o) {
    for (const auto& [k, c] : o.terms_) add(k, c);
    return *this;
  }
  EntryRule operator-() const {
    EntryRule r = *this;
    for (auto& kv : r.terms_) kv.second = -kv.second;
    return r;
  }
  friend EntryRule operator+(EntryRule a, const EntryRule& b) { return a += b; }
  friend EntryRule operator-(EntryRule a, const EntryRule& b) { return a += -b; }

  friend EntryRule operator*(const EntryRule& a, const EntryRule& b) {
    EntryRule r;
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_) {
        const SurdTerm s = multiply(SurdTerm{ca, ka.radical}, SurdTerm{cb, kb.radical});
        Factors f = ka.factors;
        for (const auto& [shift, q] : kb.factors) f[shift] += q;
        f = clean(std::move(f));
        if (f.size() > 1) throw NonRepresentable("product mixes distinct linear bases");
        r.add(MonomialKey{s.radical, std::move(f)}, s.coeff);
      }
    return r;
  }

  /// Quotient by a monomial; the result must stay within the grammar.
  friend EntryRule operator/(const EntryRule& num, const EntryRule& den) {
    if (!den.is_monomial()) throw NonRepresentable("division by a non-monomial rule");
    return num * den.reciprocal();
  }

  /// Entrywise square root of a positive monomial.
  EntryRule sqrt() const {
    if (terms_.empty()) return {};
    if (!is_monomial()) throw NonMonomialRule("square root of a sum of terms");
    const auto& [key, c] = *terms_.begin();
    if (c < Rational(0)) throw NonRepresentable("square root of a negative rule");
    ExactValue coeff = ExactValue(SurdTerm{c, key.radical}).sqrt();
    const auto& [rad, rc] = *coeff.terms().begin();
    Factors f;
    for (const auto& [shift, q] : key.factors) f[shift] = q / 2;
    EntryRule r;
    r.add(MonomialKey{rad, std::move(f)}, rc);
    return r;
  }

  friend bool operator==(const EntryRule&, const EntryRule&) = default;

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [key, c] : terms_) {
      if (!s.empty()) s += " + ";
      s += to_string(c);
      if (!key.radical.is_one()) s += "*" + key.radical.str();
      for (const auto& [shift, q] : key.factors) {
        s += "*(n";
        if (shift > Rational(0)) s += "+" + to_string(shift);
        if (shift < Rational(0)) s += "-" + to_string(-shift);
        s += ")^(" + to_string(q) + ")";
      }
    }
    return s;
  }

 private:
  static Factors clean(Factors f) {
    for (auto it = f.begin(); it != f.end();) {
      if (it->second == Rational(0))
        it = f.erase(it);
      else if (it->second > Rational(0))
        throw NonRepresentable("result has a positive exponent in n");
      else
        ++it;
    }
    return f;
  }

  EntryRule reciprocal() const {
    const auto& [key, c] = *terms_.begin();
    SurdTerm inv{Rational(1) / c, {}};
    for (const auto& [p, e] : key.radical.exps) inv = multiply(inv, prime_power(p, -e));
    EntryRule r;
    Factors f;
    for (const auto& [shift, q] : key.factors) f[shift] = -q;
    // Positive exponents are legal only transiently here; operator* cleans them.
    r.terms_[MonomialKey{inv.radical, std::move(f)}] = inv.coeff;
    return r;
  }

  void add(const MonomialKey& k, const Rational& c) {
    if (c == Rational(0)) return;
    auto& slot = terms_[k];
    slot += c;
    if (slot == Rational(0)) terms_.erase(k);
  }

  std::map<MonomialKey, Rational> terms_;
};

// ---------------------------------------------------------------------------
// Parity-diagonal operators

/// Diagonal operator on l^2 with entry odd_rule(m) at e_{2m-1} and
/// even_rule(m) at e_{2m}.
struct ParityDiagonal {
  EntryRule odd_rule;
  EntryRule even_rule;

  static ParityDiagonal scalar(const ExactValue& v) {
    return {EntryRule::constant(v), EntryRule::constant(v)};
  }
  static ParityDiagonal identity() { return scalar(ExactValue(1)); }
  static ParityDiagonal zero() { return {}; }
  /// Projection onto the closed span of e_1, e_3, ...
  static ParityDiagonal odd_projection() {
    return {EntryRule::constant(ExactValue(1)), EntryRule{}};
  }

  /// Entry at the global basis index n >= 1.
  ExactValue entry(std::int64_t n) const {
    if (n < 1) throw std::out_of_range("basis indices start at 1");
    return n % 2 ? odd_rule.evaluate((n + 1) / 2) : even_rule.evaluate(n / 2);
  }

  ExactValue odd_limit() const { return odd_rule.limit(); }
  ExactValue even_limit() const { return even_rule.limit(); }

  /// Membership in compact + scalar: both parity limits agree.
  bool in_algebra() const { return odd_limit() == even_limit(); }

  /// The scalar part, when in the algebra.
  std::optional<ExactValue> scalar_part() const {
    if (!in_algebra()) return std::nullopt;
    return odd_limit();
  }

  bool is_positive() const { return odd_rule.is_nonnegative() && even_rule.is_nonnegative(); }

  /// Leading N x N corner, entries rounded to double.
  ComplexMatrix truncate(std::size_t n) const {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      m(i, i) = entry(static_cast<std::int64_t>(i + 1)).to_double();
    return m;
  }

  friend ParityDiagonal operator+(const ParityDiagonal& a, const ParityDiagonal& b) {
    return {a.odd_rule + b.odd_rule, a.even_rule + b.even_rule};
  }
  friend ParityDiagonal operator-(const ParityDiagonal& a, const ParityDiagonal& b) {
    return {a.odd_rule - b.odd_rule, a.even_rule - b.even_rule};
  }
  friend ParityDiagonal operator*(const ParityDiagonal& a, const ParityDiagonal& b) {
    return {a.odd_rule * b.odd_rule, a.even_rule * b.even_rule};
  }
  friend bool operator==(const ParityDiagonal&, const ParityDiagonal&) = default;
};

/// e_{2n-1} -> e_{2n-1} / (2n-1),  e_{2n} -> 0
inline ParityDiagonal build_A1() {
  return {EntryRule::power_of_linear(1, 2, -1, -1), EntryRule{}};
}

/// e_{2n-1} -> 0,  e_{2n} -> e_{2n} / (2n)
inline ParityDiagonal build_B1() {
  return {EntryRule{}, EntryRule::power_of_linear(1, 2, 0, -1)};
}

inline ParityDiagonal diag_sqrt(const ParityDiagonal& x) {
  if (!x.is_positive()) throw NonRepresentable("diag_sqrt: operand is not positive");
  return {x.odd_rule.sqrt(), x.even_rule.sqrt()};
}

/// Closed range iff the nonzero entries stay away from 0: each class rule is
/// identically zero or has a nonzero limit.  A nonzero rule of this grammar
/// has only finitely many zeros, so a zero limit means entries accumulate at 0.
inline bool is_mp_invertible(const ParityDiagonal& x) {
  auto ok = [](const EntryRule& r) { return r.is_zero() || !r.limit().is_zero(); };
  return ok(x.odd_rule) && ok(x.even_rule);
}

/// Entrywise a b / (a + b) where a + b != 0, for commuting diagonal operands.
inline ParityDiagonal diag_parallel_sum(const ParityDiagonal& a, const ParityDiagonal& b) {
  auto cls = [](const EntryRule& x, const EntryRule& y) {
    const auto s = x + y;
    if (s.is_zero()) return EntryRule{};
    return (x * y) / s;
  };
  return {cls(a.odd_rule, b.odd_rule), cls(a.even_rule, b.even_rule)};
}

// ---------------------------------------------------------------------------
// A^{1/2} = (A+B)^{1/2} X

struct LambdaFailure {
  ExactValue lambda;
  std::string parity;  // class whose limit differs from lambda
  ExactValue class_limit;
};

struct UnsolvabilityCertificate {
  ParityDiagonal forced_candidate;
  std::vector<std::string> derivation;
  std::vector<ExactValue> lambda_candidates;
  std::vector<LambdaFailure> convergence_failures;
  ExactValue calkin_lower_bound;

  /// Every candidate has a recorded failure that re-checks exactly, and the
  /// bound equals half the gap between the parity limits.
  bool validate() const {
    if (lambda_candidates.empty()) return false;
    const ExactValue lo = forced_candidate.odd_limit(), le = forced_candidate.even_limit();
    if (lo == le) return false;
    for (const auto& lam : lambda_candidates) {
      bool found = false;
      for (const auto& f : convergence_failures) {
        if (!(f.lambda == lam)) continue;
        const ExactValue& lim = f.parity == "odd" ? lo : le;
        if (lim == f.class_limit && !(lim == lam)) found = true;
      }
      if (!found) return false;
    }
    return calkin_lower_bound == (lo - le).abs() * ExactValue(Rational(1, 2));
  }
};

using HalfPowerResult = std::variant<ParityDiagonal, UnsolvabilityCertificate>;

namespace detail {

inline ExactValue half_gap(const ParityDiagonal& x) {
  return (x.odd_limit() - x.even_limit()).abs() * ExactValue(Rational(1, 2));
}

}  // namespace detail

/// min over lambda of max(|l1 - lambda|, |l2 - lambda|) = |l1 - l2| / 2 for the
/// parity limits l1 != l2, confirmed by a grid search over lambda.
inline ExactValue calkin_distance_bound(const ParityDiagonal& candidate, int grid_size = 1001) {
  if (candidate.in_algebra())
    throw std::invalid_argument("calkin_distance_bound: parity limits are equal");
  if (grid_size < 2) throw std::invalid_argument("calkin_distance_bound: grid too small");
  const ExactValue bound = detail::half_gap(candidate);
  const double l1 = candidate.odd_limit().to_double(), l2 = candidate.even_limit().to_double();
  const double lo = std::min(l1, l2) - 1.0, hi = std::max(l1, l2) + 1.0;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < grid_size; ++k) {
    const double lam = lo + (hi - lo) * k / (grid_size - 1);
    best = std::min(best, std::max(std::abs(l1 - lam), std::abs(l2 - lam)));
  }
  const double b = bound.to_double();
  const double step = (hi - lo) / (grid_size - 1);
  if (best < b - 1e-12 || best > b + step)
    throw std::logic_error("calkin_distance_bound: grid search disagrees with the exact bound");
  return bound;
}

inline HalfPowerResult solve_halfpower(const ParityDiagonal& a, const ParityDiagonal& b) {
  if (!a.is_positive() || !b.is_positive())
    throw NonRepresentable("solve_halfpower: operands must be positive");
  const ParityDiagonal sum = a + b;
  const ParityDiagonal ra = diag_sqrt(a);
  const ParityDiagonal rs = diag_sqrt(sum);

  // A class where A+B vanishes leaves X free there (A vanishes too since A <= A+B).
  const bool odd_free = rs.odd_rule.is_zero(), even_free = rs.even_rule.is_zero();
  ParityDiagonal x;
  if (!odd_free) x.odd_rule = ra.odd_rule / rs.odd_rule;
  if (!even_free) x.even_rule = ra.even_rule / rs.even_rule;
  if (odd_free && !even_free) x.odd_rule = EntryRule::constant(x.even_limit());
  if (even_free && !odd_free) x.even_rule = EntryRule::constant(x.odd_limit());

  if (!(rs * x == ra)) throw std::logic_error("solve_halfpower: candidate does not solve");
  if (x.in_algebra()) return x;

  UnsolvabilityCertificate cert;
  cert.forced_candidate = x;
  cert.derivation.push_back(
      "(A+B)^{1/2} has no zero entries, so X is forced entrywise: odd entries " +
      x.odd_rule.str() + ", even entries " + x.even_rule.str());
  cert.derivation.push_back("suppose X = D + lambda I with D compact");
  cert.derivation.push_back(
      "X is real diagonal, so X = X*; then D - D* = (conj(lambda) - lambda) I is compact, "
      "forcing lambda real");
  if (x * x == x) {
    cert.derivation.push_back(
        "X = X^2; then (lambda^2 - lambda) I = X^2 - X - (D^2 + 2 lambda D - D) is compact, "
        "forcing lambda = 0 or lambda = 1");
    cert.lambda_candidates = {ExactValue(0), ExactValue(1)};
  } else {
    cert.derivation.push_back(
        "X - lambda I compact forces lambda to equal both parity limits; candidates are the "
        "limits themselves");
    cert.lambda_candidates = {x.odd_limit()};
    if (!(x.even_limit() == x.odd_limit())) cert.lambda_candidates.push_back(x.even_limit());
  }
  for (const auto& lam : cert.lambda_candidates) {
    if (!(x.odd_limit() == lam)) {
      cert.convergence_failures.push_back({lam, "odd", x.odd_limit()});
      cert.derivation.push_back("lambda = " + lam.str() + ": odd entries tend to " +
                                x.odd_limit().str() + ", so X - lambda I is not compact");
    } else {
      cert.convergence_failures.push_back({lam, "even", x.even_limit()});
      cert.derivation.push_back("lambda = " + lam.str() + ": even entries tend to " +
                                x.even_limit().str() + ", so X - lambda I is not compact");
    }
  }
  cert.calkin_lower_bound = calkin_distance_bound(x);
  cert.derivation.push_back("every compact D and scalar lambda leave ||X - D - lambda I|| >= " +
                            cert.calkin_lower_bound.str());
  return cert;
}

/// Brute-force check of a certificate on the leading N x N corner: per
/// diagonal entry, search x in {k / grid : 0 <= k <= grid} for exact solutions
/// of A^{1/2}_n = (A+B)^{1/2}_n x, and measure how far the candidate stays from
/// every scalar k / grid.
struct TruncationCheck {
  std::size_t size = 0;
  bool unique_solution_is_candidate = true;
  double min_sup_deviation = 0.0;  // min over lambda grid of sup_n |X_n - lambda|
};

inline TruncationCheck brute_force_truncation(const ParityDiagonal& a, const ParityDiagonal& b,
                                              const ParityDiagonal& candidate, std::size_t size,
                                              int grid = 100) {
  TruncationCheck out;
  out.size = size;
  const auto ra = diag_sqrt(a), rs = diag_sqrt(a + b);
  std::vector<double> cand(size);
  for (std::size_t i = 0; i < size; ++i) {
    const auto n = static_cast<std::int64_t>(i + 1);
    const double an = ra.entry(n).to_double(), sn = rs.entry(n).to_double();
    cand[i] = candidate.entry(n).to_double();
    for (int k = 0; k <= grid; ++k) {
      const double xk = static_cast<double>(k) / grid;
      const bool solves = std::abs(an - sn * xk) <= 1e-12 * (1.0 + std::abs(an));
      const bool is_candidate = std::abs(xk - cand[i]) <= 1e-12;
      if (solves != is_candidate && sn != 0.0) out.unique_solution_is_candidate = false;
    }
  }
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= grid; ++k) {
    const double lam = static_cast<double>(k) / grid;
    double sup = 0.0;
    for (double c : cand) sup = std::max(sup, std::abs(c - lam));
    best = std::min(best, sup);
  }
  out.min_sup_deviation = best;
  return out;
}

// ---------------------------------------------------------------------------
// M-P invertibility of A:B when only one operand has closed range

struct Prop45Report {
  ParityDiagonal a, b, sum, parallel;
  ExactValue parallel_first_entry;
  ExactValue parallel_limit;
  bool a_invertible = false;
  bool b_invertible = false;
  bool sum_invertible = false;
  bool parallel_invertible = false;

  /// (A and B both M-P invertible) <=> (A:B M-P invertible)
  bool equivalence_holds() const { return (a_invertible && b_invertible) == parallel_invertible; }
};

inline Prop45Report prop45_witness() {
  Prop45Report r;
  // a_n = 1 / (n + 1) at the global index n: odd n = 2m - 1, even n = 2m.
  r.a = {EntryRule::power_of_linear(1, 2, 0, -1), EntryRule::power_of_linear(1, 2, 1, -1)};
  r.b = ParityDiagonal::identity() - r.a;
  r.sum = r.a + r.b;
  r.parallel = diag_parallel_sum(r.a, r.b);
  r.parallel_first_entry = r.parallel.entry(1);
  r.parallel_limit = r.parallel.odd_limit();
  r.a_invertible = is_mp_invertible(r.a);
  r.b_invertible = is_mp_invertible(r.b);
  r.sum_invertible = is_mp_invertible(r.sum);
  r.parallel_invertible = is_mp_invertible(r.parallel);
  return r;
}

}  // namespace parasum::symbolic
