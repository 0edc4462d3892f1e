#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "parasum/cstar_module.hpp"
#include "parasum/geninv.hpp"
#include "parasum/parasum.hpp"
#include "parasum/random.hpp"
#include "parasum/symbolic.hpp"

// Seeded property sweeps.  Trial i of a run with seed s draws everything from
// gen::trial_rng(s, i), so any trial can be replayed in isolation.

namespace parasum::suites {

class UnknownSuite : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SuiteConfig {
  std::uint64_t seed = 0;
  std::size_t trials = 500;
  std::size_t max_dim = 16;
  // Random instances have singular values >= 1/16, so a 1e-10 cutoff
  // separates signal from rounding noise with a wide margin.
  TolerancePolicy tol{1e-10, 1e-8, 1e-10};

  void validate() const {
    if (trials < 1) throw std::invalid_argument("trials must be at least 1");
    if (max_dim < 1 || max_dim > 64) throw std::invalid_argument("max_dim must be in [1, 64]");
    tol.validate();
  }
};

using NamedMatrix = std::pair<std::string, ComplexMatrix>;

struct PropertyStats {
  std::string name;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t excluded = 0;
  double worst_residual = 0.0;
  double threshold = 0.0;
};

/// A failing check with everything needed to reproduce it.
struct FailureDump {
  std::string property;
  std::uint64_t seed = 0;
  std::size_t trial = 0;
  double residual = 0.0;
  double threshold = 0.0;
  std::vector<NamedMatrix> instance;
};

struct Exclusion {
  std::size_t trial = 0;
  std::string reason;
};

struct SuiteReport {
  std::string suite;
  std::string generator_version = gen::kGeneratorVersion;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t max_dim = 0;
  TolerancePolicy tol;
  std::vector<PropertyStats> properties;
  std::vector<FailureDump> failures;
  std::vector<Exclusion> exclusions;
  double wall_seconds = 0.0;

  std::size_t failed() const {
    std::size_t n = 0;
    for (const auto& p : properties) n += p.failed;
    return n;
  }
  bool ok() const { return failed() == 0; }

  const PropertyStats* property(const std::string& name) const {
    for (const auto& p : properties)
      if (p.name == name) return &p;
    return nullptr;
  }
};

/// One check outcome inside a trial.
struct Outcome {
  std::string property;
  double residual = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

/// State of a single trial: its RNG stream, the matrices it drew, and the
/// checks it ran.  Once a rank decision is found near the cutoff, every later
/// check in the trial is recorded as excluded.
class Trial {
 public:
  Trial(std::uint64_t seed, std::size_t index, const SuiteConfig& cfg)
      : rng(gen::trial_rng(seed, index)), cfg_(cfg), seed_(seed), index_(index) {}

  gen::Rng rng;

  const SuiteConfig& config() const { return cfg_; }
  const TolerancePolicy& tol() const { return cfg_.tol; }
  std::uint64_t seed() const { return seed_; }
  std::size_t index() const { return index_; }

  void keep(const std::string& name, const ComplexMatrix& m) { instance_.emplace_back(name, m); }

  /// Flags the trial when `m` has a singular value within 10x of the cutoff.
  void guard(const std::string& what, const ComplexMatrix& m, double scale = 0.0) {
    if (exclusion_) return;
    if (near_rank_boundary(m, cfg_.tol, scale)) exclusion_ = what + " is near the rank cutoff";
  }

  /// Passes iff residual <= threshold.
  void check(const std::string& property, double residual, double threshold) {
    outcomes_.push_back({property, residual, threshold, residual <= threshold});
  }

  /// Boolean property; the residual is reported as 0 or 1.
  void expect(const std::string& property, bool holds) {
    outcomes_.push_back({property, holds ? 0.0 : 1.0, 0.0, holds});
  }

  const std::vector<Outcome>& outcomes() const { return outcomes_; }
  const std::vector<NamedMatrix>& instance() const { return instance_; }
  const std::optional<std::string>& exclusion() const { return exclusion_; }

 private:
  const SuiteConfig& cfg_;
  std::uint64_t seed_;
  std::size_t index_;
  std::vector<NamedMatrix> instance_;
  std::vector<Outcome> outcomes_;
  std::optional<std::string> exclusion_;
};

/// ||x - y||_F / (1 + ||x||_F + ||y||_F), the scale-aware equality residual.
inline double rel(const ComplexMatrix& x, const ComplexMatrix& y) {
  return (x - y).frobenius_norm() / (1.0 + x.frobenius_norm() + y.frobenius_norm());
}

// ---------------------------------------------------------------------------
// Ambient spaces: C^n, or the flattened free module A^k, A = ⊕ M_{n_b}.
// Generators draw one matrix per summand; the module case assembles the
// summands through from_components and flattens.

struct Space {
  std::optional<cstar::FiniteCStarAlgebra> algebra;
  std::size_t rank = 1;
  std::size_t dim = 1;  // C^n case

  std::vector<std::size_t> component_dims() const {
    if (!algebra) return {dim};
    std::vector<std::size_t> d;
    for (auto n : algebra->block_dims) d.push_back(rank * n);
    return d;
  }

  ComplexMatrix assemble(const std::vector<ComplexMatrix>& comps) const {
    if (!algebra) return comps.front();
    return cstar::flatten(cstar::from_components(*algebra, rank, comps));
  }

  /// Off-image mass of a flattened operator; zero for C^n.
  double off_image(const ComplexMatrix& m) const {
    if (!algebra) return 0.0;
    return cstar::off_image_residual(m, *algebra, rank);
  }
};

/// Draws `count` matrices per summand with `draw` and assembles each.
inline std::vector<ComplexMatrix> draw_in(
    const Space& space, gen::Rng& rng,
    const std::function<std::vector<ComplexMatrix>(gen::Rng&, std::size_t)>& draw) {
  std::vector<std::vector<ComplexMatrix>> per;
  for (auto d : space.component_dims()) per.push_back(draw(rng, d));
  std::vector<ComplexMatrix> out;
  for (std::size_t m = 0; m < per.front().size(); ++m) {
    std::vector<ComplexMatrix> comps;
    for (auto& p : per) comps.push_back(p[m]);
    out.push_back(space.assemble(comps));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Instance recipes (per summand of size d)

enum class PairKind { psd, generic, shared_factor, not_summable };

inline const char* kind_name(PairKind k) {
  switch (k) {
    case PairKind::psd: return "psd";
    case PairKind::generic: return "generic";
    case PairKind::shared_factor: return "shared_factor";
    case PairKind::not_summable: return "not_summable";
  }
  return "?";
}

inline std::vector<ComplexMatrix> draw_pair(gen::Rng& rng, std::size_t d, PairKind kind) {
  using namespace parasum::gen;
  switch (kind) {
    case PairKind::psd: {
      auto p = psd_pair(rng, d);
      return {p.a, p.b};
    }
    case PairKind::generic:
      return {rank_r(rng, d, d, uniform_index(rng, 0, d)),
              rank_r(rng, d, d, uniform_index(rng, 0, d))};
    case PairKind::shared_factor: {
      // A = F X G*, B = F Y G*: R(A) + R(B) = R(F) = R(A+B) when X+Y is invertible.
      const std::size_t r = uniform_index(rng, 1, d);
      const auto f = scaled_isometry(rng, d, r), g = scaled_isometry(rng, d, r);
      const auto x = gaussian(rng, r, r);
      const auto y = scaled_isometry(rng, r, r) - x;  // X + Y well conditioned
      return {f * x * g.adjoint(), f * y * g.adjoint()};
    }
    case PairKind::not_summable: {
      // B = S - A with rank S < rank A, so R(A) cannot sit inside R(A+B) = R(S).
      const std::size_t ra = uniform_index(rng, 1, d);
      const auto a = rank_r(rng, d, d, ra);
      const auto s = rank_r(rng, d, d, uniform_index(rng, 0, ra - 1));
      return {a, s - a};
    }
  }
  return {};
}

/// Two projectors whose ranges share exactly a planted subspace.
inline std::vector<ComplexMatrix> draw_projector_pair(gen::Rng& rng, std::size_t d) {
  using namespace parasum::gen;
  const auto w = unitary(rng, d);
  const std::size_t common = uniform_index(rng, 0, d);
  const std::size_t rest = d - common;
  const std::size_t p = uniform_index(rng, 0, rest);
  const std::size_t q = uniform_index(rng, 0, rest - p);
  const auto c = columns(w, 0, common);
  const auto tail = columns(w, common, rest);
  auto span = [&](std::size_t extra) {
    if (extra == 0) return hermitian_part(c * c.adjoint());
    const auto basis = orthonormalize(hstack(c, tail * gaussian(rng, rest, extra)));
    return hermitian_part(basis * basis.adjoint());
  };
  auto pp = span(p);
  auto pq = span(q);
  return {pp, pq, hermitian_part(c * c.adjoint())};
}

/// |A|, |B|, and a partial isometry U = W P with R(P) ⊇ R(|A|) + R(|B|).
inline std::vector<ComplexMatrix> draw_isometry_pair(gen::Rng& rng, std::size_t d) {
  using namespace parasum::gen;
  const auto w = unitary(rng, d);
  const std::size_t shared = uniform_index(rng, 0, d / 2);
  const std::size_t ra = uniform_index(rng, 0, d - shared);
  const std::size_t rb = uniform_index(rng, 0, d - shared - ra);
  const std::size_t used = shared + ra + rb;
  const std::size_t extra = uniform_index(rng, 0, d - used);
  const auto common = columns(w, 0, shared);
  const auto abs_a = psd_on(rng, hstack(common, columns(w, shared, ra)));
  const auto abs_b = psd_on(rng, hstack(common, columns(w, shared + ra, rb)));
  const auto initial = columns(w, 0, used + extra);
  const auto p = hermitian_part(initial * initial.adjoint());
  return {abs_a, abs_b, unitary(rng, d) * p};
}

// ---------------------------------------------------------------------------
// Property bodies shared by the C^n and module suites

namespace detail {

inline std::vector<ComplexMatrix> v_samples(gen::Rng& rng, std::size_t n, std::size_t count = 20) {
  std::vector<ComplexMatrix> v;
  for (std::size_t i = 0; i < count; ++i) v.push_back(gen::gaussian(rng, n, n));
  return v;
}

inline Space plain(Trial& t) {
  Space s;
  s.dim = gen::uniform_index(t.rng, 1, t.config().max_dim);
  return s;
}

inline void keep_all(Trial& t, const std::vector<std::string>& names,
                     const std::vector<ComplexMatrix>& ms) {
  for (std::size_t i = 0; i < names.size(); ++i) t.keep(names[i], ms[i]);
}

inline void guard_pair(Trial& t, const ComplexMatrix& a, const ComplexMatrix& b) {
  t.guard("A", a);
  t.guard("B", b);
  t.guard("A+B", a + b);
}

/// psd pair, generic pair, shared-factor pair, non-summable pair, in turn.
inline PairKind mixed_kind(std::size_t trial) { return static_cast<PairKind>(trial % 4); }

/// Summable kinds only.
inline PairKind summable_kind(std::size_t trial) {
  static constexpr PairKind kinds[] = {PairKind::psd, PairKind::generic, PairKind::shared_factor};
  return kinds[trial % 3];
}

}  // namespace detail

inline void body_thm31(Trial& t, const Space& sp) {
  const auto kind = detail::mixed_kind(t.index());
  const auto ab = draw_in(sp, t.rng, [&](gen::Rng& r, std::size_t d) { return draw_pair(r, d, kind); });
  const auto& a = ab[0];
  const auto& b = ab[1];
  detail::keep_all(t, {"A", "B"}, ab);
  detail::guard_pair(t, a, b);
  const auto tol = t.tol();
  const auto rep = is_parallel_summable(a, b, tol);
  t.expect("verdict_agreement", rep.summable == rep.range_verdict());
  if (kind == PairKind::not_summable) t.expect("generated_not_summable", !rep.summable);
  if (rep.summable) {
    const auto samples = detail::v_samples(t.rng, a.rows());
    const auto ps = parallel_sum(a, b, samples, tol);
    t.check("invariance_spread", ps.invariance_spread, tol.eq_atol);
  }
}

inline void body_thm32(Trial& t, const Space& sp) {
  const auto ab = draw_in(sp, t.rng, [](gen::Rng& r, std::size_t d) { return draw_pair(r, d, PairKind::psd); });
  const auto& a = ab[0];
  const auto& b = ab[1];
  detail::keep_all(t, {"A", "B"}, ab);
  detail::guard_pair(t, a, b);
  const auto tol = t.tol();
  const auto ps = parallel_sum(a, b, tol);
  const double scale = 1.0 + a.frobenius_norm() + b.frobenius_norm();
  t.expect("summable", ps.summability.summable);
  const double lo = hermitian_eigen(hermitian_part(ps.value)).values.front();
  t.check("positive", std::max(0.0, -lo), tol.psd_atol * scale);
  t.check("hermitian", rel(ps.value, ps.value.adjoint()), tol.eq_atol);
  t.check("alternate_form_A", ps.alt_residual_A / scale, tol.eq_atol);
  t.check("alternate_form_B", ps.alt_residual_B / scale, tol.eq_atol);
  t.check("closure", sp.off_image(ps.value) / scale, tol.eq_atol);
}

inline void body_prop41(Trial& t, const Space& sp) {
  const auto kind = detail::summable_kind(t.index());
  const auto ab = draw_in(sp, t.rng, [&](gen::Rng& r, std::size_t d) { return draw_pair(r, d, kind); });
  const auto& a = ab[0];
  const auto& b = ab[1];
  detail::keep_all(t, {"A", "B"}, ab);
  detail::guard_pair(t, a, b);
  const auto tol = t.tol();
  const auto ab_ = parallel_sum(a, b, tol);
  const auto ba_ = parallel_sum(b, a, tol);
  t.check("commutativity", rel(ab_.value, ba_.value), tol.eq_atol);
  const double scale = 1.0 + a.frobenius_norm() + b.frobenius_norm();
  t.check("alternate_form_A", ab_.alt_residual_A / scale, tol.eq_atol);
  t.check("alternate_form_B", ab_.alt_residual_B / scale, tol.eq_atol);
}

inline void body_prop42(Trial& t, const Space& sp) {
  const auto kind = t.index() % 2 ? PairKind::shared_factor : PairKind::psd;
  const auto ab = draw_in(sp, t.rng, [&](gen::Rng& r, std::size_t d) { return draw_pair(r, d, kind); });
  const auto& a = ab[0];
  const auto& b = ab[1];
  detail::keep_all(t, {"A", "B"}, ab);
  detail::guard_pair(t, a, b);
  const auto tol = t.tol();
  const auto ps = parallel_sum(a, b, tol);
  const double scale = operator_norm(a) + operator_norm(b);
  t.guard("A:B", ps.value, scale);
  const auto range = range_projector(ps.value, tol, scale);
  const auto meet = subspace_meet(range_projector(a, tol), range_projector(b, tol), tol);
  t.check("range_formula", rel(range.projector, meet.projector), tol.eq_atol);
  t.expect("range_dim", range.dim == meet.dim);
}

inline void body_prop43(Trial& t, const Space& sp) {
  const auto pq = draw_in(sp, t.rng, draw_projector_pair);
  detail::keep_all(t, {"P", "Q", "planted"}, pq);
  t.guard("P+Q", pq[0] + pq[1]);
  const auto tol = t.tol();
  const auto r = projection_parallel(pq[0], pq[1], tol);
  t.check("half_meet_projector", r.residual / (1.0 + r.value.frobenius_norm()), tol.eq_atol);
  t.check("planted_meet", rel(r.meet.projector, pq[2]), tol.eq_atol);
}

inline void body_prop44(Trial& t, const Space& sp) {
  const auto abc = draw_in(sp, t.rng, [](gen::Rng& r, std::size_t d) {
    return std::vector<ComplexMatrix>{gen::psd(r, d, gen::uniform_index(r, 0, d)),
                                      gen::psd(r, d, gen::uniform_index(r, 0, d)),
                                      gen::psd(r, d, gen::uniform_index(r, 0, d))};
  });
  const auto& a = abc[0];
  const auto& b = abc[1];
  const auto& c = abc[2];
  detail::keep_all(t, {"A", "B", "C"}, abc);
  detail::guard_pair(t, a, b);
  t.guard("B+C", b + c);
  const auto tol = t.tol();
  const auto ab = parallel_sum(a, b, tol).value;
  const auto bc = parallel_sum(b, c, tol).value;
  t.guard("A:B+C", ab + c);
  t.guard("A+B:C", a + bc);
  const auto left = parallel_sum(ab, c, tol).value;
  const auto right = parallel_sum(a, bc, tol).value;
  t.check("associativity", rel(left, right), tol.eq_atol);
}

inline void body_prop46(Trial& t, const Space& sp) {
  const auto pq = draw_in(sp, t.rng, draw_projector_pair);
  detail::keep_all(t, {"P_M", "P_N", "planted"}, pq);
  t.guard("P_M+P_N", pq[0] + pq[1], 1.0);
  const auto id = ComplexMatrix::identity(pq[0].rows());
  t.guard("complement sum", (id - pq[0]) + (id - pq[1]), 1.0);
  const auto tol = t.tol();
  const auto d = submodule_sum_decomposition(pq[0], pq[1], tol);
  const auto m = subspace_from_projector(pq[0], tol), n = subspace_from_projector(pq[1], tol);
  t.check("perp_identity", d.perp_residual / (1.0 + pq[0].frobenius_norm()), tol.eq_atol);
  t.check("join_routes", rel(d.join.projector, subspace_join(m, n, tol).projector), tol.eq_atol);
  t.check("meet_routes", rel(d.meet.projector, subspace_meet(m, n, tol).projector), tol.eq_atol);
  t.check("planted_meet", rel(d.meet.projector, pq[2]), tol.eq_atol);
}

inline void body_thm51(Trial& t, const Space& sp) {
  const auto ab = draw_in(sp, t.rng, [](gen::Rng& r, std::size_t d) {
    auto p = gen::psd_pair(r, d);
    // nonzero operands
    if (p.a.frobenius_norm() == 0.0) p.a = gen::psd(r, d, gen::uniform_index(r, 1, d));
    if (p.b.frobenius_norm() == 0.0) p.b = gen::psd(r, d, gen::uniform_index(r, 1, d));
    return std::vector<ComplexMatrix>{p.a, p.b};
  });
  const auto& a = ab[0];
  const auto& b = ab[1];
  detail::keep_all(t, {"A", "B"}, ab);
  detail::guard_pair(t, a, b);
  const auto rep = check_norm_bound(a, b, t.tol());
  t.check("norm_bound", std::max(0.0, -rep.margin()), t.tol().psd_atol);
}

inline void body_thm52(Trial& t, const Space& sp) {
  const auto v = draw_in(sp, t.rng, draw_isometry_pair);
  const auto& abs_a = v[0];
  const auto& abs_b = v[1];
  const auto& u = v[2];
  detail::keep_all(t, {"|A|", "|B|", "U"}, v);
  const auto tol = t.tol();
  const auto [a, b] = shared_isometry_pair(abs_a, abs_b, u, tol);
  detail::guard_pair(t, a, b);
  t.guard("|A|+|B|", abs_a + abs_b);
  const auto rep = verify_shared_isometry(a, b, abs_a, abs_b, u, tol);
  const double scale = 1.0 + abs_a.frobenius_norm() + abs_b.frobenius_norm();
  t.check("triangle_equality", rep.triangle_residual / scale, tol.eq_atol);
  t.expect("summable", rep.summability.summable);
  const auto sum_pinv = mp_inverse(a + b, tol), abs_pinv = mp_inverse(abs_a + abs_b, tol);
  const double pscale = 1.0 + sum_pinv.frobenius_norm() + abs_pinv.frobenius_norm();
  t.check("pinv_via_u", rep.pinv_via_u_residual / pscale, tol.eq_atol);
  t.check("pinv_via_ustar", rep.pinv_via_ustar_residual / pscale, tol.eq_atol);
  t.check("norm_identity", rep.norm_identity_residual / scale, tol.eq_atol);
  if (operator_norm(a) > 0.0 && operator_norm(b) > 0.0) {
    const auto nb = check_norm_bound(a, b, tol);
    t.check("norm_bound", std::max(0.0, -nb.margin()), tol.psd_atol);
  }
}

inline void body_prop61(Trial& t, const Space& sp) {
  const auto ab = draw_in(sp, t.rng, [](gen::Rng& r, std::size_t d) { return draw_pair(r, d, PairKind::psd); });
  const auto& a = ab[0];
  const auto& b = ab[1];
  detail::keep_all(t, {"A", "B"}, ab);
  detail::guard_pair(t, a, b);
  const auto tol = t.tol();
  const auto f = douglas_factor(a, b, tol);
  const double scale = 1.0 + a.frobenius_norm() + b.frobenius_norm();
  t.check("douglas_identity", f.fw_residual / scale, tol.eq_atol);
  t.check("factor_C", f.factor_residual_c / scale, tol.eq_atol);
  t.check("factor_D", f.factor_residual_d / scale, tol.eq_atol);
  t.expect("range_C", f.range_c);
  t.expect("range_D", f.range_d);
  t.check("range_sum", range_sum_residual(a, b, tol), tol.eq_atol);
}

// ---------------------------------------------------------------------------
// C^n-only bodies

inline void body_penrose(Trial& t) {
  const std::size_t m = gen::uniform_index(t.rng, 1, t.config().max_dim);
  const std::size_t n = gen::uniform_index(t.rng, 1, t.config().max_dim);
  const std::size_t r = t.index() % 10 == 0 ? 0 : gen::uniform_index(t.rng, 0, std::min(m, n));
  const auto tm = gen::rank_r(t.rng, m, n, r);
  t.keep("T", tm);
  t.guard("T", tm);
  const auto tol = t.tol();
  const auto x = mp_inverse(tm, tol);
  const double norm = operator_norm(tm);
  t.check("penrose", verify_penrose(tm, x).max() / (1.0 + norm), tol.eq_atol);
  t.expect("rank", rank(tm, tol) == r);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto v = gen::gaussian(t.rng, n, m);
    const auto g = one_inverse_sample(tm, x, v);
    worst = std::max(worst, rel(tm * g * tm, tm));
  }
  t.check("one_inverse", worst, tol.eq_atol);
  const auto decomposition =
      range_projector(tm.adjoint(), tol).projector + null_projector(tm, tol).projector;
  t.check("range_null_split", rel(decomposition, ComplexMatrix::identity(n)), tol.eq_atol);
  t.check("range_gram", rel(range_projector(tm, tol).projector,
                            range_projector(tm * tm.adjoint(), tol).projector),
          tol.eq_atol);
}

inline void body_remark21(Trial& t) {
  const std::size_t m = gen::uniform_index(t.rng, 1, t.config().max_dim);
  const std::size_t n = gen::uniform_index(t.rng, 1, t.config().max_dim);
  const std::size_t r = t.index() % 10 == 0 ? 0 : gen::uniform_index(t.rng, 0, std::min(m, n));
  const auto tm = gen::rank_r(t.rng, m, n, r);
  // Hermitian with eigenvalues of both signs, and psd, on C^m
  const std::size_t rh = gen::uniform_index(t.rng, 0, m);
  const auto q = gen::isometry(t.rng, m, rh);
  ComplexMatrix lam(rh, rh);
  for (std::size_t i = 0; i < rh; ++i)
    lam(i, i) = gen::uniform(t.rng, 0.25, 4.0) * (gen::uniform(t.rng, 0, 1) < 0.5 ? -1.0 : 1.0);
  const auto h = hermitian_part(q * lam * q.adjoint());
  const auto p = gen::psd(t.rng, m, gen::uniform_index(t.rng, 0, m));
  t.keep("T", tm);
  t.keep("H", h);
  t.keep("P", p);
  t.guard("T", tm);
  t.guard("H", h);
  t.guard("P", p);
  const auto tol = t.tol();
  const auto tp = mp_inverse(tm, tol);
  t.check("adjoint_pinv", rel(mp_inverse(tm.adjoint(), tol), tp.adjoint()), tol.eq_atol);
  t.check("gram_pinv", rel(mp_inverse(tm.adjoint() * tm, tol), tp * tp.adjoint()), tol.eq_atol);
  const auto hp = mp_inverse(h, tol);
  t.check("hermitian_commute", rel(h * hp, hp * h), tol.eq_atol);
  const auto pp = mp_inverse(p, tol);
  const double lo = hermitian_eigen(hermitian_part(pp)).values.front();
  t.check("psd_pinv_positive", std::max(0.0, -lo), tol.psd_atol * (1.0 + pp.frobenius_norm()));
  t.check("psd_pinv_sqrt",
          rel(psd_sqrt(hermitian_part(pp), tol), mp_inverse(psd_sqrt(p, tol), tol)), tol.eq_atol);
}

/// The finite-dimensional half: every A:B has closed range, so its M-P
/// inverse exists and passes the Penrose equations.  The infinite-dimensional
/// witness is checked exactly on trial 0.
inline void body_prop45(Trial& t) {
  const Space sp = detail::plain(t);
  const auto ab = draw_in(sp, t.rng, [](gen::Rng& r, std::size_t d) { return draw_pair(r, d, PairKind::psd); });
  detail::keep_all(t, {"A", "B"}, ab);
  detail::guard_pair(t, ab[0], ab[1]);
  const auto tol = t.tol();
  const auto v = parallel_sum(ab[0], ab[1], tol).value;
  const double scale = operator_norm(ab[0]) + operator_norm(ab[1]);
  t.guard("A:B", v, scale);
  const auto x = mp_inverse(v, tol, scale);
  t.check("pinv_exists", verify_penrose(v, x).max() / (1.0 + operator_norm(v) + operator_norm(x)),
          tol.eq_atol);
  if (t.index() == 0) {
    const auto w = symbolic::prop45_witness();
    t.expect("witness_sum_invertible", w.sum_invertible);
    t.expect("witness_A_not_invertible", !w.a_invertible);
    t.expect("witness_B_invertible", w.b_invertible);
    t.expect("witness_parallel_not_invertible", !w.parallel_invertible);
    t.expect("witness_first_entry", w.parallel_first_entry == symbolic::ExactValue(symbolic::Rational(1, 4)));
    t.expect("witness_equivalence", w.equivalence_holds());
  }
}

/// A = [[1,0],[0,0]], B = [[-1,0],[1,0]]: R(B) is not inside R(A+B).
inline std::pair<ComplexMatrix, ComplexMatrix> canned_not_summable() {
  return {ComplexMatrix{{1, 0}, {0, 0}}, ComplexMatrix{{-1, 0}, {1, 0}}};
}

inline void body_canned(Trial& t) {
  const auto [a, b] = canned_not_summable();
  const auto s = a + b;
  const auto sp = mp_inverse(s, t.tol());
  const auto base = a * sp * b;
  double spread = 0.0;
  for (const auto& v : detail::v_samples(t.rng, 2))
    spread = std::max(spread, (a * one_inverse_sample(s, sp, v) * b - base).frobenius_norm());
  // at least one sampled {1}-inverse moves A(A+B)^- B by more than 1e-3
  t.expect("canned_spread", spread > 1e-3);
  t.expect("canned_not_summable", !is_parallel_summable(a, b, t.tol()).summable);
}

// ---------------------------------------------------------------------------
// Module-only bodies

inline Space module_space() {
  Space s;
  s.algebra = cstar::FiniteCStarAlgebra{{2, 1}};
  s.rank = 3;
  return s;
}

inline void body_module_axioms(Trial& t) {
  const auto sp = module_space();
  const auto& alg = *sp.algebra;
  const std::size_t k = sp.rank;
  const double atol = 1e-10;
  const auto x = cstar::gen::vector(t.rng, alg, k);
  const auto y = cstar::gen::vector(t.rng, alg, k);
  const auto z = cstar::gen::vector(t.rng, alg, k);
  const auto a = cstar::gen::element(t.rng, alg);
  const complex alpha(gen::uniform(t.rng, -2, 2), gen::uniform(t.rng, -2, 2));
  const complex beta(gen::uniform(t.rng, -2, 2), gen::uniform(t.rng, -2, 2));
  t.keep("x", cstar::flatten(x));
  t.keep("y", cstar::flatten(y));
  t.keep("z", cstar::flatten(z));
  t.keep("a", cstar::flatten(a));
  using cstar::inner_product;
  const auto lhs1 = inner_product(x, alpha * y + beta * z);
  const auto rhs1 = inner_product(x, y) * alpha + inner_product(x, z) * beta;
  const double s = 1.0 + cstar::module_norm(x) * (cstar::module_norm(y) + cstar::module_norm(z));
  t.check("axiom_linearity", lhs1.distance(rhs1) / (s * (1.0 + std::abs(alpha) + std::abs(beta))), atol);
  t.check("axiom_module_action", inner_product(x, y.times(a)).distance(inner_product(x, y) * a) /
                                     (s * (1.0 + a.norm())),
          atol);
  t.check("axiom_adjoint", inner_product(y, x).distance(inner_product(x, y).adjoint()) / s, atol);
  const auto xx = inner_product(x, x);
  t.expect("axiom_positive", xx.is_positive(t.tol()));
  t.expect("axiom_definite", cstar::module_norm(x) > 0.0 &&
                                 cstar::module_norm(cstar::HilbertModuleVector(alg, k)) == 0.0);
  const double cs = inner_product(x, y).norm() - cstar::module_norm(x) * cstar::module_norm(y);
  t.check("cauchy_schwarz", std::max(0.0, cs) / s, atol);
}

inline void body_module_flatten(Trial& t) {
  const auto sp = module_space();
  const auto& alg = *sp.algebra;
  const std::size_t k = sp.rank;
  const double atol = 1e-10;
  const auto s1 = cstar::gen::op(t.rng, alg, k);
  const auto s2 = cstar::gen::op(t.rng, alg, k);
  const auto x = cstar::gen::vector(t.rng, alg, k);
  const auto a = cstar::gen::element(t.rng, alg);
  const auto f1 = cstar::flatten(s1), f2 = cstar::flatten(s2);
  t.keep("S", f1);
  t.keep("T", f2);
  t.check("flatten_additive", rel(cstar::flatten(s1 + s2), f1 + f2), atol);
  t.check("flatten_multiplicative", rel(cstar::flatten(s1 * s2), f1 * f2), atol);
  t.check("flatten_adjoint", rel(cstar::flatten(s1.adjoint()), f1.adjoint()), atol);
  t.check("flatten_unital",
          rel(cstar::flatten(cstar::ModuleOperator::identity(alg, k)),
              ComplexMatrix::identity(k * alg.total_dim())),
          atol);
  // norm in ⊕_b M_{k n_b} is the largest summand norm
  double comp_norm = 0.0;
  for (std::size_t b = 0; b < alg.block_count(); ++b)
    comp_norm = std::max(comp_norm, operator_norm(cstar::component(s1, b)));
  t.check("flatten_norm", std::abs(operator_norm(f1) - comp_norm) / (1.0 + comp_norm), atol);
  t.check("flatten_vector_action", rel(cstar::flatten(s1.apply(x)), f1 * cstar::flatten(x)), atol);
  t.check("a_linearity", s1.apply(x.times(a)).distance(s1.apply(x).times(a)) /
                             (1.0 + f1.frobenius_norm() * cstar::flatten(x).frobenius_norm() *
                                        (1.0 + a.norm())),
          atol);
  t.check("unflatten_roundtrip",
          rel(cstar::flatten(cstar::unflatten(f1, alg, k)), f1), atol);
}

// ---------------------------------------------------------------------------
// Registry

using Body = std::function<void(Trial&)>;

struct SuiteDef {
  std::string name;
  std::string summary;
  std::vector<Body> bodies;  // every body runs once per trial
};

inline Body on_plain(void (*f)(Trial&, const Space&)) {
  return [f](Trial& t) { f(t, detail::plain(t)); };
}

inline Body on_module(void (*f)(Trial&, const Space&)) {
  return [f](Trial& t) { f(t, module_space()); };
}

inline const std::vector<SuiteDef>& registry() {
  static const std::vector<SuiteDef> defs = {
      {"penrose", "Penrose equations, {1}-inverses, range/null splitting", {body_penrose}},
      {"remark21", "adjoint, Gram, Hermitian and psd identities of T+", {body_remark21}},
      {"thm31", "summability residuals vs range inclusions; {1}-inverse invariance",
       {on_plain(body_thm31), body_canned}},
      {"thm32", "psd pairs are summable with positive parallel sum", {on_plain(body_thm32)}},
      {"prop41", "commutativity and alternate forms", {on_plain(body_prop41)}},
      {"prop42", "range of A:B is R(A) ∩ R(B)", {on_plain(body_prop42)}},
      {"prop43", "P:Q is half the meet projector", {on_plain(body_prop43)}},
      {"prop44", "associativity on psd triples", {on_plain(body_prop44)}},
      {"prop45", "M-P invertibility of parallel sums", {body_prop45}},
      {"prop46", "complement of a meet is the join of complements", {on_plain(body_prop46)}},
      {"thm51", "norm bound for psd pairs", {on_plain(body_thm51)}},
      {"thm52", "norm bound and pseudo-inverse relations for shared-isometry pairs",
       {on_plain(body_thm52)}},
      {"prop61", "square-root factors and range sum identity", {on_plain(body_prop61)}},
      {"module-layer", "Hilbert module axioms, flattening, and parasum identities over (2,1)^3",
       {body_module_axioms, body_module_flatten, on_module(body_thm31), on_module(body_thm32),
        on_module(body_prop41), on_module(body_prop42), on_module(body_prop43),
        on_module(body_prop44), on_module(body_prop46), on_module(body_thm51),
        on_module(body_thm52)}},
  };
  return defs;
}

inline const SuiteDef& find_suite(const std::string& name) {
  for (const auto& d : registry())
    if (d.name == name) return d;
  throw UnknownSuite("unknown suite '" + name + "'");
}

inline std::vector<std::string> suite_names() {
  std::vector<std::string> n;
  for (const auto& d : registry()) n.push_back(d.name);
  return n;
}

/// Body labels prefix property names in the module suite so that
/// e.g. thm31 and thm51 checks stay distinct.
inline const std::vector<std::string>& module_labels() {
  static const std::vector<std::string> l = {"",       "",       "thm31.", "thm32.",
                                             "prop41.", "prop42.", "prop43.", "prop44.",
                                             "prop46.", "thm51.",  "thm52."};
  return l;
}

/// Runs one trial of a suite; bodies share the trial but get fresh sub-streams.
struct TrialRecord {
  std::vector<Outcome> outcomes;
  std::vector<NamedMatrix> instance;
  std::optional<std::string> exclusion;
};

inline TrialRecord run_trial(const std::string& name, std::uint64_t seed, std::size_t index,
                             const SuiteConfig& cfg) {
  const auto& def = find_suite(name);
  TrialRecord rec;
  for (std::size_t bi = 0; bi < def.bodies.size(); ++bi) {
    // Body bi of trial i draws from stream (seed + bi, i).
    Trial t(seed + bi, index, cfg);
    def.bodies[bi](t);
    const std::string prefix = name == "module-layer" ? module_labels()[bi] : "";
    for (auto o : t.outcomes()) {
      o.property = prefix + o.property;
      rec.outcomes.push_back(std::move(o));
    }
    for (auto m : t.instance()) {
      m.first = prefix + m.first;
      rec.instance.push_back(std::move(m));
    }
    if (t.exclusion() && !rec.exclusion) rec.exclusion = prefix + *t.exclusion();
  }
  return rec;
}

inline SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg) {
  cfg.validate();
  find_suite(name);
  const auto start = std::chrono::steady_clock::now();
  SuiteReport rep;
  rep.suite = name;
  rep.seed = cfg.seed;
  rep.trials = cfg.trials;
  rep.max_dim = cfg.max_dim;
  rep.tol = cfg.tol;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < cfg.trials; ++i) {
    auto rec = run_trial(name, cfg.seed, i, cfg);
    if (rec.exclusion) rep.exclusions.push_back({i, *rec.exclusion});
    for (const auto& o : rec.outcomes) {
      auto [it, fresh] = index.emplace(o.property, rep.properties.size());
      if (fresh) rep.properties.push_back({o.property, 0, 0, 0, 0.0, o.threshold});
      auto& st = rep.properties[it->second];
      if (rec.exclusion) {
        ++st.excluded;
        continue;
      }
      st.worst_residual = std::max(st.worst_residual, o.residual);
      st.threshold = o.threshold;
      if (o.pass) {
        ++st.passed;
      } else {
        ++st.failed;
        rep.failures.push_back({o.property, cfg.seed, i, o.residual, o.threshold, rec.instance});
      }
    }
  }
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

/// Re-runs the trial behind a failure and returns the residual it reports.
inline double replay(const std::string& suite, const FailureDump& f, const SuiteConfig& cfg) {
  const auto rec = run_trial(suite, f.seed, f.trial, cfg);
  for (const auto& o : rec.outcomes)
    if (o.property == f.property) return o.residual;
  throw std::logic_error("replay: property not produced by the trial");
}

}  // namespace parasum::suites
