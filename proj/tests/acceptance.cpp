// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "parasum/counterexamples.hpp"
#include "parasum/suites.hpp"

namespace {

using namespace parasum;
namespace S = parasum::suites;
namespace Y = parasum::symbolic;
using Clock = std::chrono::steady_clock;

// Pinned tolerances and budgets.
constexpr double kValueAtol = 1e-10;
constexpr double kMinExcess = 0.8284;
constexpr double kPenroseTol = 1e-9;
constexpr double kIdentityTol = 1e-8;
constexpr double kSpreadTol = 1e-8;
constexpr double kMarginTol = 1e-10;
constexpr double kTriangleTol = 1e-9;
constexpr double kBudgetC1 = 0.1;
constexpr double kBudgetC2 = 5.0;
constexpr double kBudgetC3 = 10.0;
constexpr double kBudgetTotal = 60.0;
constexpr std::uint64_t kSeed = 20261014;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      pass = false;
      detail += " [" + what + "]";
    }
  }
  void note(const std::string& s) { detail += " " + s; }
};

std::string fmt(double x) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3g", x);
  return b;
}

S::SuiteReport run(const std::string& name, std::size_t trials, std::uint64_t seed = kSeed) {
  S::SuiteConfig cfg;
  cfg.seed = seed;
  cfg.trials = trials;
  return S::run_suite(name, cfg);
}

/// Checks a suite report: no failures, every trial accounted for, and the
/// named properties within `limit`.
void require_suite(Verdict& v, const S::SuiteReport& rep, double limit,
                   const std::vector<std::string>& props = {}) {
  v.require(rep.ok(), rep.suite + " has " + std::to_string(rep.failed()) + " failures");
  for (const auto& p : rep.properties)
    v.require(p.passed + p.failed + p.excluded <= rep.trials, rep.suite + "." + p.name + " count");
  double worst = 0.0;
  for (const auto& name : props) {
    const auto* p = rep.property(name);
    v.require(p != nullptr, rep.suite + " lacks " + name);
    if (!p) continue;
    worst = std::max(worst, p->worst_residual);
    v.require(p->worst_residual <= limit,
              rep.suite + "." + name + " worst " + fmt(p->worst_residual) + " > " + fmt(limit));
  }
  v.note(rep.suite + ":" + std::to_string(rep.trials) + " trials, " +
         std::to_string(rep.exclusions.size()) + " excluded, worst " + fmt(worst) + ";");
}

Verdict criterion1() {
  Verdict v;
  const auto t0 = Clock::now();
  const double r2 = std::sqrt(2.0);
  for (std::size_t k : {1u, 4u}) {
    const auto nv = norm_bound_violation(k);
    const std::string tag = "k=" + std::to_string(k) + " ";
    v.require(nv.summable, tag + "not summable");
    v.require(std::abs(nv.norm_a - 1.0) <= kValueAtol, tag + "||A||");
    v.require(std::abs(nv.norm_b - r2) <= kValueAtol, tag + "||B||");
    v.require(std::abs(nv.norm_parallel - r2) <= kValueAtol, tag + "||A:B||");
    v.require(std::abs(nv.scalar_bound - (2.0 - r2)) <= kValueAtol, tag + "scalar bound");
    v.require(nv.excess() >= kMinExcess - kValueAtol, tag + "excess " + fmt(nv.excess()));
    v.note(tag + "excess " + std::to_string(nv.excess()) + ";");
  }
  const double dt = seconds_since(t0);
  v.require(dt < kBudgetC1, "runtime " + fmt(dt) + " s");
  v.note(fmt(dt) + " s");
  return v;
}

Verdict criterion2() {
  Verdict v;
  const auto t0 = Clock::now();
  const auto a = Y::build_A1(), b = Y::build_B1();
  const auto res = Y::solve_halfpower(a, b);
  const auto* cert = std::get_if<Y::UnsolvabilityCertificate>(&res);
  v.require(cert != nullptr, "no certificate");
  if (cert) {
    v.require(cert->forced_candidate == Y::ParityDiagonal::odd_projection(), "candidate is not P");
    const bool lambdas = cert->lambda_candidates.size() == 2 &&
                         cert->lambda_candidates[0] == Y::ExactValue(0) &&
                         cert->lambda_candidates[1] == Y::ExactValue(1);
    v.require(lambdas, "lambda candidates");
    v.require(cert->convergence_failures.size() == 2, "parity failures");
    v.require(cert->validate(), "certificate does not validate");
    v.require(cert->calkin_lower_bound == Y::ExactValue(Y::Rational(1, 2)), "bound != 1/2");
    const auto brute = Y::brute_force_truncation(a, b, cert->forced_candidate, 512);
    v.require(brute.unique_solution_is_candidate, "truncation has other solutions");
    v.require(brute.min_sup_deviation >= 0.5, "min deviation " + fmt(brute.min_sup_deviation));
    v.note("bound " + cert->calkin_lower_bound.str() + ", N=512 min deviation " +
           fmt(brute.min_sup_deviation) + ";");
  }
  const double dt = seconds_since(t0);
  v.require(dt < kBudgetC2, "runtime " + fmt(dt) + " s");
  v.note(fmt(dt) + " s");
  return v;
}

Verdict criterion3() {
  Verdict v;
  const auto t0 = Clock::now();
  require_suite(v, run("penrose", 1000), kPenroseTol, {"penrose"});
  require_suite(v, run("remark21", 1000), kIdentityTol,
                {"adjoint_pinv", "gram_pinv", "hermitian_commute", "psd_pinv_sqrt"});
  const double dt = seconds_since(t0);
  v.require(dt < kBudgetC3, "runtime " + fmt(dt) + " s");
  v.note(fmt(dt) + " s");
  return v;
}

Verdict criterion4() {
  Verdict v;
  const auto rep = run("thm31", 500);
  require_suite(v, rep, kSpreadTol, {"invariance_spread"});
  for (const char* p : {"verdict_agreement", "canned_spread", "canned_not_summable"}) {
    const auto* st = rep.property(p);
    v.require(st && st->failed == 0 && st->passed > 0, p);
  }
  return v;
}

Verdict criterion5() {
  Verdict v;
  require_suite(v, run("prop41", 500), kIdentityTol,
                {"commutativity", "alternate_form_A", "alternate_form_B"});
  require_suite(v, run("prop42", 500), kIdentityTol, {"range_formula"});
  require_suite(v, run("prop43", 500), kIdentityTol, {"half_meet_projector", "planted_meet"});
  require_suite(v, run("prop44", 500), kIdentityTol, {"associativity"});
  require_suite(v, run("prop46", 500), kIdentityTol,
                {"perp_identity", "join_routes", "meet_routes", "planted_meet"});
  return v;
}

Verdict criterion6() {
  Verdict v;
  require_suite(v, run("thm51", 500), kMarginTol, {"norm_bound"});
  const auto rep = run("thm52", 200);
  require_suite(v, rep, kTriangleTol, {"triangle_equality"});
  require_suite(v, rep, kIdentityTol, {"pinv_via_u", "pinv_via_ustar", "norm_identity"});
  require_suite(v, rep, kMarginTol, {"norm_bound"});
  const auto* s = rep.property("summable");
  v.require(s && s->failed == 0, "thm52 summable");
  return v;
}

Verdict criterion7() {
  Verdict v;
  require_suite(v, run("prop61", 500), kIdentityTol,
                {"douglas_identity", "factor_C", "factor_D", "range_sum"});
  return v;
}

Verdict criterion8() {
  Verdict v;
  const auto rep = run("module-layer", 200);
  require_suite(v, rep, kIdentityTol,
                {"axiom_linearity", "axiom_module_action", "axiom_adjoint", "cauchy_schwarz",
                 "flatten_additive", "flatten_multiplicative", "flatten_adjoint",
                 "flatten_vector_action", "thm31.invariance_spread", "thm32.closure",
                 "prop41.commutativity", "prop42.range_formula", "prop43.half_meet_projector",
                 "prop44.associativity", "prop46.perp_identity", "thm52.pinv_via_u",
                 "thm52.norm_identity"});
  require_suite(v, rep, kTriangleTol, {"thm52.triangle_equality"});
  require_suite(v, rep, kMarginTol, {"thm51.norm_bound", "thm52.norm_bound"});
  for (const char* p : {"axiom_positive", "axiom_definite", "thm31.verdict_agreement",
                        "thm52.summable"}) {
    const auto* st = rep.property(p);
    v.require(st && st->failed == 0 && st->passed > 0, p);
  }
  return v;
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"1 norm-bound counterexample (k = 1, 4)", criterion1},
      {"2 half-power unsolvability certificate", criterion2},
      {"3 Penrose and pseudo-inverse identity suites", criterion3},
      {"4 summability verdicts and {1}-inverse invariance", criterion4},
      {"5 commutativity, range, projector, associativity, complement suites", criterion5},
      {"6 norm bound and shared-isometry suites", criterion6},
      {"7 square-root factor and range sum suite", criterion7},
      {"8 Hilbert module layer over (2,1)^3", criterion8},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string(" exception: ") + e.what();
    }
    std::printf("%s criterion %s:%s\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
    std::fflush(stdout);
    failed += !v.pass;
  }
  const double total = seconds_since(t0);
  const bool in_budget = total < kBudgetTotal;
  std::printf("%s criterion 9 total wall clock, single-threaded: %.2f s (< %.0f s)\n",
              in_budget ? "PASS" : "FAIL", total, kBudgetTotal);
  failed += !in_budget;
  std::printf("%d of 9 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
