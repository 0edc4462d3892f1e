// parasum: pseudo-inverses, parallel sums, property sweeps and counterexamples.
//
// Exit status: 0 success, 1 a mathematical property failed (or the pair is not
// parallel summable), 2 usage or input error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "parasum/counterexamples.hpp"
#include "parasum/io.hpp"
#include "parasum/suites.hpp"

namespace {

using parasum::io::json;

constexpr int kOk = 0;
constexpr int kViolated = 1;
constexpr int kUsage = 2;

struct Options {
  std::optional<double> tol_eq, tol_rank, tol_psd;
  std::optional<std::uint64_t> seed;
  std::size_t trials = 500;
  std::size_t max_dim = 16;
  std::string format = "table";
  std::string out;
};

parasum::TolerancePolicy apply(const Options& o, parasum::TolerancePolicy tol) {
  if (o.tol_eq) tol.eq_atol = *o.tol_eq;
  if (o.tol_rank) tol.rank_rtol = *o.tol_rank;
  if (o.tol_psd) tol.psd_atol = *o.tol_psd;
  tol.validate();
  return tol;
}

std::uint64_t resolve_seed(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("PARASUM_SEED")) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw parasum::io::InputError("PARASUM_SEED is not an unsigned integer");
  }
  return 0;
}

void emit(const Options& o, const json& report, const std::string& table_text) {
  const std::string text = o.format == "json" ? report.dump(2) + "\n" : table_text;
  if (o.out.empty())
    std::cout << text;
  else
    parasum::io::write_text(o.out, text);
}

int cmd_pinv(const Options& o, const std::string& input) {
  const auto tol = apply(o, {});
  const auto t = parasum::io::read_matrix(input);
  const auto x = parasum::mp_inverse(t, tol);
  const auto res = parasum::verify_penrose(t, x);
  json rep = {{"pinv", parasum::io::to_json(x)},
              {"rank", parasum::rank(t, tol)},
              {"residuals", parasum::io::to_json(res)},
              {"accepted", res.accepts(t, x, tol.eq_atol)}};
  emit(o, rep, "pinv\n" + parasum::io::table(x) + parasum::io::table(json{
                                                      {"rank", rep["rank"]},
                                                      {"residuals", rep["residuals"]},
                                                      {"accepted", rep["accepted"]}}));
  return res.accepts(t, x, tol.eq_atol) ? kOk : kViolated;
}

int cmd_parsum(const Options& o, const std::string& pa, const std::string& pb) {
  const auto tol = apply(o, {});
  const auto a = parasum::io::read_matrix(pa);
  const auto b = parasum::io::read_matrix(pb);
  if (!a.is_square() || !b.is_square() || a.rows() != b.rows())
    throw parasum::DimensionError("A and B must be square of equal size, got " +
                                  a.shape_string() + " and " + b.shape_string());
  parasum::gen::Rng rng(resolve_seed(o));
  std::vector<parasum::ComplexMatrix> samples;
  for (int i = 0; i < 20; ++i) samples.push_back(parasum::gen::gaussian(rng, a.rows(), a.rows()));
  try {
    const auto r = parasum::parallel_sum(a, b, samples, tol);
    const auto rep = parasum::io::to_json(r);
    emit(o, rep, "A:B\n" + parasum::io::table(r.value) +
                     parasum::io::table(json{{"alt_residual_A", r.alt_residual_A},
                                             {"alt_residual_B", r.alt_residual_B},
                                             {"invariance_spread", r.invariance_spread},
                                             {"summability", rep["summability"]}}));
    return kOk;
  } catch (const parasum::NotSummableError& e) {
    json rep = {{"summable", false},
                {"summability", parasum::io::to_json(e.report())},
                {"invariance_spread", e.invariance_spread()}};
    emit(o, rep, "not parallel summable\n" + parasum::io::table(rep));
    return kViolated;
  }
}

json stats_json(const parasum::suites::PropertyStats& p) {
  return {{"name", p.name},       {"passed", p.passed},
          {"failed", p.failed},   {"excluded", p.excluded},
          {"worst_residual", p.worst_residual}, {"threshold", p.threshold}};
}

int cmd_suite(const Options& o, const std::string& name) {
  namespace S = parasum::suites;
  S::find_suite(name);
  S::SuiteConfig cfg;
  cfg.seed = resolve_seed(o);
  cfg.trials = o.trials;
  cfg.max_dim = o.max_dim;
  cfg.tol = apply(o, cfg.tol);
  cfg.validate();
  const auto rep = S::run_suite(name, cfg);

  json props = json::array(), failures = json::array(), excl = json::array();
  for (const auto& p : rep.properties) props.push_back(stats_json(p));
  for (const auto& f : rep.failures) {
    json inst = json::object();
    for (const auto& [n, m] : f.instance) inst[n] = parasum::io::to_json(m);
    failures.push_back({{"property", f.property},
                        {"seed", f.seed},
                        {"trial", f.trial},
                        {"residual", f.residual},
                        {"threshold", f.threshold},
                        {"instance", std::move(inst)}});
  }
  for (const auto& e : rep.exclusions) excl.push_back({{"trial", e.trial}, {"reason", e.reason}});
  json out = {{"suite", rep.suite},
              {"generator_version", rep.generator_version},
              {"seed", rep.seed},
              {"trials", rep.trials},
              {"max_dim", rep.max_dim},
              {"tolerances",
               {{"eq_atol", rep.tol.eq_atol},
                {"rank_rtol", rep.tol.rank_rtol},
                {"psd_atol", rep.tol.psd_atol}}},
              {"properties", std::move(props)},
              {"failures", std::move(failures)},
              {"exclusions", std::move(excl)},
              {"wall_seconds", rep.wall_seconds},
              {"ok", rep.ok()}};

  std::string table = "suite " + rep.suite + "  seed " + std::to_string(rep.seed) + "  trials " +
                      std::to_string(rep.trials) + "  " + rep.generator_version + "\n";
  for (const auto& p : rep.properties) {
    char line[256];
    std::snprintf(line, sizeof line, "  %-34s %5zu/%-5zu pass  worst %-12s (<= %s)%s\n",
                  p.name.c_str(), p.passed, p.passed + p.failed,
                  parasum::io::sig6(p.worst_residual).c_str(),
                  parasum::io::sig6(p.threshold).c_str(),
                  p.excluded ? ("  excluded " + std::to_string(p.excluded)).c_str() : "");
    table += line;
  }
  for (const auto& f : rep.failures)
    table += "  FAIL " + f.property + " trial " + std::to_string(f.trial) + " residual " +
             parasum::io::sig6(f.residual) + "\n";
  for (const auto& e : rep.exclusions)
    table += "  excluded trial " + std::to_string(e.trial) + ": " + e.reason + "\n";
  table += "  " + parasum::io::sig6(rep.wall_seconds) + " s  " + (rep.ok() ? "ok" : "FAILED") + "\n";
  emit(o, out, table);
  return rep.ok() ? kOk : kViolated;
}

int cmd_remark51(const Options& o) {
  const auto tol = apply(o, {});
  json runs = json::array();
  std::string table;
  bool ok = true;
  for (std::size_t k : {1, 4}) {
    const auto v = parasum::norm_bound_violation(k, tol);
    ok = ok && v.reproduces(1e-10);
    runs.push_back({{"dim_k", k},
                    {"normA", v.norm_a},
                    {"normB", v.norm_b},
                    {"norm_parallel", v.norm_parallel},
                    {"scalar_bound", v.scalar_bound},
                    {"excess", v.excess()},
                    {"rho_ts_residual", v.rho_ts_residual},
                    {"summable", v.summable},
                    {"reproduces", v.reproduces(1e-10)}});
    table += "dim K = " + std::to_string(k) + ": ||A|| " + parasum::io::sig6(v.norm_a) +
             "  ||B|| " + parasum::io::sig6(v.norm_b) + "  ||A:B|| " +
             parasum::io::sig6(v.norm_parallel) + "  ||A||:||B|| " +
             parasum::io::sig6(v.scalar_bound) + "  excess " + parasum::io::sig6(v.excess()) +
             (v.reproduces(1e-10) ? "  reproduced\n" : "  NOT reproduced\n");
    if (k == 1) table += "A:B\n" + parasum::io::table(v.parallel);
  }
  emit(o, {{"counterexample", "remark51"}, {"runs", std::move(runs)}, {"ok", ok}}, table);
  return ok ? kOk : kViolated;
}

int cmd_prop62(const Options& o, bool self_test) {
  namespace Y = parasum::symbolic;
  if (self_test) {
    const auto r = Y::solve_halfpower(Y::ParityDiagonal::identity(), Y::ParityDiagonal::identity());
    const auto* x = std::get_if<Y::ParityDiagonal>(&r);
    const bool ok = x && x->scalar_part() &&
                    *x->scalar_part() == Y::ExactValue(Y::Rational(1, 2)).sqrt();
    json rep = {{"counterexample", "prop62"}, {"self_test", true}, {"ok", ok}};
    if (x) rep["solution"] = parasum::io::to_json(*x);
    emit(o, rep,
         std::string("A = B = I: ") +
             (x ? "solution X with odd entries " + x->odd_rule.str() + ", even entries " +
                      x->even_rule.str() + "\n"
                : "no solution\n"));
    return ok ? kOk : kViolated;
  }
  const auto a = Y::build_A1(), b = Y::build_B1();
  const auto r = Y::solve_halfpower(a, b);
  const auto* cert = std::get_if<Y::UnsolvabilityCertificate>(&r);
  if (!cert) {
    emit(o, {{"counterexample", "prop62"}, {"ok", false}}, "unexpected solution\n");
    return kViolated;
  }
  const auto brute = Y::brute_force_truncation(a, b, cert->forced_candidate, 512);
  const bool ok = cert->validate() && brute.unique_solution_is_candidate &&
                  brute.min_sup_deviation >= 0.5;
  json rep = {{"counterexample", "prop62"},
              {"certificate", parasum::io::to_json(*cert)},
              {"truncation",
               {{"size", brute.size},
                {"unique_solution_is_candidate", brute.unique_solution_is_candidate},
                {"min_sup_deviation", brute.min_sup_deviation}}},
              {"candidate_truncation_8", parasum::io::to_json(cert->forced_candidate.truncate(8))},
              {"ok", ok}};
  std::string table = "A1 odd entries " + a.odd_rule.str() + ", B1 even entries " +
                      b.even_rule.str() + "\n";
  for (const auto& line : cert->derivation) table += "  " + line + "\n";
  table += "lambda candidates:";
  for (const auto& l : cert->lambda_candidates) table += " " + l.str();
  table += "\ncalkin lower bound " + cert->calkin_lower_bound.str() + "\n";
  table += "truncation N = 512: min over lambda grid of sup deviation " +
           parasum::io::sig6(brute.min_sup_deviation) + "\n";
  table += ok ? "certificate valid\n" : "certificate INVALID\n";
  emit(o, rep, table);
  return ok ? kOk : kViolated;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized inverses and parallel sums of operators"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* c) {
    c->add_option("--tol-eq", o.tol_eq, "matrix equality tolerance")->check(CLI::PositiveNumber);
    c->add_option("--tol-rank", o.tol_rank, "relative singular-value cutoff")
        ->check(CLI::NonNegativeNumber);
    c->add_option("--tol-psd", o.tol_psd, "allowed negative eigenvalue")
        ->check(CLI::PositiveNumber);
    c->add_option("--format", o.format, "json or table")
        ->check(CLI::IsMember({"json", "table"}));
    c->add_option("--out", o.out, "write the report to this path");
  };

  std::string input, path_a, path_b, suite_name, which;
  bool self_test = false;

  auto* pinv = app.add_subcommand("pinv", "Moore-Penrose inverse of a matrix file");
  pinv->add_option("input", input, "matrix file (.json or .csv)")->required();
  add_common(pinv);

  auto* parsum = app.add_subcommand("parsum", "parallel sum A:B of two matrix files");
  parsum->add_option("A", path_a)->required();
  parsum->add_option("B", path_b)->required();
  parsum->add_option("--seed", o.seed, "seed for the sampled {1}-inverses");
  add_common(parsum);

  auto* suite = app.add_subcommand("suite", "run a seeded property sweep");
  suite->add_option("name", suite_name, "suite name")->required();
  suite->add_option("--seed", o.seed, "base seed (default: PARASUM_SEED or 0)");
  suite->add_option("--trials", o.trials, "number of trials")->check(CLI::PositiveNumber);
  suite->add_option("--max-dim", o.max_dim, "largest matrix dimension")
      ->check(CLI::Range(1, 64));
  add_common(suite);

  auto* cex = app.add_subcommand("counterexample", "reproduce a counterexample");
  cex->add_option("which", which, "remark51 or prop62")
      ->required()
      ->check(CLI::IsMember({"remark51", "prop62"}));
  cex->add_flag("--self-test", self_test, "prop62 with A = B = I");
  add_common(cex);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*pinv) return cmd_pinv(o, input);
    if (*parsum) return cmd_parsum(o, path_a, path_b);
    if (*suite) return cmd_suite(o, suite_name);
    if (*cex) return which == "remark51" ? cmd_remark51(o) : cmd_prop62(o, self_test);
  } catch (const parasum::suites::UnknownSuite& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const parasum::io::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const parasum::DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
