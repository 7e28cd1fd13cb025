// Command-line front end.
//
//   permsmc estimate --matrix FILE [--method adaptive|ideal|sa|exact] ...
//   permsmc diagnose --matrix FILE (--lemma1 | --gap | --constants) ...
//   permsmc schedule --matrix FILE [--step-factor F]
//
// Exit codes: 0 success, 2 validation/usage error, 3 size-guard violation.
#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "permsmc/analysis.hpp"
#include "permsmc/annealing.hpp"
#include "permsmc/binary_matrix.hpp"
#include "permsmc/common.hpp"
#include "permsmc/experiment.hpp"
#include "permsmc/kernel.hpp"
#include "permsmc/schedule.hpp"
#include "permsmc/smc.hpp"
#include "permsmc/weights.hpp"

namespace {

using nlohmann::ordered_json;
using namespace permsmc;

struct EstimateArgs {
  std::string matrix_file;
  std::string method = "adaptive";
  std::int64_t particles = 1000;
  double ess_threshold = -1.0;
  double delta = 1e-10;
  int sweeps = 0;
  std::uint64_t seed = 1;
  std::string estimator = "est1";
  int repeats = 1;
  std::string out_dir;
  std::string format = "json";
  double step_factor = 0.0;
  int r_override = -1;
  int threads = 1;
  std::int64_t burn_in = -1;
  std::string sa_weights = "ideal";
};

int run_estimate(const EstimateArgs& args) {
  if (args.format == "csv" && args.method == "exact")
    throw ValidationError("--format csv: method exact produces no per-repeat table");

  BinaryMatrix a = load_matrix(args.matrix_file);

  ExperimentSpec spec;
  spec.method = args.method;
  spec.repeats = args.repeats;
  spec.estimator = args.estimator;
  spec.out_dir = args.out_dir;
  spec.smc.particles = args.particles;
  spec.smc.ess_threshold = args.ess_threshold;
  spec.smc.delta = args.delta;
  spec.smc.sweeps = args.sweeps;
  spec.smc.seed = args.seed;
  spec.smc.step_factor = args.step_factor;
  spec.smc.r_override = args.r_override;
  spec.smc.threads = args.threads;
  spec.sa.samples_per_level = args.particles;
  spec.sa.burn_in = args.burn_in;
  spec.sa.sweeps = args.sweeps;
  spec.sa.seed = args.seed;
  spec.sa.step_factor = args.step_factor;
  spec.sa.r_override = args.r_override;
  spec.sa.delta = args.delta;
  if (args.sa_weights == "ideal") {
    spec.sa.weights = SaWeightSource::kIdeal;
  } else if (args.sa_weights == "adaptive") {
    spec.sa.weights = SaWeightSource::kAdaptiveFromSamples;
  } else {
    throw ValidationError("unknown --sa-weights \"" + args.sa_weights + "\"");
  }

  ExperimentSummary summary = run_experiment(a, spec);
  if (args.format == "csv") {
    std::cout << estimates_csv(summary);
  } else {
    std::cout << summary_to_json(summary) << "\n";
  }
  return 0;
}

struct DiagnoseArgs {
  std::string matrix_file;
  bool lemma1 = false;
  bool gap = false;
  bool constants = false;
  double c_poincare = 1.0;  // illustrative default; the theory gives no value
  std::int64_t particles = 1000;
  double step_factor = 0.0;
  int r_override = -1;
  bool lazy = false;
};

int run_diagnose(const DiagnoseArgs& args) {
  BinaryMatrix a = load_matrix(args.matrix_file);
  ordered_json j;
  j["n"] = a.n();

  if (args.lemma1) {
    Lemma1Report rep = lemma1_ratio_check(a, args.step_factor, args.r_override);
    j["check"] = "per_step_ratio_bounds";
    j["r"] = rep.r;
    j["ratio_bound"] = rep.ratio_bound;
    j["lambda_bound"] = rep.lambda_bound;
    j["sup_g_bound"] = rep.sup_g_bound;
    ordered_json rows = ordered_json::array();
    for (const Lemma1Row& row : rep.rows) {
      rows.push_back({{"p", row.p},
                      {"lambda", row.lambda},
                      {"sup_g", row.sup_g},
                      {"ratio", row.ratio},
                      {"ok", row.ratio_ok && row.lambda_ok && row.sup_g_ok}});
    }
    j["steps"] = rows;
    j["all_ok"] = rep.all_ok;
  } else if (args.gap) {
    ActivitySchedule s = build_schedule(a, args.step_factor, args.r_override);
    std::vector<WeightTable> tables = ideal_weight_tables(compute_class_stats(a), s);
    j["check"] = "spectral_gap";
    j["r"] = s.r;
    j["lazy"] = args.lazy;
    ordered_json gaps = ordered_json::array();
    double min_gap = 1.0;
    for (int p = 0; p <= s.r; ++p) {
      KernelContext ctx{&s, &tables[p], p, 1, args.lazy};
      double g = spectral_gap(ctx);
      gaps.push_back(g);
      if (g < min_gap) min_gap = g;
    }
    j["gaps"] = gaps;
    j["min_gap"] = min_gap;
  } else {
    ActivitySchedule s = build_schedule(a, args.step_factor, args.r_override);
    ComplexityConstants c = complexity_constants(a.n(), args.c_poincare);
    j["check"] = "complexity_constants";
    j["r"] = s.r;
    j["c_poincare"] = args.c_poincare;
    j["c_poincare_note"] = "illustrative input, not a derived quantity";
    j["tau"] = c.tau;
    j["rho"] = c.rho;
    j["condition"] = c.condition;
    if (c.condition) {
      j["cbar"] = c.cbar;
      j["min_particles"] = theorem2_min_particles(c, s.r);
      double bound = theorem2_bound(c, s.r, static_cast<double>(args.particles));
      j["particles"] = args.particles;
      j["relative_variance_bound"] = std::isnan(bound) ? ordered_json(nullptr)
                                                       : ordered_json(bound);
    } else {
      j["cbar"] = nullptr;
      j["min_particles"] = nullptr;
      j["relative_variance_bound"] = nullptr;
    }
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Permanent estimation for binary matrices by sequential Monte "
               "Carlo over perfect and near-perfect matchings"};
  app.require_subcommand(1);

  EstimateArgs est;
  CLI::App* cmd_est = app.add_subcommand(
      "estimate", "Run an estimator (or the exact count) and report estimates");
  cmd_est->add_option("--matrix", est.matrix_file, "matrix file (header n, then n rows)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_est->add_option("--method", est.method, "adaptive | ideal | sa | exact")
      ->check(CLI::IsMember({"adaptive", "ideal", "sa", "exact"}));
  cmd_est->add_option("--particles", est.particles, "population size N (sa: samples per level)")
      ->check(CLI::PositiveNumber);
  cmd_est->add_option("--ess-threshold", est.ess_threshold,
                      "resampling trigger T in [1, N]; 1 resamples every step; "
                      "negative selects N/2");
  cmd_est->add_option("--delta", est.delta, "regularizer in the adaptive weight update")
      ->check(CLI::PositiveNumber);
  cmd_est->add_option("--sweeps", est.sweeps, "kernel proposals per mutation (0: n^2)");
  cmd_est->add_option("--seed", est.seed, "master seed");
  cmd_est->add_option("--estimator", est.estimator, "est1 | est2 | both")
      ->check(CLI::IsMember({"est1", "est2", "both"}));
  cmd_est->add_option("--repeats", est.repeats, "independent repeats")
      ->check(CLI::PositiveNumber);
  cmd_est->add_option("--out", est.out_dir,
                      "directory for estimates.csv + summary.json (+ report.json)");
  cmd_est->add_option("--format", est.format, "stdout format: json | csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd_est->add_option("--step-factor", est.step_factor,
                      "cooling factor in (0,1); 0 selects 2^(-1/(2n))");
  cmd_est->add_option("--r-override", est.r_override, "force the number of cooling steps");
  cmd_est->add_option("--threads", est.threads, "worker threads across repeats")
      ->check(CLI::PositiveNumber);
  cmd_est->add_option("--burn-in", est.burn_in, "sa: proposals before sampling (<0: 10 n^2)");
  cmd_est->add_option("--sa-weights", est.sa_weights, "sa table source: ideal | adaptive")
      ->check(CLI::IsMember({"ideal", "adaptive"}));

  DiagnoseArgs diag;
  CLI::App* cmd_diag = app.add_subcommand(
      "diagnose", "Exact small-n checks: ratio bounds, spectral gaps, constants");
  cmd_diag->add_option("--matrix", diag.matrix_file, "matrix file")
      ->required()
      ->check(CLI::ExistingFile);
  CLI::Option* opt_lemma1 =
      cmd_diag->add_flag("--lemma1", diag.lemma1, "per-step ratio/bound report (n <= 5)");
  CLI::Option* opt_gap =
      cmd_diag->add_flag("--gap", diag.gap, "spectral gap of every step's kernel (n <= 4)");
  CLI::Option* opt_constants = cmd_diag->add_flag(
      "--constants", diag.constants, "convergence-rate constants and variance bound");
  opt_lemma1->excludes(opt_gap)->excludes(opt_constants);
  opt_gap->excludes(opt_constants);
  cmd_diag->add_option("--c-poincare", diag.c_poincare,
                       "Poincare constant for --constants (illustrative; default 1.0)")
      ->check(CLI::PositiveNumber);
  cmd_diag->add_option("--particles", diag.particles,
                       "N at which --constants evaluates the variance bound")
      ->check(CLI::PositiveNumber);
  cmd_diag->add_option("--step-factor", diag.step_factor, "cooling factor in (0,1); 0: default");
  cmd_diag->add_option("--r-override", diag.r_override, "force the number of cooling steps");
  cmd_diag->add_flag("--lazy", diag.lazy, "diagnose the lazy (hold w.p. 1/2) kernel");

  std::string sched_matrix_file;
  double sched_step_factor = 0.0;
  CLI::App* cmd_sched =
      app.add_subcommand("schedule", "Print the cooling schedule for a matrix");
  cmd_sched->add_option("--matrix", sched_matrix_file, "matrix file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_sched->add_option("--step-factor", sched_step_factor,
                        "cooling factor in (0,1); 0 selects 2^(-1/(2n))");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);  // prints help or the parse error
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_est->parsed()) return run_estimate(est);
    if (cmd_diag->parsed()) {
      if (!diag.lemma1 && !diag.gap && !diag.constants)
        throw ValidationError("diagnose: pick one of --lemma1, --gap, --constants");
      return run_diagnose(diag);
    }
    BinaryMatrix a = load_matrix(sched_matrix_file);
    std::cout << schedule_to_json(build_schedule(a, sched_step_factor)) << "\n";
    return 0;
  } catch (const GuardError& e) {
    std::cerr << "error (size guard): " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
