// Repeat harness: runs an estimation method R times on split seeds and
// aggregates the estimates. With an output directory it writes
// estimates.csv (one row per repeat, full double precision) and summary.json,
// plus the single-run report.json when repeats == 1. Every byte is
// reproducible for a fixed seed and spec — across runs and worker counts --
// except wall-clock fields.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "permsmc/annealing.hpp"
#include "permsmc/binary_matrix.hpp"
#include "permsmc/smc.hpp"

namespace permsmc {

struct ExperimentSpec {
  std::string method = "adaptive";  // adaptive | ideal | sa | exact
  int repeats = 1;
  std::string estimator = "est1";   // est1 | est2 | both
  SmcConfig smc;                    // engine parameters (seed, N, T, ...)
  SaConfig sa;                      // annealing parameters when method == sa
  std::string out_dir;              // empty -> no files written
};

struct EstimatorStats {
  double mean = 0.0;
  std::optional<double> variance;           // absent at repeats == 1
  std::optional<double> relative_variance;  // absent at repeats == 1
};

struct ExperimentSummary {
  int n = 0;
  std::string method;
  std::string estimator;
  int repeats = 0;
  std::uint64_t seed = 0;
  int r = 0;

  std::vector<std::uint64_t> repeat_seeds;
  std::vector<double> est1;       // per repeat (empty for method == exact)
  std::vector<double> est2;       // empty unless requested and available
  std::vector<double> log_gamma;  // per repeat

  std::optional<EstimatorStats> stats_est1;
  std::optional<EstimatorStats> stats_est2;

  std::optional<double> exact;  // Ryser value when n <= 9 (or method == exact)
  std::string exact_str;        // same value as a decimal string (may exceed 2^53)

  double wall_time_s = 0.0;            // total across repeats
  std::vector<double> repeat_wall_s;   // per repeat
};

ExperimentSummary run_experiment(const BinaryMatrix& a, const ExperimentSpec& spec);

// Serializations (also what run_experiment writes when out_dir is set).
std::string summary_to_json(const ExperimentSummary& summary);
std::string estimates_csv(const ExperimentSummary& summary);

// Re-ingestion of estimates.csv for the round-trip identity: the statistics
// recomputed from the parsed columns match the JSON summary bit-for-bit.
struct CsvColumns {
  std::vector<std::uint64_t> seeds;
  std::vector<double> est1;
  std::vector<double> est2;  // NaN-free: empty when the column is blank
  std::vector<double> log_gamma;
};
CsvColumns parse_estimates_csv(const std::string& text);

// Shared statistics path so recomputation is bit-identical.
EstimatorStats summarize_estimates(const std::vector<double>& xs);

}  // namespace permsmc
