#include "permsmc/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "permsmc/analysis.hpp"
#include "permsmc/common.hpp"
#include "permsmc/exact.hpp"
#include "permsmc/rng.hpp"

namespace permsmc {
namespace {

// Full-precision decimal form: shortest string that parses back to the
// identical double would also do, but a fixed %.17g keeps the CSV stable
// across library versions.
std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

SmcMode mode_for(const std::string& method) {
  if (method == "adaptive") return SmcMode::kAdaptive;
  if (method == "ideal") return SmcMode::kIdeal;
  throw ValidationError("unknown method \"" + method + "\"");
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
  out << text;
}

}  // namespace

EstimatorStats summarize_estimates(const std::vector<double>& xs) {
  EstimatorStats s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() >= 2) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.variance = ss / static_cast<double>(xs.size() - 1);
    s.relative_variance = *s.variance / (s.mean * s.mean);
  }
  return s;
}

ExperimentSummary run_experiment(const BinaryMatrix& a, const ExperimentSpec& spec) {
  if (spec.repeats < 1) throw ValidationError("repeats must be >= 1");
  if (spec.method != "sa" && spec.method != "exact") mode_for(spec.method);  // reject early
  if (spec.estimator != "est1" && spec.estimator != "est2" && spec.estimator != "both")
    throw ValidationError("unknown estimator \"" + spec.estimator + "\"");
  const bool want_est2 = spec.estimator != "est1";
  if (want_est2 && spec.method == "sa")
    throw ValidationError("estimator \"" + spec.estimator +
                          "\" is unavailable for method sa (single-chain runs track est1 only)");

  ExperimentSummary summary;
  summary.n = a.n();
  summary.method = spec.method;
  summary.estimator = spec.estimator;
  summary.seed = spec.method == "sa" ? spec.sa.seed : spec.smc.seed;

  const auto t0 = std::chrono::steady_clock::now();

  if (spec.method == "exact") {
    summary.repeats = 0;
    BigInt value = permanent_exact_ryser(a);
    summary.exact_str = value.str();
    summary.exact = static_cast<double>(value);
  } else {
    summary.repeats = spec.repeats;
    summary.repeat_seeds.resize(spec.repeats);
    summary.est1.resize(spec.repeats);
    summary.log_gamma.resize(spec.repeats);
    summary.repeat_wall_s.resize(spec.repeats);
    if (want_est2) summary.est2.resize(spec.repeats);

    // Schedule length is a pure function of (n, step_factor, r_override);
    // probe it once up front so bad inputs fail before any sampling.
    {
      double sf = spec.method == "sa" ? spec.sa.step_factor : spec.smc.step_factor;
      int ro = spec.method == "sa" ? spec.sa.r_override : spec.smc.r_override;
      summary.r = build_schedule(a, sf, ro).r;
    }

    for (int i = 0; i < spec.repeats; ++i)
      summary.repeat_seeds[i] = spec.repeats == 1
                                    ? summary.seed
                                    : substream_key(summary.seed, rng_stage::kRepeat, i, 0);

    const int outer_threads = spec.smc.threads > 1 && spec.repeats > 1 ? spec.smc.threads : 1;
    // Exceptions may not unwind out of the worker region: capture the first
    // one and rethrow after it ends (all repeats share one config, so every
    // repeat raises the same configuration error).
    std::exception_ptr error = nullptr;
#pragma omp parallel for schedule(dynamic) num_threads(outer_threads) if (outer_threads > 1)
    for (int i = 0; i < spec.repeats; ++i) {
      try {
        EstimatorReport rep;
        if (spec.method == "sa") {
          SaConfig sa = spec.sa;
          sa.seed = summary.repeat_seeds[i];
          rep = run_simulated_annealing(a, sa);
        } else {
          SmcConfig cfg = spec.smc;
          cfg.seed = summary.repeat_seeds[i];
          cfg.mode = mode_for(spec.method);
          if (outer_threads > 1) cfg.threads = 1;  // repeats own the workers
          rep = run_smc(a, cfg);
        }
        summary.est1[i] = rep.estimate_est1;
        summary.log_gamma[i] = rep.log_scale_accumulator;
        summary.repeat_wall_s[i] = rep.wall_time_s;
        if (want_est2) summary.est2[i] = *rep.estimate_est2;
        if (spec.repeats == 1 && !spec.out_dir.empty() && spec.method != "exact") {
          write_file(std::filesystem::path(spec.out_dir) / "report.json",
                     report_to_json(rep) + "\n");
        }
      } catch (...) {
#pragma omp critical
        {
          if (!error) error = std::current_exception();
        }
      }
    }
    if (error) std::rethrow_exception(error);

    summary.stats_est1 = summarize_estimates(summary.est1);
    if (want_est2) summary.stats_est2 = summarize_estimates(summary.est2);
  }

  if (summary.n <= 9 && summary.exact_str.empty()) {
    BigInt value = permanent_exact_ryser(a);
    summary.exact_str = value.str();
    summary.exact = static_cast<double>(value);
  }

  summary.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (!spec.out_dir.empty()) {
    std::filesystem::path dir(spec.out_dir);
    std::filesystem::create_directories(dir);
    if (spec.method != "exact") write_file(dir / "estimates.csv", estimates_csv(summary));
    write_file(dir / "summary.json", summary_to_json(summary) + "\n");
  }
  return summary;
}

std::string estimates_csv(const ExperimentSummary& summary) {
  std::string out = "repeat,seed,est1,est2,log_gamma\n";
  for (int i = 0; i < summary.repeats; ++i) {
    out += std::to_string(i);
    out += ',';
    out += std::to_string(summary.repeat_seeds[i]);
    out += ',';
    out += format_double(summary.est1[i]);
    out += ',';
    if (!summary.est2.empty()) out += format_double(summary.est2[i]);
    out += ',';
    out += format_double(summary.log_gamma[i]);
    out += '\n';
  }
  return out;
}

CsvColumns parse_estimates_csv(const std::string& text) {
  CsvColumns cols;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "repeat,seed,est1,est2,log_gamma")
    throw ValidationError("estimates CSV: missing or unrecognized header");
  int expected = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 5)
      throw ValidationError("estimates CSV: expected 5 fields, got " +
                            std::to_string(fields.size()));
    if (std::stoi(fields[0]) != expected)
      throw ValidationError("estimates CSV: repeat column out of order");
    ++expected;
    cols.seeds.push_back(std::stoull(fields[1]));
    cols.est1.push_back(std::stod(fields[2]));
    if (!fields[3].empty()) cols.est2.push_back(std::stod(fields[3]));
    cols.log_gamma.push_back(std::stod(fields[4]));
  }
  return cols;
}

std::string summary_to_json(const ExperimentSummary& summary) {
  using ordered_json = nlohmann::ordered_json;
  ordered_json j;
  j["n"] = summary.n;
  j["method"] = summary.method;
  j["estimator"] = summary.estimator;
  j["repeats"] = summary.repeats;
  j["seed"] = summary.seed;
  j["r"] = summary.r;
  auto stats_block = [](const std::optional<EstimatorStats>& s) -> ordered_json {
    if (!s) return nullptr;
    ordered_json b;
    b["mean"] = s->mean;
    b["variance"] = s->variance ? ordered_json(*s->variance) : ordered_json(nullptr);
    b["relative_variance"] =
        s->relative_variance ? ordered_json(*s->relative_variance) : ordered_json(nullptr);
    return b;
  };
  j["est1"] = stats_block(summary.stats_est1);
  j["est2"] = stats_block(summary.stats_est2);
  j["exact"] = summary.exact ? ordered_json(*summary.exact) : ordered_json(nullptr);
  if (!summary.exact_str.empty()) j["exact_str"] = summary.exact_str;
  j["wall_time_s"] = summary.wall_time_s;
  return j.dump(2);
}

}  // namespace permsmc
