#pragma once

// Experiment driver: generate elites, polish with every strategy, compute
// the solved / gap-closed metrics, and emit run records plus aggregate
// CSVs (mean gap closed, gap histograms, elite-phase convergence
// profiles). Aggregates are pure folds over the run records so they can
// be recomputed exactly from the persisted JSON lines.

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "curvepolish/elites.hpp"
#include "curvepolish/funcs.hpp"
#include "curvepolish/io.hpp"
#include "curvepolish/metrics.hpp"
#include "curvepolish/polish.hpp"

namespace curvepolish {

struct BenchConfig {
  std::vector<std::string> functions = test_function_names();
  std::vector<std::size_t> dimensions = {2, 4, 8, 16};
  int seeds = 5;  // replications per (function, dimension)
  std::uint64_t base_seed = 1;
  int elite_count = 5;
  int fval_max = 290;
  int grid_resolution = 3201;
  std::vector<PolishStrategy> strategies = {PolishStrategy::Multipoint, PolishStrategy::Propeller,
                                            PolishStrategy::Straight, PolishStrategy::BaseSolver};
  std::filesystem::path output_dir = "bench_out";
  bool write_profiles = true;

  void validate() const {
    if (functions.empty() || dimensions.empty() || strategies.empty()) {
      throw std::invalid_argument("BenchConfig: empty function/dimension/strategy list");
    }
    if (seeds < 1) throw std::invalid_argument("BenchConfig: seeds must be >= 1");
    if (elite_count < 1) throw std::invalid_argument("BenchConfig: elite_count must be >= 1");
    if (fval_max < 1) throw std::invalid_argument("BenchConfig: fval_max must be >= 1");
  }
};

struct BenchSummary {
  std::vector<RunRecord> records;
  int failed_runs = 0;
};

struct GapAggregate {
  int unsolved_instances = 0;
  double mean_gap_closed = 0.0;
};

// Mean gap closed per (strategy, dimension) over instances not solved
// before polishing. Failed runs contribute nothing.
inline std::map<std::pair<std::string, std::size_t>, GapAggregate> mean_gap_closed_by_strategy(
    const std::vector<RunRecord>& records) {
  std::map<std::pair<std::string, std::size_t>, std::pair<int, double>> acc;
  for (const auto& r : records) {
    if (!r.error.empty() || !r.gap_closed_pct) continue;
    auto& [count, sum] = acc[{r.strategy, r.dimension}];
    ++count;
    sum += *r.gap_closed_pct;
  }
  std::map<std::pair<std::string, std::size_t>, GapAggregate> out;
  for (const auto& [key, cs] : acc) {
    out[key] = GapAggregate{cs.first, cs.second / cs.first};
  }
  return out;
}

// Histogram of gap closed: 10 bins of width 10% over [0, 100]; a gap of
// exactly 100 lands in the top bin.
inline std::map<std::tuple<std::string, std::size_t, int>, int> gap_histogram(
    const std::vector<RunRecord>& records) {
  std::map<std::tuple<std::string, std::size_t, int>, int> bins;
  for (const auto& r : records) {
    if (!r.error.empty() || !r.gap_closed_pct) continue;
    int bin = static_cast<int>(*r.gap_closed_pct / 10.0);
    bin = std::clamp(bin, 0, 9);
    ++bins[{r.strategy, r.dimension, bin}];
  }
  return bins;
}

namespace bench_detail {

inline std::uint64_t instance_seed(std::uint64_t base, std::size_t func_idx, std::size_t dim,
                                   int rep) {
  std::uint64_t s = rng_detail::mix_seed(base, static_cast<std::uint64_t>(func_idx));
  s = rng_detail::mix_seed(s, static_cast<std::uint64_t>(dim));
  return rng_detail::mix_seed(s, static_cast<std::uint64_t>(rep));
}

}  // namespace bench_detail

// One full protocol run for a single (function, dimension, seed) instance:
// elite generation followed by each requested polishing strategy against
// the same elite set. Evaluations are measured through the function's own
// counter rather than trusting the strategies' bookkeeping.
inline std::vector<RunRecord> run_instance(const std::string& function, std::size_t dimension,
                                           std::uint64_t seed,
                                           const std::vector<PolishStrategy>& strategies,
                                           int elite_count, int fval_max, int grid_resolution,
                                           EliteGenResult* elite_result_out = nullptr) {
  const TestFunction f = get_test_function(function, dimension);

  EliteGenConfig gen;
  gen.target_count = elite_count;
  gen.grid_resolution = grid_resolution;
  gen.seed = seed;

  const std::uint64_t evals0 = f.evaluations();
  const EliteGenResult gen_result = generate_elite_solutions(f, gen);
  const std::uint64_t elite_evals = f.evaluations() - evals0;
  if (elite_result_out) *elite_result_out = gen_result;

  const double f_before = gen_result.elites.best().value;
  const bool solved_before = is_solved(f_before, f.f_true());

  std::vector<RunRecord> records;
  for (std::size_t s = 0; s < strategies.size(); ++s) {
    RunRecord rec;
    rec.function = function;
    rec.dimension = dimension;
    rec.seed = seed;
    rec.strategy = to_string(strategies[s]);
    rec.f_true = f.f_true();
    rec.f_before = f_before;
    rec.solved_before = solved_before;
    rec.elite_evaluations = elite_evals;
    try {
      PolishConfig cfg;
      cfg.strategy = strategies[s];
      cfg.fval_max = fval_max;
      cfg.seed = rng_detail::mix_seed(seed, s);
      const std::uint64_t before = f.evaluations();
      const PolishOutcome outcome = polish(gen_result.elites, cfg, f);
      rec.polish_evaluations = f.evaluations() - before;
      rec.f_after = outcome.f_after;
      rec.solved_after = is_solved(rec.f_after, rec.f_true);
      if (!solved_before) {
        double gap = gap_closed(rec.f_true, rec.f_before, rec.f_after);
        if (gap < -1e-9 || gap > 100.0 + 1e-9) {
          throw std::logic_error("gap closed outside [0,100]: " + std::to_string(gap));
        }
        rec.gap_closed_pct = std::clamp(gap, 0.0, 100.0);
      }
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
    records.push_back(std::move(rec));
  }
  return records;
}

inline BenchSummary run_benchmark(const BenchConfig& config) {
  config.validate();
  std::filesystem::create_directories(config.output_dir);

  BenchSummary summary;
  std::ofstream records_out(config.output_dir / "records.jsonl");
  std::ofstream profiles_out;
  if (config.write_profiles) {
    profiles_out.open(config.output_dir / "convergence_profiles.csv");
    profiles_out << "function,dimension,seed,evaluation,best_so_far\n";
  }

  for (std::size_t fi = 0; fi < config.functions.size(); ++fi) {
    for (std::size_t dim : config.dimensions) {
      for (int rep = 0; rep < config.seeds; ++rep) {
        const std::uint64_t seed = bench_detail::instance_seed(config.base_seed, fi, dim, rep);
        std::vector<RunRecord> records;
        EliteGenResult gen_result;
        try {
          records = run_instance(config.functions[fi], dim, seed, config.strategies,
                                 config.elite_count, config.fval_max, config.grid_resolution,
                                 &gen_result);
        } catch (const std::exception& e) {
          RunRecord rec;
          rec.function = config.functions[fi];
          rec.dimension = dim;
          rec.seed = seed;
          rec.strategy = "elite_phase";
          rec.error = e.what();
          records.push_back(std::move(rec));
        }
        for (const auto& rec : records) {
          records_out << to_json(rec).dump() << "\n";
          if (!rec.error.empty()) ++summary.failed_runs;
          summary.records.push_back(rec);
        }
        if (config.write_profiles && !gen_result.convergence_trace.empty()) {
          for (std::size_t k = 0; k < gen_result.convergence_trace.size(); ++k) {
            profiles_out << config.functions[fi] << "," << dim << "," << seed << "," << (k + 1)
                         << "," << format_double(gen_result.convergence_trace[k]) << "\n";
          }
        }
      }
    }
  }

  {
    std::ofstream out(config.output_dir / "mean_gap_closed.csv");
    out << "strategy,dimension,unsolved_instances,mean_gap_closed\n";
    for (const auto& [key, agg] : mean_gap_closed_by_strategy(summary.records)) {
      out << key.first << "," << key.second << "," << agg.unsolved_instances << ","
          << format_double(agg.mean_gap_closed) << "\n";
    }
  }
  {
    std::ofstream out(config.output_dir / "gap_histogram.csv");
    out << "strategy,dimension,bin_low,bin_high,count\n";
    for (const auto& [key, count] : gap_histogram(summary.records)) {
      const auto& [strategy, dim, bin] = key;
      out << strategy << "," << dim << "," << bin * 10 << "," << (bin + 1) * 10 << "," << count
          << "\n";
    }
  }
  return summary;
}

}  // namespace curvepolish
