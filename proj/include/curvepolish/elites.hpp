#pragma once

// Elite-solution generation: repeated base-solver runs from random starts,
// keeping only solutions that are pairwise farther apart than a tolerance
// tied to the LineWalker grid resolution (so no two elites collapse onto
// the same grid index). PSO is the default base solver; a deterministic
// coordinate pattern search is provided as an alternative.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "curvepolish/curve_gen.hpp"
#include "curvepolish/funcs.hpp"
#include "curvepolish/qp_curve.hpp"

namespace curvepolish {

namespace rng_detail {

// splitmix64; used both to mix per-start seeds and as the uniform source,
// so runs are reproducible bit-for-bit independent of the standard
// library's distribution implementations.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {
    // Warm up so nearby seeds decorrelate.
    splitmix64(state_);
    splitmix64(state_);
  }

  double uniform01() { return static_cast<double>(splitmix64(state_) >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  Point uniform_point(const Box& box) {
    Point p(box.dimension());
    for (std::size_t d = 0; d < box.dimension(); ++d) p[d] = uniform(box.lower[d], box.upper[d]);
    return p;
  }

 private:
  std::uint64_t state_;
};

inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t s = master ^ (0xA0761D6478BD642FULL * (stream + 1));
  return splitmix64(s);
}

}  // namespace rng_detail

struct PsoConfig {
  int particles = 20;
  int max_iterations = 50;
  double inertia = 0.729;
  double cognitive = 1.49445;
  double social = 1.49445;
  std::uint64_t seed = 0;

  void validate() const {
    if (particles < 2) throw std::invalid_argument("PsoConfig: need at least 2 particles");
    if (max_iterations < 0) throw std::invalid_argument("PsoConfig: max_iterations negative");
    if (inertia < 0 || cognitive < 0 || social < 0) {
      throw std::invalid_argument("PsoConfig: coefficients must be nonnegative");
    }
  }
};

struct SolverRunResult {
  Point best_point;
  double best_value = std::numeric_limits<double>::infinity();
  std::vector<EliteSolution> final_swarm;  // sorted ascending; empty for pattern search
  std::vector<double> best_trace;          // best-so-far after each fresh evaluation
};

// Global-best PSO with velocity clamping at 20% of the box width and
// reflection at the bounds. Initial particles may carry known values
// (NaN = evaluate); total fresh evaluations are (max_iterations + 1) *
// particles minus the supplied values.
inline SolverRunResult pso_minimize(const TestFunction& f, const PsoConfig& config,
                                    const std::vector<EliteSolution>& initial = {}) {
  config.validate();
  const Box& box = f.box();
  const std::size_t dim = box.dimension();
  const int np = config.particles;
  if (static_cast<int>(initial.size()) > np) {
    throw std::invalid_argument("pso_minimize: more initial particles than swarm slots");
  }
  for (const auto& p : initial) {
    if (!box.contains(p.point)) {
      throw std::invalid_argument("pso_minimize: initial particle outside the box");
    }
  }

  rng_detail::Rng rng(config.seed);
  SolverRunResult result;

  std::vector<Point> x(static_cast<std::size_t>(np));
  std::vector<Point> v(static_cast<std::size_t>(np), Point(dim, 0.0));
  std::vector<double> fx(static_cast<std::size_t>(np));
  std::vector<Point> pbest(static_cast<std::size_t>(np));
  std::vector<double> pbest_val(static_cast<std::size_t>(np));

  const auto track = [&](double value) {
    if (value < result.best_value) result.best_value = value;
    result.best_trace.push_back(result.best_value);
  };

  for (int i = 0; i < np; ++i) {
    const std::size_t ui = static_cast<std::size_t>(i);
    if (ui < initial.size()) {
      x[ui] = initial[ui].point;
      if (std::isnan(initial[ui].value)) {
        fx[ui] = f.evaluate(x[ui]);
        track(fx[ui]);
      } else {
        fx[ui] = initial[ui].value;
        if (fx[ui] < result.best_value) result.best_value = fx[ui];
      }
    } else {
      x[ui] = rng.uniform_point(box);
      fx[ui] = f.evaluate(x[ui]);
      track(fx[ui]);
    }
    pbest[ui] = x[ui];
    pbest_val[ui] = fx[ui];
  }

  Point gbest = pbest[0];
  double gbest_val = pbest_val[0];
  for (int i = 1; i < np; ++i) {
    if (pbest_val[static_cast<std::size_t>(i)] < gbest_val) {
      gbest_val = pbest_val[static_cast<std::size_t>(i)];
      gbest = pbest[static_cast<std::size_t>(i)];
    }
  }

  for (int iter = 0; iter < config.max_iterations; ++iter) {
    for (int i = 0; i < np; ++i) {
      const std::size_t ui = static_cast<std::size_t>(i);
      for (std::size_t d = 0; d < dim; ++d) {
        const double r1 = rng.uniform01();
        const double r2 = rng.uniform01();
        double vel = config.inertia * v[ui][d] +
                     config.cognitive * r1 * (pbest[ui][d] - x[ui][d]) +
                     config.social * r2 * (gbest[d] - x[ui][d]);
        const double vmax = 0.2 * box.width(d);
        vel = std::clamp(vel, -vmax, vmax);
        double pos = x[ui][d] + vel;
        if (pos < box.lower[d]) {
          pos = box.lower[d] + (box.lower[d] - pos);
          vel = -vel;
        } else if (pos > box.upper[d]) {
          pos = box.upper[d] - (pos - box.upper[d]);
          vel = -vel;
        }
        x[ui][d] = std::clamp(pos, box.lower[d], box.upper[d]);
        v[ui][d] = vel;
      }
      fx[ui] = f.evaluate(x[ui]);
      track(fx[ui]);
      if (fx[ui] < pbest_val[ui]) {
        pbest_val[ui] = fx[ui];
        pbest[ui] = x[ui];
      }
      if (fx[ui] < gbest_val) {
        gbest_val = fx[ui];
        gbest = x[ui];
      }
    }
  }

  result.best_point = gbest;
  result.best_value = gbest_val;
  result.final_swarm.reserve(static_cast<std::size_t>(np));
  for (int i = 0; i < np; ++i) {
    result.final_swarm.push_back({x[static_cast<std::size_t>(i)], fx[static_cast<std::size_t>(i)]});
  }
  std::stable_sort(result.final_swarm.begin(), result.final_swarm.end(),
                   [](const EliteSolution& a, const EliteSolution& b) { return a.value < b.value; });
  return result;
}

// Deterministic compass search: scan +/- steps along every coordinate,
// move to the best improvement, halve the steps when none improves.
inline SolverRunResult pattern_search_minimize(const TestFunction& f, const Point& start,
                                               int budget) {
  const Box& box = f.box();
  const std::size_t dim = box.dimension();
  if (!box.contains(start)) {
    throw std::invalid_argument("pattern_search_minimize: start outside the box");
  }
  if (budget < 1) throw std::invalid_argument("pattern_search_minimize: budget must be >= 1");

  SolverRunResult result;
  std::vector<double> step(dim);
  for (std::size_t d = 0; d < dim; ++d) step[d] = 0.25 * box.width(d);

  Point x = start;
  double fx = f.evaluate(x);
  result.best_value = fx;
  result.best_trace.push_back(fx);
  int used = 1;

  while (used < budget) {
    Point best_cand;
    double best_val = fx;
    for (std::size_t d = 0; d < dim && used < budget; ++d) {
      for (const double sign : {+1.0, -1.0}) {
        if (used >= budget) break;
        Point cand = x;
        cand[d] = std::clamp(cand[d] + sign * step[d], box.lower[d], box.upper[d]);
        if (cand[d] == x[d]) continue;
        const double val = f.evaluate(cand);
        ++used;
        result.best_trace.push_back(std::min(result.best_trace.back(), val));
        if (val < best_val) {
          best_val = val;
          best_cand = cand;
        }
      }
    }
    if (best_val < fx) {
      x = std::move(best_cand);
      fx = best_val;
    } else {
      for (double& s : step) s *= 0.5;
    }
  }

  result.best_point = x;
  result.best_value = fx;
  return result;
}

enum class BaseSolver { Pso, PatternSearch };

struct EliteGenConfig {
  int target_count = 5;     // K
  int per_start_budget = 0;  // 0: 50 * D
  int grid_resolution = 3201;  // N used in the distance tolerance
  std::uint64_t seed = 0;
  int max_starts = 0;  // 0: 20 * K
  BaseSolver solver = BaseSolver::Pso;

  void validate() const {
    if (target_count < 1) throw std::invalid_argument("EliteGenConfig: K must be >= 1");
    if (per_start_budget < 0) throw std::invalid_argument("EliteGenConfig: budget negative");
    if (grid_resolution < 1) throw std::invalid_argument("EliteGenConfig: grid resolution < 1");
  }
};

struct EliteGenResult {
  EliteSet elites;
  int starts_used = 0;
  int rejected = 0;
  std::uint64_t evaluations_accepted = 0;  // spent by the accepted runs
  std::uint64_t evaluations_total = 0;     // including rejected runs
  std::vector<double> convergence_trace;   // cumulative best-so-far per evaluation
};

class EliteGenerationError : public std::runtime_error {
 public:
  EliteGenerationError(std::string what, EliteSet partial)
      : std::runtime_error(std::move(what)), partial_(std::move(partial)) {}
  const EliteSet& partial() const { return partial_; }

 private:
  EliteSet partial_;
};

inline double euclidean_distance(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const double diff = a[d] - b[d];
    s += diff * diff;
  }
  return std::sqrt(s);
}

// Distance tolerance from the grid resolution and the largest coordinate
// magnitude among previously accepted elites. A zero magnitude falls back
// to width / N to keep the grid-collision intent without dividing by zero.
inline double elite_distance_tolerance(const Box& box, int grid_resolution, double max_abs_coord) {
  const double width = box.width(0);
  if (max_abs_coord > 0.0) return width / (static_cast<double>(grid_resolution) * max_abs_coord);
  return width / static_cast<double>(grid_resolution);
}

inline EliteGenResult generate_elite_solutions(const TestFunction& f,
                                               const EliteGenConfig& config) {
  config.validate();
  const Box& box = f.box();
  const int K = config.target_count;
  const int budget = config.per_start_budget > 0
                         ? config.per_start_budget
                         : 50 * static_cast<int>(f.dimension());
  const int max_starts = config.max_starts > 0 ? config.max_starts : 20 * K;

  EliteGenResult result;
  std::vector<EliteSolution> accepted;
  double phase_best = std::numeric_limits<double>::infinity();

  int start = 0;
  while (static_cast<int>(accepted.size()) < K) {
    if (start >= max_starts) {
      EliteSet partial;
      partial.solutions = accepted;
      std::stable_sort(partial.solutions.begin(), partial.solutions.end(),
                       [](const EliteSolution& a, const EliteSolution& b) {
                         return a.value < b.value;
                       });
      throw EliteGenerationError("generate_elite_solutions: only " +
                                     std::to_string(accepted.size()) + " of " + std::to_string(K) +
                                     " elites found within " + std::to_string(max_starts) +
                                     " starts",
                                 std::move(partial));
    }
    const std::uint64_t run_seed = rng_detail::mix_seed(config.seed, static_cast<std::uint64_t>(start));
    ++start;

    SolverRunResult run;
    if (config.solver == BaseSolver::Pso) {
      PsoConfig pso;
      pso.particles = 20;
      pso.max_iterations = std::max(0, budget / pso.particles - 1);
      pso.seed = run_seed;
      run = pso_minimize(f, pso);
    } else {
      rng_detail::Rng rng(run_seed);
      run = pattern_search_minimize(f, rng.uniform_point(box), budget);
    }
    result.evaluations_total += run.best_trace.size();
    for (double v : run.best_trace) {
      phase_best = std::min(phase_best, v);
      result.convergence_trace.push_back(phase_best);
    }

    // Distance rule: the candidate must be farther than tol from every
    // accepted elite, even when its objective value is better.
    double max_abs = 0.0;
    for (const auto& e : accepted) {
      for (double c : e.point) max_abs = std::max(max_abs, std::abs(c));
    }
    bool ok = true;
    if (!accepted.empty()) {
      const double tol = elite_distance_tolerance(box, config.grid_resolution, max_abs);
      for (const auto& e : accepted) {
        if (euclidean_distance(run.best_point, e.point) <= tol) {
          ok = false;
          break;
        }
      }
    }
    if (ok) {
      accepted.push_back({run.best_point, run.best_value});
      result.evaluations_accepted += run.best_trace.size();
    } else {
      ++result.rejected;
    }
  }

  result.starts_used = start;
  result.elites.solutions = std::move(accepted);
  std::stable_sort(result.elites.solutions.begin(), result.elites.solutions.end(),
                   [](const EliteSolution& a, const EliteSolution& b) { return a.value < b.value; });
  return result;
}

}  // namespace curvepolish
