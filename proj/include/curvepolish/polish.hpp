#pragma once

// The four solution-polishing strategies under a shared fresh-evaluation
// budget: LineWalker searches along the multipoint curve, the propeller
// curve, or the extended straight segments through every elite pair; the
// base-solver strategy re-runs PSO over the full D-dimensional box seeded
// with the elites.

#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "curvepolish/curve_gen.hpp"
#include "curvepolish/elites.hpp"
#include "curvepolish/funcs.hpp"
#include "curvepolish/line_walker.hpp"

namespace curvepolish {

enum class PolishStrategy { Multipoint, Propeller, Straight, BaseSolver };

inline const char* to_string(PolishStrategy s) {
  switch (s) {
    case PolishStrategy::Multipoint: return "multipoint";
    case PolishStrategy::Propeller: return "propeller";
    case PolishStrategy::Straight: return "straight";
    case PolishStrategy::BaseSolver: return "base_solver";
  }
  return "?";
}

inline PolishStrategy polish_strategy_from_string(const std::string& s) {
  if (s == "multipoint") return PolishStrategy::Multipoint;
  if (s == "propeller") return PolishStrategy::Propeller;
  if (s == "straight") return PolishStrategy::Straight;
  if (s == "base_solver") return PolishStrategy::BaseSolver;
  throw std::invalid_argument("unknown polish strategy '" + s + "'");
}

struct PolishConfig {
  PolishStrategy strategy = PolishStrategy::Multipoint;
  int fval_max = 290;          // total fresh-evaluation budget
  int n_between = 0;           // 0: choose so the curve grid has ~3201 indices
  int per_segment_budget = 30; // straight linking: evaluations per segment, 2 covered by seeds
  int segment_points = 1001;   // straight linking: grid points per extended segment
  std::uint64_t seed = 0;
  QpSettings qp;
  WalkOptions walk;

  void validate() const {
    if (fval_max < 1) throw std::invalid_argument("PolishConfig: fval_max must be >= 1");
    if (n_between != 0 && n_between < 2) {
      throw std::invalid_argument("PolishConfig: n_between must be >= 2");
    }
    if (per_segment_budget < 3) {
      throw std::invalid_argument("PolishConfig: per_segment_budget must be >= 3");
    }
    if (segment_points < 3) throw std::invalid_argument("PolishConfig: segment_points must be >= 3");
  }
};

struct PolishOutcome {
  PolishStrategy strategy = PolishStrategy::Multipoint;
  double f_before = std::numeric_limits<double>::infinity();
  double f_after = std::numeric_limits<double>::infinity();
  Point best_point;
  int evaluations_used = 0;
  std::shared_ptr<CurveGrid> curve;   // the searched curve (curve strategies only)
  std::vector<WalkLogEntry> walk_log; // all walks, steps renumbered sequentially
};

namespace polish_detail {

inline int auto_n_between(PolishStrategy strategy, std::size_t elite_count, std::size_t dimension) {
  const double target = 3200.0;
  double segments = 1.0;
  if (strategy == PolishStrategy::Multipoint) {
    segments = 2.0 * static_cast<double>(elite_count - 1);
  } else {
    segments = 4.0 * static_cast<double>(dimension);
  }
  return std::max(2, static_cast<int>(std::lround(target / segments)));
}

inline void append_log(PolishOutcome& outcome, const std::vector<WalkLogEntry>& log) {
  for (WalkLogEntry e : log) {
    e.step = static_cast<int>(outcome.walk_log.size());
    outcome.walk_log.push_back(e);
  }
}

inline void finish(PolishOutcome& outcome, const EliteSet& elites, double walked_best,
                   const Point& walked_point) {
  outcome.f_before = elites.best().value;
  if (walked_best < outcome.f_before) {
    outcome.f_after = walked_best;
    outcome.best_point = walked_point;
  } else {
    outcome.f_after = outcome.f_before;
    outcome.best_point = elites.best().point;
  }
}

}  // namespace polish_detail

// Multipoint / propeller polishing: build the curve, seed the known elite
// values along it, then walk with the full budget.
inline PolishOutcome curve_polisher(const EliteSet& elites, const PolishConfig& config,
                                    const TestFunction& f) {
  config.validate();
  if (config.strategy != PolishStrategy::Multipoint && config.strategy != PolishStrategy::Propeller) {
    throw std::invalid_argument("curve_polisher: strategy must be multipoint or propeller");
  }
  elites.validate(f.box());
  if (config.strategy == PolishStrategy::Multipoint && elites.size() < 2) {
    throw std::invalid_argument("curve_polisher: multipoint needs at least 2 elites");
  }

  const std::uint64_t evals_at_entry = f.evaluations();
  PolishOutcome outcome;
  outcome.strategy = config.strategy;

  const int n_between = config.n_between > 0
                            ? config.n_between
                            : polish_detail::auto_n_between(config.strategy, elites.size(),
                                                            f.dimension());
  CurveGrid grid;
  if (config.strategy == PolishStrategy::Multipoint) {
    grid = generate_multipoint_curve(elites, n_between, f.box(), config.qp);
  } else {
    grid = generate_propeller_curve(elites.best().point, elites.best().value, n_between, f.box(),
                                    config.qp);
  }
  outcome.curve = std::make_shared<CurveGrid>(grid);

  const WalkResult walked =
      walk(grid, [&f](const Point& p) { return f.evaluate(p); }, config.fval_max, config.walk);
  polish_detail::append_log(outcome, walked.log);
  polish_detail::finish(outcome, elites, walked.best_value, walked.best_point);
  outcome.evaluations_used = static_cast<int>(f.evaluations() - evals_at_entry);
  return outcome;
}

// Straight linking: an independent LineWalker run on the extended segment
// through each unordered elite pair. Each segment gets per_segment_budget
// evaluations, two of which are covered by the seeded elite values and one
// of which is the final evaluation of the predicted minimizer.
inline PolishOutcome straight_link_polisher(const EliteSet& elites, const PolishConfig& config,
                                            const TestFunction& f) {
  config.validate();
  elites.validate(f.box());
  if (elites.size() < 2) {
    throw std::invalid_argument("straight_link_polisher: need at least 2 elites");
  }

  const std::uint64_t evals_at_entry = f.evaluations();
  PolishOutcome outcome;
  outcome.strategy = PolishStrategy::Straight;

  double best_val = std::numeric_limits<double>::infinity();
  Point best_point;
  int remaining = config.fval_max;
  const int per_segment_fresh = config.per_segment_budget - 2 + 1;

  for (std::size_t i = 0; i < elites.size() && remaining > 0; ++i) {
    for (std::size_t j = i + 1; j < elites.size() && remaining > 0; ++j) {
      SegmentSpec seg =
          extend_segment_to_box(elites.solutions[i].point, elites.solutions[j].point, f.box());
      seg.value_a = elites.solutions[i].value;
      seg.value_b = elites.solutions[j].value;
      const CurveGrid grid = discretize_segment(seg, config.segment_points);

      const int budget = std::min(per_segment_fresh, remaining);
      const WalkResult walked =
          walk(grid, [&f](const Point& p) { return f.evaluate(p); }, budget, config.walk);
      remaining -= walked.fresh_evaluations;
      polish_detail::append_log(outcome, walked.log);
      if (walked.best_value < best_val) {
        best_val = walked.best_value;
        best_point = walked.best_point;
      }
    }
  }

  polish_detail::finish(outcome, elites, best_val, best_point);
  outcome.evaluations_used = static_cast<int>(f.evaluations() - evals_at_entry);
  return outcome;
}

// D-dimensional re-solve: PSO seeded with the elites (values included, so
// no evaluations are wasted re-measuring them) plus random particles, with
// the iteration cap chosen to respect the budget.
inline PolishOutcome base_solver_polisher(const EliteSet& elites, const PolishConfig& config,
                                          const TestFunction& f) {
  config.validate();
  elites.validate(f.box());

  const std::uint64_t evals_at_entry = f.evaluations();
  PolishOutcome outcome;
  outcome.strategy = PolishStrategy::BaseSolver;

  PsoConfig pso;
  pso.particles = 20;
  pso.max_iterations = std::max(0, config.fval_max / pso.particles - 1);
  pso.seed = config.seed;

  std::vector<EliteSolution> initial;
  for (std::size_t i = 0; i < elites.size() && static_cast<int>(i) < pso.particles; ++i) {
    initial.push_back(elites.solutions[i]);
  }
  const SolverRunResult run = pso_minimize(f, pso, initial);

  polish_detail::finish(outcome, elites, run.best_value, run.best_point);
  outcome.evaluations_used = static_cast<int>(f.evaluations() - evals_at_entry);
  return outcome;
}

inline PolishOutcome polish(const EliteSet& elites, const PolishConfig& config,
                            const TestFunction& f) {
  switch (config.strategy) {
    case PolishStrategy::Multipoint:
    case PolishStrategy::Propeller:
      return curve_polisher(elites, config, f);
    case PolishStrategy::Straight:
      return straight_link_polisher(elites, config, f);
    case PolishStrategy::BaseSolver:
      return base_solver_polisher(elites, config, f);
  }
  throw std::logic_error("polish: unhandled strategy");
}

}  // namespace curvepolish
