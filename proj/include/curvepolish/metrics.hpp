#pragma once

// Benchmark metrics: the standard "solved" criterion (within 1% or 0.01 of
// the global optimum, whichever is larger) and the optimality gap closed
// by polishing. Gap closed is undefined for instances already solved
// before polishing.

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace curvepolish {

inline bool is_solved(double f_eval_best, double f_true) {
  return std::abs(f_eval_best - f_true) <= 0.01 * std::max(1.0, std::abs(f_true));
}

// Percentage of the best possible improvement achieved by polishing.
inline double gap_closed(double f_true, double f_before, double f_after) {
  if (!(f_before > f_true)) {
    throw std::invalid_argument("gap_closed: undefined unless f_before > f_true");
  }
  return (1.0 - (f_true - f_after) / (f_true - f_before)) * 100.0;
}

struct RunRecord {
  std::string function;
  std::size_t dimension = 0;
  std::uint64_t seed = 0;
  std::string strategy;
  double f_true = 0.0;
  double f_before = 0.0;
  double f_after = 0.0;
  bool solved_before = false;
  bool solved_after = false;
  std::optional<double> gap_closed_pct;  // defined iff !solved_before
  std::uint64_t elite_evaluations = 0;
  std::uint64_t polish_evaluations = 0;
  std::string error;  // nonempty when the run failed
};

}  // namespace curvepolish
