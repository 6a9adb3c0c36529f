#pragma once

// Budget-limited global search over a 1D index grid. A shape-preserving
// piecewise-cubic surrogate is fit through the sampled indices; non-tabu
// surrogate extrema are sampled next, falling back to the midpoint of the
// largest unexplored interval. Search stops at the evaluation budget.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "curvepolish/qp_curve.hpp"

namespace curvepolish {

// Fritsch-Carlson monotone piecewise-cubic interpolant: exact at the
// samples, C1 in between, no overshoot extrema on monotone stretches.
class Surrogate {
 public:
  Surrogate(std::vector<double> xs, std::vector<double> ys)
      : xs_(std::move(xs)), ys_(std::move(ys)) {
    const std::size_t n = xs_.size();
    if (n < 2) throw std::invalid_argument("Surrogate: need at least 2 samples");
    slopes_.assign(n, 0.0);
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      h[i] = xs_[i + 1] - xs_[i];
      delta[i] = (ys_[i + 1] - ys_[i]) / h[i];
    }
    if (n == 2) {
      slopes_[0] = slopes_[1] = delta[0];
      return;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (delta[i - 1] * delta[i] <= 0.0) {
        slopes_[i] = 0.0;
      } else {
        const double w1 = 2.0 * h[i] + h[i - 1];
        const double w2 = h[i] + 2.0 * h[i - 1];
        slopes_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
      }
    }
    slopes_[0] = edge_slope(h[0], h[1], delta[0], delta[1]);
    slopes_[n - 1] = edge_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  }

  double first_x() const { return xs_.front(); }
  double last_x() const { return xs_.back(); }
  std::size_t sample_count() const { return xs_.size(); }

  double operator()(double x) const {
    if (x <= xs_.front()) return hermite(0, x);
    if (x >= xs_.back()) return hermite(xs_.size() - 2, x);
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    const std::size_t seg = static_cast<std::size_t>(it - xs_.begin()) - 1;
    return hermite(seg, x);
  }

 private:
  static double edge_slope(double h0, double h1, double d0, double d1) {
    // Three-point one-sided estimate, limited to preserve shape.
    double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (m * d0 <= 0.0) return 0.0;
    if (d0 * d1 < 0.0 && std::abs(m) > 3.0 * std::abs(d0)) return 3.0 * d0;
    return m;
  }

  double hermite(std::size_t seg, double x) const {
    const double h = xs_[seg + 1] - xs_[seg];
    const double t = (x - xs_[seg]) / h;
    const double y0 = ys_[seg], y1 = ys_[seg + 1];
    const double m0 = slopes_[seg] * h, m1 = slopes_[seg + 1] * h;
    const double t2 = t * t, t3 = t2 * t;
    return (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * m0 +
           (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * m1;
  }

  std::vector<double> xs_;
  std::vector<double> ys_;
  std::vector<double> slopes_;
};

struct WalkOptions {
  int tabu_radius_divisor = 200;  // radius r = max(1, N / divisor)
  int tabu_tenure = 5;            // proposals a tabu mark survives
  int min_initial_samples = 3;    // below this, endpoints + midpoint are evaluated
  bool final_evaluation = true;   // spend the last evaluation on the surrogate minimizer
};

struct WalkState {
  int grid_size = 0;
  std::map<int, double> sampled;
  std::map<int, int> tabu;  // index -> remaining tenure
  int budget_remaining = 0;
  int best_index = -1;
  double best_value = std::numeric_limits<double>::infinity();

  explicit WalkState(int n = 0, int budget = 0) : grid_size(n), budget_remaining(budget) {}

  bool is_sampled(int i) const { return sampled.count(i) != 0; }

  void record(int index, double value) {
    sampled.emplace(index, value);
    if (value < best_value) {
      best_value = value;
      best_index = index;
    }
  }

  bool is_tabu(int index, int radius) const {
    const auto lo = tabu.lower_bound(index - radius);
    return lo != tabu.end() && lo->first <= index + radius;
  }

  void age_tabu() {
    for (auto it = tabu.begin(); it != tabu.end();) {
      if (--it->second <= 0) it = tabu.erase(it);
      else ++it;
    }
  }

  void add_tabu_around(int index, int radius, int tenure) {
    for (int i = std::max(0, index - radius); i <= std::min(grid_size - 1, index + radius); ++i) {
      int& t = tabu[i];
      t = std::max(t, tenure);
    }
  }
};

inline Surrogate fit_surrogate(const WalkState& state) {
  if (state.sampled.size() < 2) {
    throw std::invalid_argument("fit_surrogate: need at least 2 sampled indices");
  }
  std::vector<double> xs, ys;
  xs.reserve(state.sampled.size());
  ys.reserve(state.sampled.size());
  for (const auto& [i, v] : state.sampled) {
    xs.push_back(static_cast<double>(i));
    ys.push_back(v);
  }
  return Surrogate(std::move(xs), std::move(ys));
}

enum class ProposalReason { Seed, Extremum, Gap, Final };

inline const char* to_string(ProposalReason r) {
  switch (r) {
    case ProposalReason::Seed: return "seed";
    case ProposalReason::Extremum: return "extremum";
    case ProposalReason::Gap: return "gap";
    case ProposalReason::Final: return "final";
  }
  return "?";
}

struct Proposal {
  int index = -1;
  ProposalReason reason = ProposalReason::Gap;
};

namespace detail {

struct ExtremumCandidate {
  int index;
  double value;
  bool is_minimum;
};

// Discrete local extrema of the surrogate over the sampled span, boundary
// indices included.
inline std::vector<ExtremumCandidate> surrogate_extrema(const WalkState& state,
                                                        const Surrogate& s) {
  const int lo = static_cast<int>(std::lround(s.first_x()));
  const int hi = static_cast<int>(std::lround(s.last_x()));
  std::vector<ExtremumCandidate> out;
  if (hi - lo < 1) return out;
  std::vector<double> vals(static_cast<std::size_t>(hi - lo + 1));
  for (int i = lo; i <= hi; ++i) vals[static_cast<std::size_t>(i - lo)] = s(static_cast<double>(i));
  const auto at = [&](int i) { return vals[static_cast<std::size_t>(i - lo)]; };
  for (int i = lo; i <= hi; ++i) {
    const bool has_l = i > lo, has_r = i < hi;
    const double v = at(i);
    const bool min_ok = (!has_l || v < at(i - 1)) && (!has_r || v <= at(i + 1));
    const bool max_ok = (!has_l || v > at(i - 1)) && (!has_r || v >= at(i + 1));
    if (min_ok && (has_l || has_r) && !(min_ok && max_ok)) {
      out.push_back({i, v, true});
    } else if (max_ok && (has_l || has_r) && !(min_ok && max_ok)) {
      out.push_back({i, v, false});
    }
  }
  (void)state;
  return out;
}

// Vertex of the parabola through three sampled points around a sampled
// extremum; used to jump to the interpolated extremum instead of creeping
// one index at a time.
inline std::optional<int> parabolic_vertex(const WalkState& state, int center, bool is_minimum) {
  std::vector<std::pair<double, double>> pts;
  const auto it = state.sampled.find(center);
  if (it == state.sampled.end()) return std::nullopt;
  auto left = it, right = it;
  pts.emplace_back(static_cast<double>(it->first), it->second);
  for (int k = 0; k < 2 && pts.size() < 3; ++k) {
    if (left != state.sampled.begin()) {
      --left;
      pts.emplace_back(static_cast<double>(left->first), left->second);
    }
    if (pts.size() < 3 && std::next(right) != state.sampled.end()) {
      ++right;
      pts.emplace_back(static_cast<double>(right->first), right->second);
    }
  }
  if (pts.size() < 3) return std::nullopt;
  std::sort(pts.begin(), pts.end());
  const double x1 = pts[0].first, y1 = pts[0].second;
  const double x2 = pts[1].first, y2 = pts[1].second;
  const double x3 = pts[2].first, y3 = pts[2].second;
  const double c1 = (y2 - y1) / (x2 - x1);
  const double c2 = ((y3 - y2) / (x3 - x2) - c1) / (x3 - x1);
  if (is_minimum ? !(c2 > 0.0) : !(c2 < 0.0)) return std::nullopt;
  double vx = 0.5 * (x1 + x2) - 0.5 * c1 / c2;
  vx = std::clamp(vx, x1, x3);
  const int idx = static_cast<int>(std::lround(vx));
  if (idx < 0 || idx >= state.grid_size) return std::nullopt;
  return idx;
}

// Nearest unsampled index to start, stepping outward (lower side first).
inline std::optional<int> nearest_unsampled(const WalkState& state, int start) {
  if (!state.is_sampled(start)) return start;
  for (int k = 1; k < state.grid_size; ++k) {
    const int lo = start - k, hi = start + k;
    if (lo >= 0 && !state.is_sampled(lo)) return lo;
    if (hi < state.grid_size && !state.is_sampled(hi)) return hi;
  }
  return std::nullopt;
}

// Largest run of consecutive unsampled indices (boundary runs included);
// ties resolved toward the earliest run.
inline std::optional<int> largest_gap_midpoint(const WalkState& state) {
  int best_len = 0, best_lo = -1, best_hi = -1;
  int run_lo = 0;
  const auto close_run = [&](int run_hi) {
    const int len = run_hi - run_lo + 1;
    if (len > best_len) {
      best_len = len;
      best_lo = run_lo;
      best_hi = run_hi;
    }
  };
  int prev = -1;
  for (const auto& [i, v] : state.sampled) {
    (void)v;
    if (i > prev + 1) {
      run_lo = prev + 1;
      close_run(i - 1);
    }
    prev = i;
  }
  if (prev < state.grid_size - 1) {
    run_lo = prev + 1;
    close_run(state.grid_size - 1);
  }
  if (best_len <= 0) return std::nullopt;
  return best_lo + (best_hi - best_lo) / 2;
}

}  // namespace detail

// Next index to sample: the best-ranked non-tabu surrogate extremum
// (minima by ascending value, then maxima by descending value), or the
// midpoint of the largest unexplored interval when no extremum qualifies.
inline std::optional<Proposal> propose_next(const WalkState& state, const Surrogate& surrogate,
                                            const WalkOptions& options = {}) {
  if (static_cast<int>(state.sampled.size()) >= state.grid_size) return std::nullopt;

  auto extrema = detail::surrogate_extrema(state, surrogate);
  std::stable_sort(extrema.begin(), extrema.end(),
                   [](const detail::ExtremumCandidate& a, const detail::ExtremumCandidate& b) {
                     if (a.is_minimum != b.is_minimum) return a.is_minimum;
                     if (a.is_minimum) return a.value != b.value ? a.value < b.value : a.index < b.index;
                     return a.value != b.value ? a.value > b.value : a.index < b.index;
                   });

  const int radius = std::max(1, state.grid_size / std::max(1, options.tabu_radius_divisor));
  for (const auto& cand : extrema) {
    if (state.is_tabu(cand.index, radius)) continue;
    std::optional<int> target;
    if (!state.is_sampled(cand.index)) {
      target = cand.index;
    } else {
      target = detail::parabolic_vertex(state, cand.index, cand.is_minimum);
      if (target && state.is_sampled(*target)) target = detail::nearest_unsampled(state, *target);
      if (!target) target = detail::nearest_unsampled(state, cand.index);
    }
    if (target && !state.is_sampled(*target)) {
      return Proposal{*target, ProposalReason::Extremum};
    }
  }

  if (const auto gap = detail::largest_gap_midpoint(state)) {
    return Proposal{*gap, ProposalReason::Gap};
  }
  return std::nullopt;
}

struct WalkLogEntry {
  int step = 0;
  int index = -1;
  double value = 0.0;
  ProposalReason reason = ProposalReason::Seed;
};

struct WalkResult {
  int best_index = -1;
  Point best_point;
  double best_value = std::numeric_limits<double>::infinity();
  int fresh_evaluations = 0;
  bool aborted = false;
  std::vector<WalkLogEntry> log;
};

// Search the curve grid with a fresh-evaluation budget. Seeded known
// values are consumed at zero cost (and propagated across pin indices
// holding the same point); exactly min(budget, unsampled) fresh
// evaluations are performed unless the objective fails.
inline WalkResult walk(const CurveGrid& grid,
                       const std::function<double(const Point&)>& objective, int budget,
                       const WalkOptions& options = {}) {
  const int n = grid.size();
  if (n < 3) throw std::invalid_argument("walk: grid needs at least 3 indices");
  if (budget < 0) throw std::invalid_argument("walk: budget must be nonnegative");

  WalkState state(n, budget);
  WalkResult result;
  int step = 0;

  const auto log_sample = [&](int index, double value, ProposalReason reason) {
    result.log.push_back(WalkLogEntry{step++, index, value, reason});
  };

  for (const auto& [index, value] : grid.known_values) {
    if (state.is_sampled(index)) continue;
    state.record(index, value);
    log_sample(index, value, ProposalReason::Seed);
    // Propagate to every pin index that holds the same point.
    for (int other : grid.pin_indices) {
      if (other == index || state.is_sampled(other)) continue;
      if (grid.points[static_cast<std::size_t>(other)] ==
          grid.points[static_cast<std::size_t>(index)]) {
        state.record(other, value);
        log_sample(other, value, ProposalReason::Seed);
      }
    }
  }

  const int radius = std::max(1, n / std::max(1, options.tabu_radius_divisor));
  const auto evaluate_at = [&](int index, ProposalReason reason) -> bool {
    double value;
    try {
      value = objective(grid.points[static_cast<std::size_t>(index)]);
    } catch (const std::exception&) {
      result.aborted = true;
      return false;
    }
    --state.budget_remaining;
    ++result.fresh_evaluations;
    state.record(index, value);
    log_sample(index, value, reason);
    return true;
  };

  // A surrogate needs support: endpoints bound the domain, midpoint splits it.
  if (static_cast<int>(state.sampled.size()) < options.min_initial_samples) {
    for (int index : {0, n - 1, n / 2}) {
      if (state.budget_remaining <= 0 || result.aborted) break;
      if (state.is_sampled(index)) continue;
      evaluate_at(index, ProposalReason::Gap);
    }
  }

  while (state.budget_remaining > 0 && !result.aborted &&
         static_cast<int>(state.sampled.size()) < n) {
    std::optional<Proposal> proposal;
    if (state.sampled.size() >= 2) {
      const Surrogate surrogate = fit_surrogate(state);
      if (options.final_evaluation && state.budget_remaining == 1) {
        // LineWalker may otherwise never evaluate its predicted minimizer.
        const int lo = static_cast<int>(std::lround(surrogate.first_x()));
        const int hi = static_cast<int>(std::lround(surrogate.last_x()));
        int arg = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int i = lo; i <= hi; ++i) {
          const double v = surrogate(static_cast<double>(i));
          if (v < best) {
            best = v;
            arg = i;
          }
        }
        if (arg >= 0 && !state.is_sampled(arg)) proposal = Proposal{arg, ProposalReason::Final};
      }
      if (!proposal) proposal = propose_next(state, surrogate, options);
    } else if (const auto gap = detail::largest_gap_midpoint(state)) {
      proposal = Proposal{*gap, ProposalReason::Gap};
    }
    if (!proposal) break;
    if (!evaluate_at(proposal->index, proposal->reason)) break;
    state.age_tabu();
    state.add_tabu_around(proposal->index, radius, options.tabu_tenure);
  }

  result.best_index = state.best_index;
  result.best_value = state.best_value;
  if (state.best_index >= 0) {
    result.best_point = grid.points[static_cast<std::size_t>(state.best_index)];
  }
  return result;
}

}  // namespace curvepolish
