#pragma once

// Pin-schedule construction for the polishing curves: the multipoint curve
// alternates from the best elite out to each other elite and back, the
// propeller curve loops from one elite along +/- unit steps in every
// coordinate direction, and straight segments through elite pairs are
// extended until they touch the box boundary.

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "curvepolish/qp_curve.hpp"

namespace curvepolish {

struct EliteSolution {
  Point point;
  double value = 0.0;
};

// Elite solutions sorted ascending by objective value (stable on ties).
struct EliteSet {
  std::vector<EliteSolution> solutions;

  std::size_t size() const { return solutions.size(); }
  const EliteSolution& best() const { return solutions.front(); }

  void validate(const Box& box) const {
    if (solutions.empty()) throw std::invalid_argument("EliteSet: empty");
    for (std::size_t i = 0; i < solutions.size(); ++i) {
      if (!box.contains(solutions[i].point)) {
        throw std::invalid_argument("EliteSet: solution " + std::to_string(i) +
                                    " lies outside the box");
      }
      if (i > 0 && solutions[i].value < solutions[i - 1].value) {
        throw std::invalid_argument("EliteSet: not sorted ascending by value");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (solutions[i].point == solutions[j].point) {
          throw std::invalid_argument("EliteSet: duplicate points at " + std::to_string(j) +
                                      " and " + std::to_string(i));
        }
      }
    }
  }
};

// Curve through all elites: best, e2, best, e3, best, ..., eK, best.
// Grid size is 2(K-1)*n_between + 1; the best elite's single evaluation is
// reused at K pin indices.
inline CurveGrid generate_multipoint_curve(const EliteSet& elites, int n_between, const Box& box,
                                           const QpSettings& settings = {}) {
  elites.validate(box);
  if (elites.size() < 2) {
    throw std::invalid_argument("generate_multipoint_curve: need at least 2 elite solutions");
  }
  if (n_between < 2) throw std::invalid_argument("generate_multipoint_curve: n_between must be >= 2");

  const std::size_t K = elites.size();
  std::vector<Point> pin_points;
  std::vector<double> pin_values;
  pin_points.reserve(2 * (K - 1) + 1);
  pin_points.push_back(elites.best().point);
  pin_values.push_back(elites.best().value);
  for (std::size_t k = 1; k < K; ++k) {
    pin_points.push_back(elites.solutions[k].point);
    pin_values.push_back(elites.solutions[k].value);
    pin_points.push_back(elites.best().point);
    pin_values.push_back(elites.best().value);
  }

  const int horizon = 2 * static_cast<int>(K - 1) * n_between;
  PinSchedule schedule = PinSchedule::equally_spaced(pin_points, horizon);
  CurveGrid grid = solve_curve_qp(schedule, box, settings);
  for (std::size_t k = 0; k < schedule.pins.size(); ++k) {
    grid.known_values[schedule.pins[k].time] = pin_values[k];
  }
  return grid;
}

struct PropellerReport {
  std::vector<std::size_t> skipped_dimensions;
};

// Propeller curve around a single elite: for each dimension, out along a
// positive step, back, out along a negative step, back. Steps are clipped
// to stay inside the box; an arm whose clipped step is below min_step_frac
// of the box width is skipped. Only the elite value is seeded; the arm tips
// are left for the walker to evaluate.
inline CurveGrid generate_propeller_curve(const Point& elite, double elite_value, int n_between,
                                          const Box& box, const QpSettings& settings = {},
                                          double step = 1.0,
                                          PropellerReport* report = nullptr,
                                          double min_step_frac = 1e-6) {
  box.validate();
  if (!box.contains(elite)) {
    throw std::invalid_argument("generate_propeller_curve: elite lies outside the box");
  }
  if (n_between < 2) throw std::invalid_argument("generate_propeller_curve: n_between must be >= 2");
  if (!(step > 0)) throw std::invalid_argument("generate_propeller_curve: step must be positive");

  const std::size_t dim = box.dimension();
  std::vector<Point> pin_points;
  pin_points.push_back(elite);
  for (std::size_t k = 0; k < dim; ++k) {
    const double min_step = min_step_frac * box.width(k);
    for (const double sign : {+1.0, -1.0}) {
      const double room = sign > 0 ? box.upper[k] - elite[k] : elite[k] - box.lower[k];
      const double arm = std::min(step, room);
      if (arm < min_step) {
        if (report) report->skipped_dimensions.push_back(k);
        continue;
      }
      Point tip = elite;
      tip[k] += sign * arm;
      pin_points.push_back(tip);
      pin_points.push_back(elite);
    }
  }
  if (pin_points.size() < 3) {
    throw std::invalid_argument("generate_propeller_curve: all arms degenerate");
  }

  const int horizon = static_cast<int>(pin_points.size() - 1) * n_between;
  PinSchedule schedule = PinSchedule::equally_spaced(pin_points, horizon);
  CurveGrid grid = solve_curve_qp(schedule, box, settings);
  for (const Pin& pin : schedule.pins) {
    if (pin.point == elite) grid.known_values[pin.time] = elite_value;
  }
  return grid;
}

// A straight segment through two interior points, extended to the box
// boundary on both sides. Values at the interior points are attached by
// the caller when known (NaN = unknown).
struct SegmentSpec {
  Point endpoint_a;
  Point endpoint_b;
  Point interior_a;
  Point interior_b;
  double value_a = std::numeric_limits<double>::quiet_NaN();
  double value_b = std::numeric_limits<double>::quiet_NaN();
};

inline SegmentSpec extend_segment_to_box(const Point& a, const Point& b, const Box& box) {
  box.validate();
  if (a == b) throw std::invalid_argument("extend_segment_to_box: points coincide");
  if (!box.contains(a) || !box.contains(b)) {
    throw std::invalid_argument("extend_segment_to_box: points must lie inside the box");
  }

  // Intersect {a + t (b-a)} with each slab; the segment [0,1] is feasible,
  // so the intersection [t_min, t_max] always contains it.
  double t_min = -std::numeric_limits<double>::infinity();
  double t_max = std::numeric_limits<double>::infinity();
  std::size_t lim_min = 0, lim_max = 0;
  for (std::size_t d = 0; d < box.dimension(); ++d) {
    const double dir = b[d] - a[d];
    if (dir == 0.0) continue;
    double t_lo = (box.lower[d] - a[d]) / dir;
    double t_hi = (box.upper[d] - a[d]) / dir;
    if (t_lo > t_hi) std::swap(t_lo, t_hi);
    if (t_lo > t_min) { t_min = t_lo; lim_min = d; }
    if (t_hi < t_max) { t_max = t_hi; lim_max = d; }
  }

  SegmentSpec seg;
  seg.interior_a = a;
  seg.interior_b = b;
  seg.endpoint_a.resize(box.dimension());
  seg.endpoint_b.resize(box.dimension());
  for (std::size_t d = 0; d < box.dimension(); ++d) {
    seg.endpoint_a[d] = std::clamp(a[d] + t_min * (b[d] - a[d]), box.lower[d], box.upper[d]);
    seg.endpoint_b[d] = std::clamp(a[d] + t_max * (b[d] - a[d]), box.lower[d], box.upper[d]);
  }
  // Snap the limiting coordinate exactly onto the face it touched.
  seg.endpoint_a[lim_min] =
      std::abs(seg.endpoint_a[lim_min] - box.lower[lim_min]) <
              std::abs(seg.endpoint_a[lim_min] - box.upper[lim_min])
          ? box.lower[lim_min]
          : box.upper[lim_min];
  seg.endpoint_b[lim_max] =
      std::abs(seg.endpoint_b[lim_max] - box.lower[lim_max]) <
              std::abs(seg.endpoint_b[lim_max] - box.upper[lim_max])
          ? box.lower[lim_max]
          : box.upper[lim_max];
  return seg;
}

// Uniform grid on an extended segment. The two interior points are seeded
// at their nearest grid index when that index is within half a grid step.
inline CurveGrid discretize_segment(const SegmentSpec& seg, int n_points) {
  if (n_points < 3) throw std::invalid_argument("discretize_segment: need at least 3 points");
  const std::size_t dim = seg.endpoint_a.size();
  CurveGrid grid;
  grid.points.assign(static_cast<std::size_t>(n_points), Point(dim, 0.0));
  for (int i = 0; i < n_points; ++i) {
    const double w = static_cast<double>(i) / static_cast<double>(n_points - 1);
    for (std::size_t d = 0; d < dim; ++d) {
      grid.points[static_cast<std::size_t>(i)][d] =
          seg.endpoint_a[d] + w * (seg.endpoint_b[d] - seg.endpoint_a[d]);
    }
  }

  double seg_len2 = 0.0;
  for (std::size_t d = 0; d < dim; ++d) {
    const double diff = seg.endpoint_b[d] - seg.endpoint_a[d];
    seg_len2 += diff * diff;
  }
  const double spacing = std::sqrt(seg_len2) / static_cast<double>(n_points - 1);

  const auto seed = [&](const Point& p, double value) {
    if (std::isnan(value)) return;
    // Nearest index by projection onto the segment direction.
    double t = 0.0;
    if (seg_len2 > 0.0) {
      for (std::size_t d = 0; d < dim; ++d) {
        t += (p[d] - seg.endpoint_a[d]) * (seg.endpoint_b[d] - seg.endpoint_a[d]);
      }
      t /= seg_len2;
    }
    int idx = static_cast<int>(std::lround(t * (n_points - 1)));
    idx = std::clamp(idx, 0, n_points - 1);
    double dist2 = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      const double diff = p[d] - grid.points[static_cast<std::size_t>(idx)][d];
      dist2 += diff * diff;
    }
    if (std::sqrt(dist2) <= 0.5 * spacing * (1.0 + 1e-12)) {
      grid.known_values[idx] = value;
      grid.pin_indices.insert(idx);
    }
  };
  seed(seg.interior_a, seg.value_a);
  seed(seg.interior_b, seg.value_b);
  return grid;
}

}  // namespace curvepolish
