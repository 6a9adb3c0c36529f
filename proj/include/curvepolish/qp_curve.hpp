#pragma once

// Smooth-curve generation through waypoints ("pins") by solving a
// box-constrained QP: minimize total squared acceleration of a point mass
// that must visit pin p_k at grid time T_k, plus a small penalty on the
// curve's total length. Velocity/acceleration variables are eliminated by
// substitution, leaving one pentadiagonal QP per coordinate.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace curvepolish {

using Point = std::vector<double>;

struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t dimension() const { return lower.size(); }

  double width(std::size_t d) const { return upper[d] - lower[d]; }

  bool contains(const Point& x) const {
    if (x.size() != lower.size()) return false;
    for (std::size_t d = 0; d < x.size(); ++d) {
      if (!(x[d] >= lower[d] && x[d] <= upper[d])) return false;
    }
    return true;
  }

  Point clamp(Point x) const {
    for (std::size_t d = 0; d < x.size(); ++d) {
      x[d] = std::clamp(x[d], lower[d], upper[d]);
    }
    return x;
  }

  void validate() const {
    if (lower.empty() || lower.size() != upper.size()) {
      throw std::invalid_argument("Box: bound vectors empty or mismatched");
    }
    for (std::size_t d = 0; d < lower.size(); ++d) {
      if (!std::isfinite(lower[d]) || !std::isfinite(upper[d])) {
        throw std::invalid_argument("Box: non-finite bound in dimension " + std::to_string(d));
      }
      if (!(lower[d] < upper[d])) {
        throw std::invalid_argument("Box: lower >= upper in dimension " + std::to_string(d));
      }
    }
  }

  static Box cube(std::size_t dim, double lo, double hi) {
    return Box{std::vector<double>(dim, lo), std::vector<double>(dim, hi)};
  }
};

struct Pin {
  Point point;
  int time = 0;  // grid index in {0..T}
};

class InfeasiblePinError : public std::invalid_argument {
 public:
  InfeasiblePinError(std::size_t pin_index, const std::string& what)
      : std::invalid_argument(what), pin_index_(pin_index) {}
  std::size_t pin_index() const { return pin_index_; }

 private:
  std::size_t pin_index_;
};

class QpConvergenceError : public std::runtime_error {
 public:
  QpConvergenceError(double residual, const std::string& what)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

struct PinSchedule {
  std::vector<Pin> pins;
  int horizon = 0;  // T; the grid has T+1 points

  // Pin times must be strictly increasing, starting at 0 and ending at T.
  void validate(const Box& box) const {
    if (pins.size() < 2) throw std::invalid_argument("PinSchedule: need at least 2 pins");
    if (horizon <= 0) throw std::invalid_argument("PinSchedule: horizon must be positive");
    if (pins.front().time != 0) throw std::invalid_argument("PinSchedule: first pin time must be 0");
    if (pins.back().time != horizon) {
      throw std::invalid_argument("PinSchedule: last pin time must equal the horizon");
    }
    for (std::size_t k = 0; k < pins.size(); ++k) {
      if (k > 0 && pins[k].time <= pins[k - 1].time) {
        throw std::invalid_argument("PinSchedule: pin times must be strictly increasing (pin " +
                                    std::to_string(k) + ")");
      }
      if (pins[k].point.size() != box.dimension()) {
        throw InfeasiblePinError(k, "PinSchedule: pin " + std::to_string(k) +
                                        " dimension mismatch");
      }
      if (!box.contains(pins[k].point)) {
        throw InfeasiblePinError(k, "PinSchedule: pin " + std::to_string(k) +
                                        " lies outside the box");
      }
    }
  }

  // Assign equally spaced times to an ordered pin list over horizon T.
  // Remainder grid steps go to the earliest segments.
  static PinSchedule equally_spaced(const std::vector<Point>& points, int horizon) {
    if (points.size() < 2) throw std::invalid_argument("equally_spaced: need at least 2 pins");
    const int segments = static_cast<int>(points.size()) - 1;
    if (horizon < segments) {
      throw std::invalid_argument("equally_spaced: horizon smaller than number of segments");
    }
    const int base = horizon / segments;
    const int rem = horizon % segments;
    PinSchedule schedule;
    schedule.horizon = horizon;
    int t = 0;
    for (int k = 0; k < static_cast<int>(points.size()); ++k) {
      schedule.pins.push_back(Pin{points[static_cast<std::size_t>(k)], t});
      t += base + (k < rem ? 1 : 0);
    }
    schedule.pins.back().time = horizon;
    return schedule;
  }
};

struct CurveGrid {
  std::vector<Point> points;             // T+1 curve samples, in grid order
  std::map<int, double> known_values;    // grid index -> objective value
  std::set<int> pin_indices;

  int size() const { return static_cast<int>(points.size()); }
  std::size_t dimension() const { return points.empty() ? 0 : points.front().size(); }
};

struct QpSettings {
  double length_penalty = 1e-3;
  double kkt_tolerance = 1e-8;
  int max_solver_iterations = 0;  // 0: use 50*(T+1)

  void validate() const {
    if (length_penalty < 0) throw std::invalid_argument("QpSettings: length_penalty must be >= 0");
    if (!(kkt_tolerance > 0)) throw std::invalid_argument("QpSettings: kkt_tolerance must be > 0");
    if (max_solver_iterations < 0) {
      throw std::invalid_argument("QpSettings: max_solver_iterations must be positive (0 = auto)");
    }
  }
};

namespace detail {

// Symmetric pentadiagonal matrix stored by bands.
struct PentaBands {
  std::vector<double> d0;  // diagonal, size n
  std::vector<double> d1;  // first off-diagonal, size n-1
  std::vector<double> d2;  // second off-diagonal, size n-2

  int size() const { return static_cast<int>(d0.size()); }

  void multiply(const std::vector<double>& x, std::vector<double>& y) const {
    const int n = size();
    for (int i = 0; i < n; ++i) {
      double s = d0[i] * x[i];
      if (i >= 1) s += d1[i - 1] * x[i - 1];
      if (i + 1 < n) s += d1[i] * x[i + 1];
      if (i >= 2) s += d2[i - 2] * x[i - 2];
      if (i + 2 < n) s += d2[i] * x[i + 2];
      y[i] = s;
    }
  }

  // A e_j, restricted to the <=5 nonzero rows around j.
  void column_update(int j, double coeff, std::vector<double>& y) const {
    const int n = size();
    y[j] += coeff * d0[j];
    if (j >= 1) y[j - 1] += coeff * d1[j - 1];
    if (j + 1 < n) y[j + 1] += coeff * d1[j];
    if (j >= 2) y[j - 2] += coeff * d2[j - 2];
    if (j + 2 < n) y[j + 2] += coeff * d2[j];
  }
};

// Bands of A = C^T C + penalty * D^T D where C stacks the acceleration
// rows (x_1 - x_0, then x_t - 2 x_{t-1} + x_{t-2}) and D the consecutive
// differences x_{t+1} - x_t. Assembled row by row from the outer products.
inline PentaBands curve_energy_bands(int n, double penalty) {
  PentaBands A;
  A.d0.assign(static_cast<std::size_t>(n), 0.0);
  A.d1.assign(static_cast<std::size_t>(n > 0 ? n - 1 : 0), 0.0);
  A.d2.assign(static_cast<std::size_t>(n > 1 ? n - 2 : 0), 0.0);
  if (n >= 2) {  // a_1 = x_1 - x_0
    A.d0[0] += 1.0;
    A.d0[1] += 1.0;
    A.d1[0] += -1.0;
  }
  for (int t = 2; t < n; ++t) {  // a_t = x_t - 2 x_{t-1} + x_{t-2}
    A.d0[t - 2] += 1.0;
    A.d0[t - 1] += 4.0;
    A.d0[t] += 1.0;
    A.d1[t - 2] += -2.0;
    A.d1[t - 1] += -2.0;
    A.d2[t - 2] += 1.0;
  }
  for (int t = 0; t + 1 < n; ++t) {  // length penalty on x_{t+1} - x_t
    A.d0[t] += penalty;
    A.d0[t + 1] += penalty;
    A.d1[t] += -penalty;
  }
  return A;
}

// LDL^T factorization of a positive definite pentadiagonal matrix.
struct PentaFactor {
  std::vector<double> d;   // D
  std::vector<double> l1;  // L sub-diagonal 1
  std::vector<double> l2;  // L sub-diagonal 2

  void factorize(const PentaBands& A) {
    const int n = A.size();
    d.assign(static_cast<std::size_t>(n), 0.0);
    l1.assign(static_cast<std::size_t>(n > 0 ? n - 1 : 0), 0.0);
    l2.assign(static_cast<std::size_t>(n > 1 ? n - 2 : 0), 0.0);
    for (int i = 0; i < n; ++i) {
      double di = A.d0[i];
      if (i >= 1) di -= l1[i - 1] * l1[i - 1] * d[i - 1];
      if (i >= 2) di -= l2[i - 2] * l2[i - 2] * d[i - 2];
      if (!(di > 0.0)) {
        // Reduced Hessian should be PD; tiny shift guards roundoff on
        // near-singular (penalty = 0, short segment) cases.
        di = std::numeric_limits<double>::min() * 1e10;
      }
      d[i] = di;
      if (i + 1 < n) {
        double v = A.d1[i];
        if (i >= 1) v -= l1[i - 1] * d[i - 1] * l2[i - 1];
        l1[i] = v / di;
      }
      if (i + 2 < n) l2[i] = A.d2[i] / di;
    }
  }

  void solve(std::vector<double>& b) const {
    const int n = static_cast<int>(d.size());
    for (int i = 0; i < n; ++i) {
      if (i >= 1) b[i] -= l1[i - 1] * b[i - 1];
      if (i >= 2) b[i] -= l2[i - 2] * b[i - 2];
    }
    for (int i = 0; i < n; ++i) b[i] /= d[i];
    for (int i = n - 1; i >= 0; --i) {
      if (i + 1 < n) b[i] -= l1[i] * b[i + 1];
      if (i + 2 < n) b[i] -= l2[i] * b[i + 2];
    }
  }
};

// One-dimensional box QP: minimize x^T A x subject to lo <= x_i <= hi,
// with some coordinates fixed (pins). Gradient projection (generalized
// Cauchy point) alternated with exact pentadiagonal solves on the free set.
class BandedBoxQp {
 public:
  BandedBoxQp(const PentaBands& A, double lo, double hi) : A_(A), lo_(lo), hi_(hi) {}

  // fixed[i] true means x[i] is an eliminated pin variable.
  // Returns the iteration count; throws QpConvergenceError on failure.
  int solve(std::vector<double>& x, const std::vector<char>& fixed, double tol,
            int max_iterations) const {
    const int n = A_.size();
    std::vector<double> v(static_cast<std::size_t>(n));   // A x
    std::vector<double> g(static_cast<std::size_t>(n));   // gradient = 2 A x
    std::vector<double> dir(static_cast<std::size_t>(n));

    for (int iter = 0; iter < max_iterations; ++iter) {
      A_.multiply(x, v);
      for (int i = 0; i < n; ++i) g[i] = 2.0 * v[i];
      const double res = projected_gradient_norm(x, g, fixed);
      if (res <= tol) return iter;

      cauchy_step(x, g, fixed);

      // Subspace Newton step on coordinates strictly inside the box.
      A_.multiply(x, v);
      std::vector<int> free_idx;
      free_idx.reserve(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        if (!fixed[i] && x[i] > lo_ && x[i] < hi_) free_idx.push_back(i);
      }
      if (free_idx.empty()) continue;

      PentaBands R = reduced(free_idx);
      std::vector<double> rhs(free_idx.size());
      for (std::size_t k = 0; k < free_idx.size(); ++k) rhs[k] = -v[free_idx[k]];
      PentaFactor fac;
      fac.factorize(R);
      fac.solve(rhs);

      std::fill(dir.begin(), dir.end(), 0.0);
      for (std::size_t k = 0; k < free_idx.size(); ++k) dir[free_idx[k]] = rhs[k];

      double alpha = 1.0;
      for (int i : free_idx) {
        if (dir[i] > 0.0) alpha = std::min(alpha, (hi_ - x[i]) / dir[i]);
        else if (dir[i] < 0.0) alpha = std::min(alpha, (lo_ - x[i]) / dir[i]);
      }
      if (alpha > 0.0) {
        for (int i : free_idx) x[i] = std::clamp(x[i] + alpha * dir[i], lo_, hi_);
      }
    }

    A_.multiply(x, v);
    for (int i = 0; i < n; ++i) g[i] = 2.0 * v[i];
    const double res = projected_gradient_norm(x, g, fixed);
    if (res <= tol) return max_iterations;
    std::ostringstream msg;
    msg << "curve QP solver did not converge: residual " << res << " > tolerance " << tol;
    throw QpConvergenceError(res, msg.str());
  }

  double projected_gradient_norm(const std::vector<double>& x, const std::vector<double>& g,
                                 const std::vector<char>& fixed) const {
    double s = 0.0;
    for (int i = 0; i < A_.size(); ++i) {
      if (fixed[i]) continue;
      double gi = g[i];
      if (x[i] <= lo_) gi = std::min(gi, 0.0);
      else if (x[i] >= hi_) gi = std::max(gi, 0.0);
      s += gi * gi;
    }
    return std::sqrt(s);
  }

 private:
  // Exact minimizer of the quadratic along the projected steepest-descent
  // path x(t) = clamp(x - t g), walked breakpoint by breakpoint.
  void cauchy_step(std::vector<double>& x, const std::vector<double>& g,
                   const std::vector<char>& fixed) const {
    const int n = A_.size();
    std::vector<double> p(static_cast<std::size_t>(n), 0.0);
    std::vector<std::pair<double, int>> breaks;
    for (int i = 0; i < n; ++i) {
      if (fixed[i]) continue;
      double pi = -g[i];
      if (x[i] <= lo_ && pi < 0.0) pi = 0.0;
      if (x[i] >= hi_ && pi > 0.0) pi = 0.0;
      p[i] = pi;
      if (pi > 0.0) breaks.emplace_back((hi_ - x[i]) / pi, i);
      else if (pi < 0.0) breaks.emplace_back((lo_ - x[i]) / pi, i);
    }
    std::sort(breaks.begin(), breaks.end());

    std::vector<double> Ax(static_cast<std::size_t>(n));
    std::vector<double> Ap(static_cast<std::size_t>(n));
    A_.multiply(x, Ax);
    A_.multiply(p, Ap);

    double t = 0.0;
    std::size_t next_break = 0;
    while (true) {
      double fp = 0.0, fpp = 0.0;
      for (int i = 0; i < n; ++i) {
        fp += p[i] * Ax[i];
        fpp += p[i] * Ap[i];
      }
      fp *= 2.0;
      fpp *= 2.0;
      if (fp >= 0.0) break;  // no further descent along the path

      double t_break = std::numeric_limits<double>::infinity();
      while (next_break < breaks.size() && breaks[next_break].first <= t) ++next_break;
      if (next_break < breaks.size()) t_break = breaks[next_break].first;
      const double seg = t_break - t;

      const double t_star = fpp > 0.0 ? -fp / fpp : std::numeric_limits<double>::infinity();
      if (t_star <= seg) {
        for (int i = 0; i < n; ++i) {
          if (p[i] != 0.0) x[i] = std::clamp(x[i] + t_star * p[i], lo_, hi_);
        }
        break;
      }
      if (!std::isfinite(t_break)) break;

      // Advance to the breakpoint and freeze every coordinate that binds there.
      for (int i = 0; i < n; ++i) {
        if (p[i] != 0.0) x[i] = std::clamp(x[i] + seg * p[i], lo_, hi_);
      }
      for (int i = 0; i < n; ++i) Ax[i] += seg * Ap[i];
      while (next_break < breaks.size() && breaks[next_break].first <= t_break) {
        const int j = breaks[next_break].second;
        if (p[j] != 0.0) {
          x[j] = p[j] > 0.0 ? hi_ : lo_;
          A_.column_update(j, -p[j], Ap);
          p[j] = 0.0;
        }
        ++next_break;
      }
      t = t_break;
    }
  }

  PentaBands reduced(const std::vector<int>& free_idx) const {
    PentaBands R;
    const std::size_t m = free_idx.size();
    R.d0.assign(m, 0.0);
    R.d1.assign(m > 0 ? m - 1 : 0, 0.0);
    R.d2.assign(m > 1 ? m - 2 : 0, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
      R.d0[k] = A_.d0[free_idx[k]];
      if (k + 1 < m) {
        const int gap = free_idx[k + 1] - free_idx[k];
        if (gap == 1) R.d1[k] = A_.d1[free_idx[k]];
        else if (gap == 2) R.d1[k] = A_.d2[free_idx[k]];
      }
      if (k + 2 < m) {
        const int gap = free_idx[k + 2] - free_idx[k];
        if (gap == 2) R.d2[k] = A_.d2[free_idx[k]];
      }
    }
    return R;
  }

  const PentaBands& A_;
  double lo_;
  double hi_;
};

}  // namespace detail

// Objective of the substituted curve QP for a full grid (all dimensions).
inline double curve_qp_objective(const std::vector<Point>& points, double length_penalty) {
  const int n = static_cast<int>(points.size());
  const std::size_t dim = points.empty() ? 0 : points.front().size();
  double accel = 0.0, length = 0.0;
  for (std::size_t d = 0; d < dim; ++d) {
    for (int t = 1; t < n; ++t) {
      const double a = (t == 1) ? points[1][d] - points[0][d]
                                : points[t][d] - 2.0 * points[t - 1][d] + points[t - 2][d];
      accel += a * a;
    }
    for (int t = 0; t + 1 < n; ++t) {
      const double s = points[t + 1][d] - points[t][d];
      length += s * s;
    }
  }
  return accel + length_penalty * length;
}

// Solve the discretized curve QP. Pins are eliminated fixed variables, so
// the returned grid satisfies points[T_k] == p_k exactly; every other
// coordinate is solved per dimension to the requested KKT tolerance.
inline CurveGrid solve_curve_qp(const PinSchedule& schedule, const Box& box,
                                const QpSettings& settings = {}) {
  box.validate();
  settings.validate();
  schedule.validate(box);

  const int n = schedule.horizon + 1;
  const std::size_t dim = box.dimension();
  const int max_iter =
      settings.max_solver_iterations > 0 ? settings.max_solver_iterations : 50 * n;

  CurveGrid grid;
  grid.points.assign(static_cast<std::size_t>(n), Point(dim, 0.0));
  for (const Pin& pin : schedule.pins) grid.pin_indices.insert(pin.time);

  std::vector<char> fixed(static_cast<std::size_t>(n), 0);
  for (const Pin& pin : schedule.pins) fixed[static_cast<std::size_t>(pin.time)] = 1;

  const detail::PentaBands A = detail::curve_energy_bands(n, settings.length_penalty);

  std::vector<double> x(static_cast<std::size_t>(n));
  for (std::size_t d = 0; d < dim; ++d) {
    // Initial guess: piecewise-linear interpolation between pins.
    for (std::size_t k = 0; k + 1 < schedule.pins.size(); ++k) {
      const Pin& a = schedule.pins[k];
      const Pin& b = schedule.pins[k + 1];
      for (int t = a.time; t <= b.time; ++t) {
        const double w = static_cast<double>(t - a.time) / static_cast<double>(b.time - a.time);
        x[static_cast<std::size_t>(t)] = a.point[d] + w * (b.point[d] - a.point[d]);
      }
    }
    for (int t = 0; t < n; ++t) {
      x[static_cast<std::size_t>(t)] = std::clamp(x[static_cast<std::size_t>(t)],
                                                  box.lower[d], box.upper[d]);
    }
    for (const Pin& pin : schedule.pins) x[static_cast<std::size_t>(pin.time)] = pin.point[d];

    detail::BandedBoxQp solver(A, box.lower[d], box.upper[d]);
    solver.solve(x, fixed, settings.kkt_tolerance, max_iter);

    for (const Pin& pin : schedule.pins) x[static_cast<std::size_t>(pin.time)] = pin.point[d];
    for (int t = 0; t < n; ++t) grid.points[static_cast<std::size_t>(t)][d] = x[static_cast<std::size_t>(t)];
  }
  return grid;
}

struct ArcStats {
  double total_length = 0.0;
  std::vector<double> spacings;  // ||x_{t+1} - x_t||, length T
};

inline ArcStats curve_arc_stats(const CurveGrid& grid) {
  ArcStats stats;
  const int n = grid.size();
  stats.spacings.reserve(static_cast<std::size_t>(n > 0 ? n - 1 : 0));
  for (int t = 0; t + 1 < n; ++t) {
    double s2 = 0.0;
    for (std::size_t d = 0; d < grid.dimension(); ++d) {
      const double diff = grid.points[static_cast<std::size_t>(t) + 1][d] -
                          grid.points[static_cast<std::size_t>(t)][d];
      s2 += diff * diff;
    }
    const double s = std::sqrt(s2);
    stats.spacings.push_back(s);
    stats.total_length += s;
  }
  return stats;
}

}  // namespace curvepolish
