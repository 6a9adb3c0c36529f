#pragma once

// Test-only oracles. The dense KKT oracle rebuilds the substituted curve
// QP as explicit difference matrices and solves the pin-eliminated normal
// equations with Eigen; it shares no code with the banded production
// solver.

#include <Eigen/Dense>
#include <random>
#include <vector>

#include "curvepolish/qp_curve.hpp"

namespace curvepolish::testing {

// Full Hessian A = C^T C + penalty * D^T D of the substituted objective.
inline Eigen::MatrixXd dense_curve_hessian(int n, double penalty) {
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n - 1, n);
  C(0, 0) = -1.0;
  C(0, 1) = 1.0;
  for (int t = 2; t < n; ++t) {
    C(t - 1, t - 2) = 1.0;
    C(t - 1, t - 1) = -2.0;
    C(t - 1, t) = 1.0;
  }
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n - 1, n);
  for (int t = 0; t + 1 < n; ++t) {
    D(t, t) = -1.0;
    D(t, t + 1) = 1.0;
  }
  return C.transpose() * C + penalty * D.transpose() * D;
}

// Equality-constrained solve: pins fixed, box ignored. Returns the full
// per-dimension trajectories as an n x D matrix.
inline std::vector<std::vector<double>> dense_kkt_solve(const PinSchedule& schedule,
                                                        std::size_t dim, double penalty) {
  const int n = schedule.horizon + 1;
  const Eigen::MatrixXd A = dense_curve_hessian(n, penalty);

  std::vector<char> fixed(static_cast<std::size_t>(n), 0);
  for (const Pin& pin : schedule.pins) fixed[static_cast<std::size_t>(pin.time)] = 1;
  std::vector<int> free_idx;
  for (int i = 0; i < n; ++i) {
    if (!fixed[static_cast<std::size_t>(i)]) free_idx.push_back(i);
  }

  std::vector<std::vector<double>> result(static_cast<std::size_t>(n),
                                          std::vector<double>(dim, 0.0));
  const int m = static_cast<int>(free_idx.size());
  Eigen::MatrixXd Aff(m, m);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) Aff(r, c) = A(free_idx[static_cast<std::size_t>(r)],
                                              free_idx[static_cast<std::size_t>(c)]);
  }
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(Aff);

  for (std::size_t d = 0; d < dim; ++d) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (const Pin& pin : schedule.pins) x(pin.time) = pin.point[d];
    Eigen::VectorXd rhs(m);
    const Eigen::VectorXd Ax = A * x;
    for (int r = 0; r < m; ++r) rhs(r) = -Ax(free_idx[static_cast<std::size_t>(r)]);
    const Eigen::VectorXd xf = ldlt.solve(rhs);
    for (int r = 0; r < m; ++r) x(free_idx[static_cast<std::size_t>(r)]) += xf(r);
    for (int i = 0; i < n; ++i) result[static_cast<std::size_t>(i)][d] = x(i);
  }
  return result;
}

// Projected-gradient KKT residual of a solved grid, computed from the
// dense Hessian (pins excluded).
inline double dense_kkt_residual(const CurveGrid& grid, const Box& box, double penalty) {
  const int n = grid.size();
  const Eigen::MatrixXd A = dense_curve_hessian(n, penalty);
  double s = 0.0;
  for (std::size_t d = 0; d < grid.dimension(); ++d) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = grid.points[static_cast<std::size_t>(i)][d];
    const Eigen::VectorXd g = 2.0 * (A * x);
    for (int i = 0; i < n; ++i) {
      if (grid.pin_indices.count(i)) continue;
      double gi = g(i);
      if (x(i) <= box.lower[d]) gi = std::min(gi, 0.0);
      else if (x(i) >= box.upper[d]) gi = std::max(gi, 0.0);
      s += gi * gi;
    }
  }
  return std::sqrt(s);
}

// Random feasible pin schedule for oracle comparisons.
inline PinSchedule random_schedule(std::mt19937& rng, std::size_t dim, int max_horizon,
                                   double coord_range) {
  std::uniform_int_distribution<int> pin_count_dist(2, 4);
  std::uniform_real_distribution<double> coord(-coord_range, coord_range);
  const int pins = pin_count_dist(rng);
  std::uniform_int_distribution<int> horizon_dist(4 * (pins - 1), max_horizon);
  const int horizon = horizon_dist(rng);

  std::vector<Point> points;
  for (int k = 0; k < pins; ++k) {
    Point p(dim);
    for (std::size_t d = 0; d < dim; ++d) p[d] = coord(rng);
    points.push_back(std::move(p));
  }
  return PinSchedule::equally_spaced(points, horizon);
}

}  // namespace curvepolish::testing
