#include "curvepolish/qp_curve.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracle_utils.hpp"

namespace cp = curvepolish;
namespace cpt = curvepolish::testing;

TEST(PinSchedule, EquallySpacedDistributesRemainderToEarliestSegments) {
  const std::vector<cp::Point> pts(5, cp::Point{0.0});
  const cp::PinSchedule s = cp::PinSchedule::equally_spaced(pts, 79);
  ASSERT_EQ(s.pins.size(), 5u);
  EXPECT_EQ(s.pins[0].time, 0);
  EXPECT_EQ(s.pins[1].time, 20);
  EXPECT_EQ(s.pins[2].time, 40);
  EXPECT_EQ(s.pins[3].time, 60);
  EXPECT_EQ(s.pins[4].time, 79);
}

TEST(PinSchedule, RejectsNonIncreasingTimesAndOutOfBoxPins) {
  const cp::Box box = cp::Box::cube(1, -1.0, 1.0);
  cp::PinSchedule s;
  s.horizon = 10;
  s.pins = {{{0.0}, 0}, {{0.5}, 5}, {{0.2}, 5}};
  EXPECT_THROW(s.validate(box), std::invalid_argument);

  s.pins = {{{0.0}, 0}, {{2.0}, 10}};
  try {
    s.validate(box);
    FAIL() << "expected InfeasiblePinError";
  } catch (const cp::InfeasiblePinError& e) {
    EXPECT_EQ(e.pin_index(), 1u);
  }
}

TEST(SolveCurveQp, ConstantCurveWhenAllPinsCoincide) {
  const cp::Point q{1.5, -2.0};
  cp::PinSchedule s = cp::PinSchedule::equally_spaced({q, q, q}, 30);
  const cp::Box box = cp::Box::cube(2, -10.0, 10.0);
  const cp::CurveGrid grid = cp::solve_curve_qp(s, box);
  ASSERT_EQ(grid.size(), 31);
  for (const auto& p : grid.points) {
    EXPECT_EQ(p[0], q[0]);
    EXPECT_EQ(p[1], q[1]);
  }
  EXPECT_NEAR(cp::curve_qp_objective(grid.points, 1e-3), 0.0, 1e-15);
}

TEST(SolveCurveQp, MatchesDenseKktOracleOnStraightRun) {
  cp::PinSchedule s = cp::PinSchedule::equally_spaced({{0.0}, {10.0}}, 40);
  const cp::Box box = cp::Box::cube(1, -100.0, 100.0);
  const cp::CurveGrid grid = cp::solve_curve_qp(s, box);
  const auto oracle = cpt::dense_kkt_solve(s, 1, 1e-3);
  for (int i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(grid.points[static_cast<std::size_t>(i)][0],
                oracle[static_cast<std::size_t>(i)][0], 1e-6);
  }
  // Objective value agrees with the dense quadratic form.
  const Eigen::MatrixXd A = cpt::dense_curve_hessian(grid.size(), 1e-3);
  Eigen::VectorXd x(grid.size());
  for (int i = 0; i < grid.size(); ++i) x(i) = grid.points[static_cast<std::size_t>(i)][0];
  EXPECT_NEAR(cp::curve_qp_objective(grid.points, 1e-3), x.dot(A * x), 1e-10);
}

TEST(SolveCurveQp, PinsInterpolatedBitwise) {
  std::mt19937 rng(7);
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t dim = 1 + rep % 3;
    const cp::PinSchedule s = cpt::random_schedule(rng, dim, 50, 5.0);
    const cp::Box box = cp::Box::cube(dim, -1000.0, 1000.0);
    const cp::CurveGrid grid = cp::solve_curve_qp(s, box);
    for (const cp::Pin& pin : s.pins) {
      EXPECT_EQ(grid.points[static_cast<std::size_t>(pin.time)], pin.point);
      EXPECT_TRUE(grid.pin_indices.count(pin.time));
    }
  }
}

TEST(SolveCurveQp, PerturbationOfFreeVariablesNeverImproves) {
  std::mt19937 rng(11);
  const cp::PinSchedule s = cpt::random_schedule(rng, 2, 40, 3.0);
  const cp::Box box = cp::Box::cube(2, -50.0, 50.0);
  const cp::CurveGrid grid = cp::solve_curve_qp(s, box);
  const double f0 = cp::curve_qp_objective(grid.points, 1e-3);
  std::uniform_int_distribution<int> pick(0, grid.size() - 1);
  int checked = 0;
  while (checked < 20) {
    const int t = pick(rng);
    if (grid.pin_indices.count(t)) continue;
    for (const double delta : {1e-4, -1e-4}) {
      for (std::size_t d = 0; d < 2; ++d) {
        auto pts = grid.points;
        pts[static_cast<std::size_t>(t)][d] =
            std::clamp(pts[static_cast<std::size_t>(t)][d] + delta, box.lower[d], box.upper[d]);
        EXPECT_GE(cp::curve_qp_objective(pts, 1e-3) - f0, -1e-9);
      }
    }
    ++checked;
  }
}

TEST(SolveCurveQp, TightBoxSatisfiesBoundsExactlyWithSmallResidual) {
  // Pins at the box corners force the connecting arcs against the faces.
  cp::PinSchedule s =
      cp::PinSchedule::equally_spaced({{0.0, 0.0}, {2.0, 1.0}, {0.0, 0.0}}, 60);
  const cp::Box box{{0.0, -0.2}, {2.0, 1.0}};
  const cp::CurveGrid grid = cp::solve_curve_qp(s, box);
  for (const auto& p : grid.points) {
    EXPECT_GE(p[0], box.lower[0]);
    EXPECT_LE(p[0], box.upper[0]);
    EXPECT_GE(p[1], box.lower[1]);
    EXPECT_LE(p[1], box.upper[1]);
  }
  EXPECT_LE(cpt::dense_kkt_residual(grid, box, 1e-3), 1e-8);
}

TEST(SolveCurveQp, RefiningTheGridReducesMaxAcceleration) {
  const std::vector<cp::Point> pts{{0.0, 0.0}, {3.0, 1.0}, {0.0, 0.0}};
  const cp::Box box = cp::Box::cube(2, -10.0, 10.0);
  double prev = std::numeric_limits<double>::infinity();
  for (const int horizon : {40, 80, 160}) {
    const cp::CurveGrid grid =
        cp::solve_curve_qp(cp::PinSchedule::equally_spaced(pts, horizon), box);
    double max_a = 0.0;
    for (int t = 1; t < grid.size(); ++t) {
      double a2 = 0.0;
      for (std::size_t d = 0; d < 2; ++d) {
        const double a = t == 1 ? grid.points[1][d] - grid.points[0][d]
                                : grid.points[static_cast<std::size_t>(t)][d] -
                                      2.0 * grid.points[static_cast<std::size_t>(t) - 1][d] +
                                      grid.points[static_cast<std::size_t>(t) - 2][d];
        a2 += a * a;
      }
      max_a = std::max(max_a, std::sqrt(a2));
    }
    EXPECT_LE(max_a, prev * (1.0 + 1e-12));
    prev = max_a;
  }
}

TEST(SolveCurveQp, NoSpacingJumpExceedsTenTimesNeighborsOffPins) {
  std::mt19937 rng(23);
  for (int rep = 0; rep < 5; ++rep) {
    const cp::PinSchedule s = cpt::random_schedule(rng, 2, 60, 4.0);
    const cp::Box box = cp::Box::cube(2, -1000.0, 1000.0);
    const cp::CurveGrid grid = cp::solve_curve_qp(s, box);
    const cp::ArcStats stats = cp::curve_arc_stats(grid);
    for (std::size_t t = 1; t + 1 < stats.spacings.size(); ++t) {
      const bool near_pin = grid.pin_indices.count(static_cast<int>(t)) ||
                            grid.pin_indices.count(static_cast<int>(t) + 1) ||
                            grid.pin_indices.count(static_cast<int>(t) - 1);
      if (near_pin) continue;
      const double neighbor = std::max(stats.spacings[t - 1], stats.spacings[t + 1]);
      if (neighbor > 1e-12) {
        EXPECT_LE(stats.spacings[t], 10.0 * neighbor);
      }
    }
  }
}

TEST(CurveArcStats, ConstantCurveHasZeroLength) {
  cp::CurveGrid grid;
  grid.points.assign(11, cp::Point{2.0, 2.0});
  const cp::ArcStats stats = cp::curve_arc_stats(grid);
  EXPECT_EQ(stats.spacings.size(), 10u);
  EXPECT_EQ(stats.total_length, 0.0);
  for (double s : stats.spacings) EXPECT_EQ(s, 0.0);
}

TEST(CurveArcStats, StraightRunHasNearUniformInteriorSpacing) {
  cp::PinSchedule s = cp::PinSchedule::equally_spaced({{0.0}, {10.0}}, 10);
  const cp::Box box = cp::Box::cube(1, -100.0, 100.0);
  const cp::CurveGrid grid = cp::solve_curve_qp(s, box);
  const auto oracle = cpt::dense_kkt_solve(s, 1, 1e-3);
  for (int i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(grid.points[static_cast<std::size_t>(i)][0],
                oracle[static_cast<std::size_t>(i)][0], 1e-8);
  }
  const cp::ArcStats stats = cp::curve_arc_stats(grid);
  EXPECT_NEAR(stats.total_length, 10.0, 0.5);
  // Interior spacings stay within a modest band of the mean.
  const double mean = stats.total_length / static_cast<double>(stats.spacings.size());
  for (std::size_t t = 2; t + 2 < stats.spacings.size(); ++t) {
    EXPECT_NEAR(stats.spacings[t], mean, 0.5 * mean);
  }
}

TEST(SolveCurveQp, ZeroLengthPenaltyMatchesOracleObjective) {
  cp::PinSchedule s = cp::PinSchedule::equally_spaced({{0.0}, {4.0}, {1.0}}, 24);
  const cp::Box box = cp::Box::cube(1, -100.0, 100.0);
  cp::QpSettings settings;
  settings.length_penalty = 0.0;
  const cp::CurveGrid grid = cp::solve_curve_qp(s, box, settings);
  const auto oracle = cpt::dense_kkt_solve(s, 1, 0.0);
  std::vector<cp::Point> oracle_points;
  for (const auto& row : oracle) oracle_points.push_back(row);
  EXPECT_NEAR(cp::curve_qp_objective(grid.points, 0.0),
              cp::curve_qp_objective(oracle_points, 0.0), 1e-8);
}

TEST(SolveCurveQp, DuplicateConsecutivePinsAtDistinctTimesAreLegal) {
  const cp::Point q{1.0};
  cp::PinSchedule s = cp::PinSchedule::equally_spaced({{0.0}, q, q, {0.5}}, 30);
  const cp::Box box = cp::Box::cube(1, -5.0, 5.0);
  const cp::CurveGrid grid = cp::solve_curve_qp(s, box);
  EXPECT_EQ(grid.points[static_cast<std::size_t>(s.pins[1].time)][0], 1.0);
  EXPECT_EQ(grid.points[static_cast<std::size_t>(s.pins[2].time)][0], 1.0);
}
