#pragma once

// File formats: CSV dumps for curves, walk logs and aggregates, and JSON
// persistence for elite sets, polish outcomes, and benchmark run records.
// Doubles are written with round-trip precision so reruns are
// byte-identical.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "curvepolish/curve_gen.hpp"
#include "curvepolish/elites.hpp"
#include "curvepolish/line_walker.hpp"
#include "curvepolish/metrics.hpp"
#include "curvepolish/polish.hpp"
#include "curvepolish/qp_curve.hpp"

namespace curvepolish {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void write_curve_csv(const CurveGrid& grid, std::ostream& out) {
  out << "index";
  for (std::size_t d = 1; d <= grid.dimension(); ++d) out << ",x" << d;
  out << "\n";
  for (int i = 0; i < grid.size(); ++i) {
    out << i;
    for (double v : grid.points[static_cast<std::size_t>(i)]) out << "," << format_double(v);
    out << "\n";
  }
}

inline void write_curve_csv(const CurveGrid& grid, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  write_curve_csv(grid, out);
}

inline void write_walk_log_csv(const std::vector<WalkLogEntry>& log, std::ostream& out) {
  out << "step,index,value,reason\n";
  for (const auto& e : log) {
    out << e.step << "," << e.index << "," << format_double(e.value) << "," << to_string(e.reason)
        << "\n";
  }
}

inline void write_walk_log_csv(const std::vector<WalkLogEntry>& log,
                               const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  write_walk_log_csv(log, out);
}

struct EliteSetRecord {
  std::string function;
  std::size_t dimension = 0;
  std::uint64_t seed = 0;
  int grid_resolution = 0;
  EliteSet elites;
  std::uint64_t evaluations_accepted = 0;
  std::uint64_t evaluations_total = 0;
};

inline nlohmann::json to_json(const EliteSetRecord& rec) {
  nlohmann::json points = nlohmann::json::array();
  nlohmann::json values = nlohmann::json::array();
  for (const auto& e : rec.elites.solutions) {
    points.push_back(e.point);
    values.push_back(e.value);
  }
  return nlohmann::json{{"function", rec.function},
                        {"dimension", rec.dimension},
                        {"seed", rec.seed},
                        {"grid_resolution", rec.grid_resolution},
                        {"points", points},
                        {"values", values},
                        {"evaluations", {{"accepted", rec.evaluations_accepted},
                                         {"total", rec.evaluations_total}}}};
}

inline EliteSetRecord elite_set_record_from_json(const nlohmann::json& j) {
  EliteSetRecord rec;
  rec.function = j.at("function").get<std::string>();
  rec.dimension = j.at("dimension").get<std::size_t>();
  rec.seed = j.at("seed").get<std::uint64_t>();
  rec.grid_resolution = j.value("grid_resolution", 0);
  const auto& points = j.at("points");
  const auto& values = j.at("values");
  if (points.size() != values.size()) {
    throw std::invalid_argument("elite set: points/values size mismatch");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    rec.elites.solutions.push_back(
        {points[i].get<Point>(), values[i].get<double>()});
  }
  if (j.contains("evaluations")) {
    rec.evaluations_accepted = j["evaluations"].value("accepted", std::uint64_t{0});
    rec.evaluations_total = j["evaluations"].value("total", std::uint64_t{0});
  }
  return rec;
}

inline void save_elite_set(const EliteSetRecord& rec, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << to_json(rec).dump(2) << "\n";
}

inline EliteSetRecord load_elite_set(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  nlohmann::json j;
  in >> j;
  return elite_set_record_from_json(j);
}

inline nlohmann::json to_json(const RunRecord& rec) {
  nlohmann::json j{{"function", rec.function},
                   {"dimension", rec.dimension},
                   {"seed", rec.seed},
                   {"strategy", rec.strategy},
                   {"f_true", rec.f_true},
                   {"f_before", rec.f_before},
                   {"f_after", rec.f_after},
                   {"solved_before", rec.solved_before},
                   {"solved_after", rec.solved_after},
                   {"elite_evaluations", rec.elite_evaluations},
                   {"polish_evaluations", rec.polish_evaluations}};
  if (rec.gap_closed_pct) j["gap_closed"] = *rec.gap_closed_pct;
  if (!rec.error.empty()) j["error"] = rec.error;
  return j;
}

inline RunRecord run_record_from_json(const nlohmann::json& j) {
  RunRecord rec;
  rec.function = j.at("function").get<std::string>();
  rec.dimension = j.at("dimension").get<std::size_t>();
  rec.seed = j.at("seed").get<std::uint64_t>();
  rec.strategy = j.at("strategy").get<std::string>();
  rec.f_true = j.at("f_true").get<double>();
  rec.f_before = j.at("f_before").get<double>();
  rec.f_after = j.at("f_after").get<double>();
  rec.solved_before = j.at("solved_before").get<bool>();
  rec.solved_after = j.at("solved_after").get<bool>();
  if (j.contains("gap_closed")) rec.gap_closed_pct = j["gap_closed"].get<double>();
  rec.elite_evaluations = j.value("elite_evaluations", std::uint64_t{0});
  rec.polish_evaluations = j.value("polish_evaluations", std::uint64_t{0});
  rec.error = j.value("error", std::string{});
  return rec;
}

inline nlohmann::json polish_outcome_json(const PolishOutcome& outcome, const std::string& function,
                                          std::size_t dimension, std::uint64_t seed, double f_true,
                                          double elapsed_seconds,
                                          const std::string& curve_csv = {},
                                          const std::string& walk_log_csv = {}) {
  nlohmann::json j{{"function", function},
                   {"dimension", dimension},
                   {"strategy", to_string(outcome.strategy)},
                   {"seed", seed},
                   {"f_before", outcome.f_before},
                   {"f_after", outcome.f_after},
                   {"f_true", f_true},
                   {"best_point", outcome.best_point},
                   {"evals_used", outcome.evaluations_used},
                   {"elapsed_seconds", elapsed_seconds}};
  nlohmann::json artifacts = nlohmann::json::object();
  if (!curve_csv.empty()) artifacts["curve_csv"] = curve_csv;
  if (!walk_log_csv.empty()) artifacts["walk_log_csv"] = walk_log_csv;
  if (!artifacts.empty()) j["artifacts"] = artifacts;
  return j;
}

}  // namespace curvepolish
