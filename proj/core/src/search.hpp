#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace lgsim::detail {

struct Candidate {
  std::vector<double> params;
  double value = 0.0;
  double tie = 0.0;  // smaller wins when values agree within kTieTolerance
};

inline constexpr double kTieTolerance = 1e-12;

inline bool better(double value, double tie, const Candidate& incumbent) {
  if (value > incumbent.value + kTieTolerance) return true;
  return value >= incumbent.value - kTieTolerance && tie < incumbent.tie;
}

// nullopt marks an infeasible (degenerate) point.
using Objective = std::function<std::optional<double>(const std::vector<double>&)>;
using TieBreak = std::function<double(const std::vector<double>&)>;

struct Bounds {
  std::vector<double> lower;
  std::vector<double> upper;
};

struct RefineOptions {
  std::size_t max_halvings = 40;
  double min_step = 1e-6;
  std::size_t max_sweeps_per_step = 200;
};

// Evaluates every grid point; returns nullopt if none is feasible.
std::optional<Candidate> best_of(const std::vector<std::vector<double>>& points,
                                 const Objective& objective, const TieBreak& tie);

// Coordinate ascent: try +-step on each coordinate, keep improvements, halve
// the step vector whenever a full sweep makes no progress.
Candidate refine(const Candidate& start, std::vector<double> steps, const Bounds& bounds,
                 const Objective& objective, const TieBreak& tie,
                 const RefineOptions& options = {});

// Cartesian product of per-axis value lists.
std::vector<std::vector<double>> grid_product(const std::vector<std::vector<double>>& axes);

// `count` evenly spaced points over [lo, hi] (count >= 2).
std::vector<double> linspace(double lo, double hi, std::size_t count);

}  // namespace lgsim::detail
