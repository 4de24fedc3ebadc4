#include "search.hpp"

#include <algorithm>

#include "lgsim/error.hpp"

namespace lgsim::detail {

std::optional<Candidate> best_of(const std::vector<std::vector<double>>& points,
                                 const Objective& objective, const TieBreak& tie) {
  std::optional<Candidate> best;
  for (const auto& p : points) {
    const auto value = objective(p);
    if (!value) continue;
    const double t = tie(p);
    if (!best || better(*value, t, *best)) best = Candidate{p, *value, t};
  }
  return best;
}

Candidate refine(const Candidate& start, std::vector<double> steps, const Bounds& bounds,
                 const Objective& objective, const TieBreak& tie, const RefineOptions& options) {
  Candidate current = start;
  const std::size_t n = current.params.size();
  for (std::size_t halving = 0; halving <= options.max_halvings; ++halving) {
    const double largest = *std::max_element(steps.begin(), steps.end());
    if (largest < options.min_step) break;

    for (std::size_t sweep = 0; sweep < options.max_sweeps_per_step; ++sweep) {
      bool improved = false;
      for (std::size_t k = 0; k < n; ++k) {
        for (const double sign : {+1.0, -1.0}) {
          std::vector<double> trial = current.params;
          trial[k] = std::clamp(trial[k] + sign * steps[k], bounds.lower[k], bounds.upper[k]);
          if (trial[k] == current.params[k]) continue;
          const auto value = objective(trial);
          if (!value) continue;
          const double t = tie(trial);
          if (better(*value, t, current)) {
            current = Candidate{std::move(trial), *value, t};
            improved = true;
            break;
          }
        }
      }
      if (!improved) break;
    }
    for (auto& s : steps) s *= 0.5;
  }
  return current;
}

std::vector<std::vector<double>> grid_product(const std::vector<std::vector<double>>& axes) {
  std::vector<std::vector<double>> out{{}};
  for (const auto& axis : axes) {
    std::vector<std::vector<double>> next;
    next.reserve(out.size() * axis.size());
    for (const auto& prefix : out) {
      for (double v : axis) {
        auto p = prefix;
        p.push_back(v);
        next.push_back(std::move(p));
      }
    }
    out = std::move(next);
  }
  return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  if (count < 2) fail(ErrorCode::out_of_range, "grid resolution must be at least 2");
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  out.back() = hi;
  return out;
}

}  // namespace lgsim::detail
