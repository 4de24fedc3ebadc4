#include "lgsim/filters.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "lgsim/error.hpp"
#include "search.hpp"

namespace lgsim {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAngleSlack = 1e-12;

void require_loss(double loss) {
  if (!(loss >= 0.0 && loss <= 1.0)) {
    fail(ErrorCode::out_of_range, "filter loss must lie in [0, 1], got " + std::to_string(loss));
  }
}

void require_angle(double value, double upper, const char* name) {
  if (!(value >= -kAngleSlack && value <= upper + kAngleSlack)) {
    fail(ErrorCode::out_of_range, std::string(name) + " out of range: " + std::to_string(value));
  }
}

ComplexMatrix rz(double angle) {
  return ComplexMatrix::diagonal({std::polar(1.0, -angle / 2.0), std::polar(1.0, angle / 2.0)});
}

ComplexMatrix ry(double angle) {
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  return ComplexMatrix{{c, -s}, {s, c}};
}

using FilterPair = std::pair<FilterSpec, FilterSpec>;

// Maps a parameter vector of one search family onto a filter pair.
struct Family {
  std::function<FilterPair(const std::vector<double>&)> decode;
  detail::Bounds bounds;
  std::vector<double> steps;
  std::vector<std::vector<double>> grid;
  // Indices of the loss coordinates, for the tie-break.
  std::vector<std::size_t> loss_coords;
};

// Axis-aligned orientations used to seed the generic grid.
const std::vector<std::array<double, 2>>& axis_orientations() {
  static const std::vector<std::array<double, 2>> axes{
      {0.0, 0.0},      {kPi, 0.0},          {kPi / 2, 0.0},
      {kPi / 2, kPi},  {kPi / 2, kPi / 2},  {kPi / 2, 3 * kPi / 2},
  };
  return axes;
}

Family make_family(SearchFamily which, std::size_t resolution) {
  const auto losses = detail::linspace(0.0, kMaxSearchLoss, resolution);
  const double loss_step = kMaxSearchLoss / static_cast<double>(resolution - 1);
  Family f;
  switch (which) {
    case SearchFamily::sppo:
      f.decode = [](const std::vector<double>& p) { return sppo_pair(p[0]); };
      f.bounds = {{0.0}, {kMaxSearchLoss}};
      f.steps = {loss_step};
      f.grid = detail::grid_product({losses});
      f.loss_coords = {0};
      break;
    case SearchFamily::sppo_independent:
      f.decode = [](const std::vector<double>& p) {
        return FilterPair{sppo_pair(p[0]).first, sppo_pair(p[1]).second};
      };
      f.bounds = {{0.0, 0.0}, {kMaxSearchLoss, kMaxSearchLoss}};
      f.steps = {loss_step, loss_step};
      f.grid = detail::grid_product({losses, losses});
      f.loss_coords = {0, 1};
      break;
    case SearchFamily::generic: {
      f.decode = [](const std::vector<double>& p) {
        return FilterPair{generic_filter(p[0], {p[1], p[2], p[3]}, FilterRole::pre),
                          generic_filter(p[4], {p[5], p[6], p[7]}, FilterRole::post)};
      };
      f.bounds = {{0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
                  {kMaxSearchLoss, kPi, 2 * kPi, 2 * kPi, kMaxSearchLoss, kPi, 2 * kPi, 2 * kPi}};
      f.steps = {loss_step, kPi / 4, kPi / 4, kPi / 4, loss_step, kPi / 4, kPi / 4, kPi / 4};
      for (double lp : losses) {
        for (const auto& op : axis_orientations()) {
          for (double lq : losses) {
            for (const auto& oq : axis_orientations()) {
              f.grid.push_back({lp, op[0], op[1], 0.0, lq, oq[0], oq[1], 0.0});
            }
          }
        }
      }
      f.loss_coords = {0, 4};
      break;
    }
  }
  return f;
}

// Embeds the optimum of the next narrower family.
std::vector<double> widen(SearchFamily target, const std::vector<double>& narrower) {
  if (target == SearchFamily::sppo_independent) return {narrower[0], narrower[0]};
  return {narrower[0], 0.0, 0.0, 0.0, narrower[1], kPi, 0.0, 0.0};
}

struct SearchOutcome {
  detail::Candidate best;
  FilterPair filters;
};

SearchOutcome run_family(const KrausChannel& ch, const MeasurementScenario& scen,
                         SearchFamily which, std::size_t resolution) {
  const Family family = make_family(which, resolution);

  const detail::Objective objective = [&](const std::vector<double>& p) -> std::optional<double> {
    const auto [pre, post] = family.decode(p);
    try {
      return filtered_chsh_value(ch, pre, post, scen);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::degenerate_filter) return std::nullopt;
      throw;
    }
  };
  const detail::TieBreak tie = [&](const std::vector<double>& p) {
    double total = 0.0;
    for (std::size_t k : family.loss_coords) total += p[k];
    return total;
  };

  const auto grid_best = detail::best_of(family.grid, objective, tie);
  if (!grid_best) fail(ErrorCode::no_feasible_point, "every grid point is degenerate");

  std::vector<detail::Candidate> starts{*grid_best};
  if (which != SearchFamily::sppo) {
    const SearchFamily narrower =
        which == SearchFamily::generic ? SearchFamily::sppo_independent : SearchFamily::sppo;
    const SearchOutcome inner = run_family(ch, scen, narrower, resolution);
    const auto seed = widen(which, inner.best.params);
    if (const auto value = objective(seed)) starts.push_back({seed, *value, tie(seed)});
  }

  std::optional<detail::Candidate> best;
  for (const auto& start : starts) {
    const auto refined = detail::refine(start, family.steps, family.bounds, objective, tie);
    if (!best || detail::better(refined.value, refined.tie, *best)) best = refined;
  }
  return {*best, family.decode(best->params)};
}

}  // namespace

std::string_view to_string(FilterRole role) noexcept {
  switch (role) {
    case FilterRole::pre: return "pre";
    case FilterRole::post: return "post";
    case FilterRole::generic: return "generic";
  }
  return "generic";
}

std::string_view to_string(SearchFamily family) noexcept {
  switch (family) {
    case SearchFamily::sppo: return "sppo_grid";
    case SearchFamily::sppo_independent: return "sppo_independent_grid";
    case SearchFamily::generic: return "generic_grid";
  }
  return "sppo_grid";
}

FilterSpec make_filter(ComplexMatrix kraus, FilterRole label) {
  if (kraus.rows() != 2 || kraus.cols() != 2) {
    fail(ErrorCode::dimension_mismatch, "filter Kraus operator must be 2x2");
  }
  const ComplexMatrix defect =
      ComplexMatrix::identity(kraus.rows()) - matmul(adjoint(kraus), kraus);
  if (!is_psd(defect, tol::kStructure)) {
    fail(ErrorCode::out_of_range, "filter is not trace-nonincreasing (1 - K^dagger K not PSD)");
  }
  return {std::move(kraus), label};
}

FilterSpec identity_filter(FilterRole label) { return {ComplexMatrix::identity(2), label}; }

std::pair<FilterSpec, FilterSpec> sppo_pair(double loss) {
  require_loss(loss);
  const double keep = std::sqrt(1.0 - loss);
  return {FilterSpec{ComplexMatrix::diagonal({1.0, keep}), FilterRole::pre},
          FilterSpec{ComplexMatrix::diagonal({keep, 1.0}), FilterRole::post}};
}

KrausChannel as_channel(const FilterSpec& f) {
  return KrausChannel({f.kraus}, ChannelKind::trace_nonincreasing);
}

KrausChannel complete_to_channel(const FilterSpec& f) {
  const ComplexMatrix fail_branch =
      psd_sqrt(ComplexMatrix::identity(f.kraus.rows()) - matmul(adjoint(f.kraus), f.kraus));
  return KrausChannel({f.kraus, fail_branch}, ChannelKind::trace_preserving);
}

FilterSpec generic_filter(double loss, const FilterAngles& angles, FilterRole label) {
  require_loss(loss);
  require_angle(angles.theta, kPi, "theta");
  require_angle(angles.phi, 2 * kPi, "phi");
  require_angle(angles.lambda, 2 * kPi, "lambda");
  const ComplexMatrix r = matmul(rz(angles.phi), ry(angles.theta));
  const ComplexMatrix shape = ComplexMatrix::diagonal({1.0, std::sqrt(1.0 - loss)});
  ComplexMatrix k = matmul(matmul(matmul(r, shape), adjoint(r)), rz(angles.lambda));
  return FilterSpec{std::move(k), label};
}

SuccessTable success_probability(const KrausChannel& ch, const FilterSpec& pre,
                                 const FilterSpec& post, const MeasurementScenario& scen) {
  const KrausChannel pre_map = as_channel(pre);
  const KrausChannel post_map = as_channel(post);
  SuccessTable table;
  for (int x : kSettings) {
    for (int a : kOutcomes) {
      const ComplexMatrix& m_a = scen.t0[static_cast<std::size_t>(x - 1)].projector(a);
      const double rank = trace(m_a).real();
      const double filtered = trace(post_map.apply(ch.apply(pre_map.apply(m_a)))).real();
      table.values[TwoTimeStatistics::index(a, x)] = rank > 0.0 ? filtered / rank : 0.0;
    }
  }
  const auto [lo, hi] = std::minmax_element(table.values.begin(), table.values.end());
  table.spread = *hi - *lo;
  table.uniform = table.spread <= tol::kReconstruction;
  return table;
}

double filtered_chsh_value(const KrausChannel& ch, const FilterSpec& pre, const FilterSpec& post,
                           const MeasurementScenario& scen) {
  return chsh_evaluate(
             filtered_two_time_distribution(ch, as_channel(pre), as_channel(post), scen))
      .value;
}

ActivationResult activate(const KrausChannel& ch, const MeasurementScenario& scen,
                          SearchFamily family, std::size_t resolution) {
  if (ch.kind() != ChannelKind::trace_preserving) {
    fail(ErrorCode::invalid_channel, "activation search needs a trace-preserving channel");
  }
  if (resolution < 2) fail(ErrorCode::out_of_range, "resolution must be at least 2");

  ActivationResult result;
  result.family = family;
  result.resolution = resolution;
  result.unfiltered_value = chsh_evaluate(two_time_distribution(ch, scen)).value;

  const SearchOutcome outcome = run_family(ch, scen, family, resolution);
  result.best_pre = outcome.filters.first;
  result.best_post = outcome.filters.second;
  result.best_value = outcome.best.value;
  const SuccessTable n = success_probability(ch, result.best_pre, result.best_post, scen);
  result.success_prob_min = *std::min_element(n.values.begin(), n.values.end());
  result.activated = result.unfiltered_value <= 2.0 + kViolationMargin &&
                     result.best_value > 2.0 + kViolationMargin;
  return result;
}

}  // namespace lgsim
