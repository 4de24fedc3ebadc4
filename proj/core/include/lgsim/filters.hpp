#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <utility>

#include "lgsim/quantum.hpp"
#include "lgsim/temporal.hpp"

namespace lgsim {

enum class FilterRole { pre, post, generic };

std::string_view to_string(FilterRole role) noexcept;

// A single-Kraus trace-nonincreasing map K . K^dagger.
struct FilterSpec {
  ComplexMatrix kraus;
  FilterRole label = FilterRole::generic;
};

// Throws DimensionMismatch unless K is 2x2 and OutOfRange unless
// 1 - K^dagger K is PSD within 1e-10.
FilterSpec make_filter(ComplexMatrix kraus, FilterRole label);

FilterSpec identity_filter(FilterRole label);

// K_pre = |0><0| + sqrt(1-D)|1><1|,  K_post = sqrt(1-D)|0><0| + |1><1|.
std::pair<FilterSpec, FilterSpec> sppo_pair(double loss);

// The filter as a one-operator trace-nonincreasing channel.
KrausChannel as_channel(const FilterSpec& f);

// Two-outcome instrument {K, sqrt(1 - K^dagger K)}; K is the success branch.
KrausChannel complete_to_channel(const FilterSpec& f);

// Orientation of a generic filter. theta in [0, pi], phi and lambda in
// [0, 2 pi].
struct FilterAngles {
  double theta = 0.0;
  double phi = 0.0;
  double lambda = 0.0;
};

// K = R diag(1, sqrt(1-loss)) R^dagger Rz(lambda), R = Rz(phi) Ry(theta).
// The fully transmitted state has Bloch direction (theta, phi); its
// orthogonal partner is attenuated. Zero angles give the K_pre shape and
// theta = pi the K_post shape.
FilterSpec generic_filter(double loss, const FilterAngles& angles,
                          FilterRole label = FilterRole::generic);

struct SuccessTable {
  std::array<double, 4> values{};  // N(a|x), indexed like TwoTimeStatistics::index(a, x)
  double spread = 0.0;             // max - min over (a, x)
  bool uniform = false;            // spread <= 1e-9

  double at(int a, int x) const { return values[TwoTimeStatistics::index(a, x)]; }
};

SuccessTable success_probability(const KrausChannel& ch, const FilterSpec& pre,
                                 const FilterSpec& post, const MeasurementScenario& scen);

enum class SearchFamily {
  sppo,              // K_pre(D), K_post(D) with one shared D
  sppo_independent,  // K_pre(D_pre), K_post(D_post)
  generic,           // generic_filter on both sides, 8 parameters
};

std::string_view to_string(SearchFamily family) noexcept;

// Largest loss the searches use; D = 1 collapses the filters to rank one.
inline constexpr double kMaxSearchLoss = 1.0 - 1e-6;

struct ActivationResult {
  FilterSpec best_pre;
  FilterSpec best_post;
  double best_value = 0.0;
  double unfiltered_value = 0.0;
  bool activated = false;
  double success_prob_min = 0.0;
  SearchFamily family = SearchFamily::sppo;
  std::size_t resolution = 0;
};

// Grid search followed by coordinate-descent refinement (step halving, at
// most 40 halvings, stop below 1e-6). Degenerate points are skipped; ties go
// to the smaller total loss. Wider families are seeded with the optimum of
// the narrower ones, so their best value never falls below it.
ActivationResult activate(const KrausChannel& ch, const MeasurementScenario& scen,
                          SearchFamily family, std::size_t resolution = 21);

// CHSH value of the filtered statistics for one filter pair.
double filtered_chsh_value(const KrausChannel& ch, const FilterSpec& pre, const FilterSpec& post,
                           const MeasurementScenario& scen);

}  // namespace lgsim
