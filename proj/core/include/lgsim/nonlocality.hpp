#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <utility>

#include "lgsim/filters.hpp"
#include "lgsim/quantum.hpp"
#include "lgsim/temporal.hpp"

namespace lgsim {

// t_ij = Tr[rho (sigma_i (x) sigma_j)], i, j over x, y, z.
struct CorrelationMatrix {
  std::array<std::array<double, 3>, 3> t{};
};

CorrelationMatrix correlation_matrix(const DensityMatrix& rho);

// Horodecki: 2 sqrt(l1 + l2) with l1 >= l2 the top eigenvalues of t^T t.
double chsh_maximum(const DensityMatrix& rho);

struct ChshMeasurements {
  std::array<DichotomicObservable, 2> alice;
  std::array<DichotomicObservable, 2> bob;
};

// Measurements that reach chsh_maximum on rho.
ChshMeasurements optimal_chsh_measurements(const DensityMatrix& rho);

// p(a,b|x,y) = Tr[(A_a|x (x) B_b|y) rho] for a normalized two-qubit state.
TwoTimeStatistics spatial_statistics(const DensityMatrix& rho,
                                     const std::array<DichotomicObservable, 2>& alice,
                                     const std::array<DichotomicObservable, 2>& bob);

struct LocalFilterResult {
  DensityMatrix state;  // normalized
  double success_probability = 0.0;
};

// (K_A (x) K_B) rho (K_A (x) K_B)^dagger / N. Throws DegenerateFilter if
// N < 1e-12.
LocalFilterResult apply_local_filters(const DensityMatrix& rho, const FilterSpec& fa,
                                      const FilterSpec& fb);

// Resolution-qualified: a negative search result means no violation was
// found in the searched family at this resolution, not a proof.
struct NonlocalityVerdict {
  double chsh_max = 0.0;
  bool local = true;
  bool hidden_nonlocal = false;
  std::optional<std::pair<FilterSpec, FilterSpec>> witness_filters;
  bool strongly_breaking_candidate = false;
  double best_filtered_chsh = 0.0;
  double witness_success_probability = 0.0;
  std::size_t resolution = 0;
  const char* search_family = "generic_filter";
};

NonlocalityVerdict hidden_nonlocality_search(const DensityMatrix& rho, std::size_t resolution = 21);

// Hidden-nonlocality test on the Choi state. A violation certifies the
// channel is not strongly CHSH nonlocality-breaking.
NonlocalityVerdict strongly_breaking_assessment(const KrausChannel& ch,
                                                std::size_t resolution = 21);

// |B_temporal - B_spatial| for SPPOs of loss D around ch, where the spatial
// value uses the filtered Choi state with t0 observables transposed on the
// input side. Throws NonUniformN if N(a|x) is not uniform within 1e-9.
double temporal_spatial_consistency(const KrausChannel& ch, double loss,
                                    const MeasurementScenario& scen);

}  // namespace lgsim
