#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <vector>

#include "lgsim/filters.hpp"
#include "lgsim/quantum.hpp"
#include "lgsim/temporal.hpp"

namespace lgsim {

// Instrumental imperfections of the photonic setup. Every error is drawn
// uniformly from its +- interval.
struct NoiseModel {
  double waveplate_angle_sigma = std::numbers::pi / 180.0;        // rad
  double d_relative_sigma = 0.02;                                  // fraction of D
  double incident_polarization_sigma = std::numbers::pi / 180.0;  // rad
  double visibility_min = 0.96;
  double visibility_max = 0.98;

  static NoiseModel ideal();
  // OutOfRange on negative widths or a visibility interval outside [0,1].
  void validate() const;
};

struct PerturbedSetup {
  KrausChannel channel;
  FilterSpec pre;
  FilterSpec post;
  double effective_v = 0.0;           // sin^2 2theta after the waveplate error
  double visibility = 1.0;
  double polarization_offset = 0.0;   // rad, rotation of the t0 frame
};

// Deterministic in `seed`. The channel is amplitude damping at the perturbed
// waveplate angle with the recombined coherence scaled by the visibility.
PerturbedSetup perturbed_channel(double v, double loss, const NoiseModel& noise,
                                 std::uint64_t seed);

// Rotates the t0 preparation/measurement frame by a linear-polarization
// misalignment of `offset` radians (a Bloch rotation by 2*offset about y).
MeasurementScenario misaligned_scenario(const MeasurementScenario& scen, double offset);

class ShotEstimate {
 public:
  double b_estimate = 0.0;
  double std_error = 0.0;
  std::size_t shots_per_setting = 0;

  std::uint64_t count(int a, int b, int x, int y) const {
    return counts_[TwoTimeStatistics::index(a, b, x, y)];
  }
  void set_count(int a, int b, int x, int y, std::uint64_t n) {
    counts_[TwoTimeStatistics::index(a, b, x, y)] = n;
  }

 private:
  std::array<std::uint64_t, 16> counts_{};
};

// Multinomial coincidence counts per setting pair; std_error propagates
// Var C = (1 - C^2)/n per empirical correlator in quadrature.
ShotEstimate sample_statistics(const TwoTimeStatistics& stats, std::size_t shots_per_setting,
                               std::uint64_t seed);

struct ExperimentPoint {
  double mean_b = 0.0;
  double error_bar = 0.0;  // standard deviation across replicates
  std::vector<double> replicate_values;
};

// Independent perturbed-channel plus sampling runs; replicate r uses seeds
// derived from (seed, r).
ExperimentPoint experiment_point(double v, double loss, bool filtered, std::size_t shots,
                                 std::size_t replicates, const NoiseModel& noise,
                                 std::uint64_t seed,
                                 const MeasurementScenario& scen = canonical_scenario());

}  // namespace lgsim
