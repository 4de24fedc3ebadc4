#include "lgsim/expsim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "lgsim/error.hpp"

namespace lgsim {

namespace {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t replicate, std::uint32_t purpose) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(replicate),
                    static_cast<std::uint32_t>(replicate >> 32), purpose};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

std::mt19937_64 make_engine(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return std::mt19937_64(seq);
}

double uniform_pm(std::mt19937_64& rng, double width) {
  if (width == 0.0) return 0.0;
  return std::uniform_real_distribution<double>(-width, width)(rng);
}

// Amplitude damping with the coherence of the recombined V component scaled
// by `visibility`; the lost coherence becomes a dephasing branch on |1>.
KrausChannel damped_with_visibility(double v, double visibility) {
  std::vector<ComplexMatrix> ops;
  ops.push_back(ComplexMatrix::diagonal({1.0, visibility * std::sqrt(1.0 - v)}));
  ComplexMatrix jump(2, 2);
  jump(0, 1) = std::sqrt(v);
  ops.push_back(std::move(jump));
  const double dephased = (1.0 - visibility * visibility) * (1.0 - v);
  if (dephased > 0.0) ops.push_back(ComplexMatrix::diagonal({0.0, std::sqrt(dephased)}));
  return KrausChannel(std::move(ops), ChannelKind::trace_preserving);
}

}  // namespace

NoiseModel NoiseModel::ideal() { return {0.0, 0.0, 0.0, 1.0, 1.0}; }

void NoiseModel::validate() const {
  if (waveplate_angle_sigma < 0.0 || d_relative_sigma < 0.0 || incident_polarization_sigma < 0.0) {
    fail(ErrorCode::out_of_range, "noise widths must be non-negative");
  }
  if (!(visibility_min >= 0.0 && visibility_min <= visibility_max && visibility_max <= 1.0)) {
    fail(ErrorCode::out_of_range, "visibility interval must lie inside [0, 1]");
  }
}

PerturbedSetup perturbed_channel(double v, double loss, const NoiseModel& noise,
                                 std::uint64_t seed) {
  if (!(v >= 0.0 && v <= 1.0)) fail(ErrorCode::out_of_range, "v must lie in [0, 1]");
  if (!(loss >= 0.0 && loss <= 1.0)) fail(ErrorCode::out_of_range, "D must lie in [0, 1]");
  noise.validate();

  std::mt19937_64 rng = make_engine(seed);
  // sin 2theta = sqrt(v)
  const double theta = std::clamp(0.5 * std::asin(std::sqrt(v)) +
                                      uniform_pm(rng, noise.waveplate_angle_sigma),
                                  0.0, std::numbers::pi / 2.0);
  const double s = std::sin(2.0 * theta);
  const double v_eff = noise.waveplate_angle_sigma == 0.0 ? v : std::clamp(s * s, 0.0, 1.0);

  const double d_pre = std::clamp(loss * (1.0 + uniform_pm(rng, noise.d_relative_sigma)), 0.0, 1.0);
  const double d_post = std::clamp(loss * (1.0 + uniform_pm(rng, noise.d_relative_sigma)), 0.0, 1.0);
  const double offset = uniform_pm(rng, noise.incident_polarization_sigma);
  const double visibility =
      noise.visibility_max > noise.visibility_min
          ? std::uniform_real_distribution<double>(noise.visibility_min, noise.visibility_max)(rng)
          : noise.visibility_min;

  return PerturbedSetup{damped_with_visibility(v_eff, visibility), sppo_pair(d_pre).first,
                        sppo_pair(d_post).second, v_eff, visibility, offset};
}

MeasurementScenario misaligned_scenario(const MeasurementScenario& scen, double offset) {
  if (offset == 0.0) return scen;
  // exp(-i offset sigma_y)
  const double c = std::cos(offset);
  const double s = std::sin(offset);
  const ComplexMatrix rotation{{c, -s}, {s, c}};
  return {{conjugate(scen.t0[0], rotation), conjugate(scen.t0[1], rotation)}, scen.t1};
}

ShotEstimate sample_statistics(const TwoTimeStatistics& stats, std::size_t shots_per_setting,
                               std::uint64_t seed) {
  if (shots_per_setting < 1) fail(ErrorCode::out_of_range, "need at least one shot per setting");
  std::mt19937_64 rng = make_engine(seed);

  ShotEstimate est;
  est.shots_per_setting = shots_per_setting;
  const double n = static_cast<double>(shots_per_setting);
  std::array<double, 4> c{};
  double variance = 0.0;

  for (int x : kSettings) {
    for (int y : kSettings) {
      constexpr std::array<std::array<int, 2>, 4> cells{{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};
      std::array<double, 4> probs{};
      for (std::size_t k = 0; k < 4; ++k) {
        probs[k] = std::max(0.0, stats.p(cells[k][0], cells[k][1], x, y));
      }
      // Multinomial draw as a chain of conditional binomials.
      std::uint64_t remaining = shots_per_setting;
      double mass = probs[0] + probs[1] + probs[2] + probs[3];
      double sum_ab = 0.0;
      for (std::size_t k = 0; k < 4; ++k) {
        std::uint64_t drawn = remaining;
        if (k < 3) {
          const double q = mass > 0.0 ? std::clamp(probs[k] / mass, 0.0, 1.0) : 0.0;
          drawn = std::binomial_distribution<std::uint64_t>(remaining, q)(rng);
        }
        est.set_count(cells[k][0], cells[k][1], x, y, drawn);
        sum_ab += cells[k][0] * cells[k][1] * static_cast<double>(drawn);
        remaining -= drawn;
        mass -= probs[k];
      }
      const double corr = sum_ab / n;
      c[static_cast<std::size_t>((x - 1) * 2 + (y - 1))] = corr;
      variance += std::max(0.0, 1.0 - corr * corr) / n;
    }
  }
  est.b_estimate = c[0] + c[2] + c[1] - c[3];
  est.std_error = std::sqrt(variance);
  return est;
}

ExperimentPoint experiment_point(double v, double loss, bool filtered, std::size_t shots,
                                 std::size_t replicates, const NoiseModel& noise,
                                 std::uint64_t seed, const MeasurementScenario& scen) {
  if (replicates < 1) fail(ErrorCode::out_of_range, "need at least one replicate");
  ExperimentPoint point;
  point.replicate_values.reserve(replicates);
  for (std::size_t r = 0; r < replicates; ++r) {
    const PerturbedSetup setup =
        perturbed_channel(v, filtered ? loss : 0.0, noise, derive_seed(seed, r, 0));
    const MeasurementScenario frame = misaligned_scenario(scen, setup.polarization_offset);
    const TwoTimeStatistics stats =
        filtered ? filtered_two_time_distribution(setup.channel, as_channel(setup.pre),
                                                  as_channel(setup.post), frame)
                 : two_time_distribution(setup.channel, frame);
    point.replicate_values.push_back(
        sample_statistics(stats, shots, derive_seed(seed, r, 1)).b_estimate);
  }

  const double count = static_cast<double>(replicates);
  double mean = 0.0;
  for (double b : point.replicate_values) mean += b;
  mean /= count;
  double ss = 0.0;
  for (double b : point.replicate_values) ss += (b - mean) * (b - mean);
  point.mean_b = mean;
  point.error_bar = replicates > 1 ? std::sqrt(ss / (count - 1.0)) : 0.0;
  return point;
}

}  // namespace lgsim
