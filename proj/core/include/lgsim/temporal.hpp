#pragma once

#include <array>
#include <cstddef>

#include "lgsim/quantum.hpp"

namespace lgsim {

// Violation margin added to the macrorealistic bound 2.
inline constexpr double kViolationMargin = 1e-9;
// Conditional success probabilities below this leave the filtered
// statistics undefined.
inline constexpr double kDegenerateSuccess = 1e-12;

// Two-time table p(a,b|x,y) with outcomes a,b in {+1,-1} and settings
// x,y in {1,2}, plus per-(a,x) bookkeeping:
//   outcome_prob(a,x) = p(a|x), the t0 outcome probability;
//   success_prob(a,x) = N(a|x), the probability that the filters succeed
//                       given t0 outcome a for setting x (1 when unfiltered).
class TwoTimeStatistics {
 public:
  double p(int a, int b, int x, int y) const { return table_[index(a, b, x, y)]; }
  void set_p(int a, int b, int x, int y, double value) { table_[index(a, b, x, y)] = value; }

  double outcome_prob(int a, int x) const { return outcome_[index(a, x)]; }
  void set_outcome_prob(int a, int x, double value) { outcome_[index(a, x)] = value; }

  double success_prob(int a, int x) const { return success_[index(a, x)]; }
  void set_success_prob(int a, int x, double value) { success_[index(a, x)] = value; }

  // p = 1/4 everywhere, p(a|x) = 1/2, N = 1.
  static TwoTimeStatistics uniform();

  static std::size_t index(int a, int b, int x, int y);
  static std::size_t index(int a, int x);

 private:
  std::array<double, 16> table_{};
  std::array<double, 4> outcome_{};
  std::array<double, 4> success_{};
};

inline constexpr std::array<int, 2> kOutcomes{+1, -1};
inline constexpr std::array<int, 2> kSettings{1, 2};

// Throws OutOfRange unless every p(.,.|x,y) is a distribution (non-negative
// within 1e-12, sums to 1 within 1e-9) and every N(a|x) lies in [0,1].
void validate_statistics(const TwoTimeStatistics& stats);

// Born-rule statistics with the maximally mixed input I/d and Lueders
// update M rho M at t0.
TwoTimeStatistics two_time_distribution(const KrausChannel& ch, const MeasurementScenario& scen);

// Statistics with stochastic pre/post operations around the channel:
//   p(a,b|x,y) = Tr[M_b L(M_a)] / (d N(a|x)),  N(a|x) = Tr[L(M_a)],
// where L = post o ch o pre. Throws DegenerateFilter if any N(a|x) < 1e-12.
TwoTimeStatistics filtered_two_time_distribution(const KrausChannel& ch, const KrausChannel& pre,
                                                 const KrausChannel& post,
                                                 const MeasurementScenario& scen);

struct ChshReport {
  std::array<double, 4> correlators{};  // C_{x,y} at [2*(x-1) + (y-1)]
  double value = 0.0;                   // C11 + C21 + C12 - C22
  bool violated = false;                // value > 2 + 1e-9
  double nsit_deviation = 0.0;

  double correlator(int x, int y) const;
};

double correlator(const TwoTimeStatistics& stats, int x, int y);
ChshReport chsh_evaluate(const TwoTimeStatistics& stats);

// All eight variants: +-(C11 + C12 + C21 + C22 - 2 C_k) for each k.
std::array<double, 8> chsh_sign_variants(const TwoTimeStatistics& stats);

struct NsitResult {
  bool satisfied = false;
  double max_deviation = 0.0;
};

// Max over b, y and x != x' of |sum_a p(a,b|x,y) - sum_a p(a,b|x',y)|.
NsitResult nsit_check(const TwoTimeStatistics& stats, double tolerance);

// For two settings and two outcomes under NSIT, a macrorealistic model
// exists iff every CHSH sign variant is within the bound (Fine's theorem).
// Throws SignallingStatistics when NSIT fails at 1e-9.
bool macrorealism_chsh_check(const TwoTimeStatistics& stats);

}  // namespace lgsim
