#include "lgsim/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lgsim/error.hpp"

namespace lgsim {

namespace {

std::size_t outcome_index(int a) {
  if (a == 1) return 0;
  if (a == -1) return 1;
  fail(ErrorCode::out_of_range, "outcome must be +1 or -1, got " + std::to_string(a));
}

std::size_t setting_index(int x) {
  if (x == 1 || x == 2) return static_cast<std::size_t>(x - 1);
  fail(ErrorCode::out_of_range, "setting must be 1 or 2, got " + std::to_string(x));
}

void require_qubit_scenario(const KrausChannel& ch, const MeasurementScenario& scen) {
  for (const auto& obs : scen.t0) {
    if (obs.observable.rows() != ch.input_dim()) {
      fail(ErrorCode::dimension_mismatch, "t0 observables do not match the channel input");
    }
  }
  for (const auto& obs : scen.t1) {
    if (obs.observable.rows() != ch.output_dim()) {
      fail(ErrorCode::dimension_mismatch, "t1 observables do not match the channel output");
    }
  }
}

double born(const ComplexMatrix& effect, const ComplexMatrix& state) {
  return trace(matmul(effect, state)).real();
}

}  // namespace

std::size_t TwoTimeStatistics::index(int a, int b, int x, int y) {
  return ((outcome_index(a) * 2 + outcome_index(b)) * 2 + setting_index(x)) * 2 + setting_index(y);
}

std::size_t TwoTimeStatistics::index(int a, int x) {
  return outcome_index(a) * 2 + setting_index(x);
}

TwoTimeStatistics TwoTimeStatistics::uniform() {
  TwoTimeStatistics s;
  for (int a : kOutcomes) {
    for (int x : kSettings) {
      s.set_outcome_prob(a, x, 0.5);
      s.set_success_prob(a, x, 1.0);
      for (int b : kOutcomes) {
        for (int y : kSettings) s.set_p(a, b, x, y, 0.25);
      }
    }
  }
  return s;
}

void validate_statistics(const TwoTimeStatistics& stats) {
  for (int x : kSettings) {
    for (int y : kSettings) {
      double total = 0.0;
      for (int a : kOutcomes) {
        for (int b : kOutcomes) {
          const double p = stats.p(a, b, x, y);
          if (p < -1e-12 || p > 1.0 + 1e-12) {
            fail(ErrorCode::out_of_range, "probability outside [0,1]: " + std::to_string(p));
          }
          total += p;
        }
      }
      if (std::abs(total - 1.0) > tol::kReconstruction) {
        fail(ErrorCode::out_of_range, "p(.,.|" + std::to_string(x) + "," + std::to_string(y) +
                                          ") sums to " + std::to_string(total));
      }
    }
  }
  for (int a : kOutcomes) {
    for (int x : kSettings) {
      const double n = stats.success_prob(a, x);
      if (n < -1e-12 || n > 1.0 + 1e-12) {
        fail(ErrorCode::out_of_range, "success probability outside [0,1]: " + std::to_string(n));
      }
    }
  }
}

TwoTimeStatistics two_time_distribution(const KrausChannel& ch, const MeasurementScenario& scen) {
  require_qubit_scenario(ch, scen);
  const ComplexMatrix rho0 = maximally_mixed(ch.input_dim()).matrix();

  TwoTimeStatistics stats;
  for (int x : kSettings) {
    const auto& mx = scen.t0[setting_index(x)];
    for (int a : kOutcomes) {
      const ComplexMatrix& m_a = mx.projector(a);
      const ComplexMatrix post_measurement = matmul(matmul(m_a, rho0), m_a);
      const ComplexMatrix evolved = ch.apply(post_measurement);
      stats.set_outcome_prob(a, x, trace(post_measurement).real());
      stats.set_success_prob(a, x, 1.0);
      for (int y : kSettings) {
        const auto& my = scen.t1[setting_index(y)];
        for (int b : kOutcomes) stats.set_p(a, b, x, y, born(my.projector(b), evolved));
      }
    }
  }
  return stats;
}

TwoTimeStatistics filtered_two_time_distribution(const KrausChannel& ch, const KrausChannel& pre,
                                                 const KrausChannel& post,
                                                 const MeasurementScenario& scen) {
  require_qubit_scenario(ch, scen);
  if (pre.output_dim() != ch.input_dim() || post.input_dim() != ch.output_dim() ||
      pre.input_dim() != pre.output_dim() || post.input_dim() != post.output_dim()) {
    fail(ErrorCode::dimension_mismatch, "filters do not match the channel dimensions");
  }
  const double d = static_cast<double>(ch.input_dim());

  TwoTimeStatistics stats;
  for (int x : kSettings) {
    const auto& mx = scen.t0[setting_index(x)];
    for (int a : kOutcomes) {
      const ComplexMatrix& m_a = mx.projector(a);
      // rank of M_a; 1 for every qubit dichotomic observable
      const double rank = trace(m_a).real();
      const ComplexMatrix filtered = post.apply(ch.apply(pre.apply(m_a)));
      const double filtered_trace = trace(filtered).real();
      const double success = rank > 0.0 ? filtered_trace / rank : 0.0;
      if (!(success >= kDegenerateSuccess)) {
        fail(ErrorCode::degenerate_filter,
             "N(" + std::to_string(a) + "|" + std::to_string(x) + ") = " + std::to_string(success));
      }
      stats.set_outcome_prob(a, x, rank / d);
      stats.set_success_prob(a, x, success);
      for (int y : kSettings) {
        const auto& my = scen.t1[setting_index(y)];
        for (int b : kOutcomes) {
          stats.set_p(a, b, x, y, rank * born(my.projector(b), filtered) / (d * filtered_trace));
        }
      }
    }
  }
  return stats;
}

double ChshReport::correlator(int x, int y) const {
  return correlators[setting_index(x) * 2 + setting_index(y)];
}

double correlator(const TwoTimeStatistics& stats, int x, int y) {
  double c = 0.0;
  for (int a : kOutcomes) {
    for (int b : kOutcomes) c += a * b * stats.p(a, b, x, y);
  }
  return c;
}

ChshReport chsh_evaluate(const TwoTimeStatistics& stats) {
  ChshReport report;
  for (int x : kSettings) {
    for (int y : kSettings) {
      report.correlators[setting_index(x) * 2 + setting_index(y)] = correlator(stats, x, y);
    }
  }
  report.value = report.correlator(1, 1) + report.correlator(2, 1) + report.correlator(1, 2) -
                 report.correlator(2, 2);
  report.violated = report.value > 2.0 + kViolationMargin;
  report.nsit_deviation = nsit_check(stats, 0.0).max_deviation;
  return report;
}

std::array<double, 8> chsh_sign_variants(const TwoTimeStatistics& stats) {
  const std::array<double, 4> c{correlator(stats, 1, 1), correlator(stats, 1, 2),
                                correlator(stats, 2, 1), correlator(stats, 2, 2)};
  const double sum = c[0] + c[1] + c[2] + c[3];
  std::array<double, 8> out{};
  for (std::size_t k = 0; k < 4; ++k) {
    out[2 * k] = sum - 2.0 * c[k];
    out[2 * k + 1] = -(sum - 2.0 * c[k]);
  }
  return out;
}

NsitResult nsit_check(const TwoTimeStatistics& stats, double tolerance) {
  double worst = 0.0;
  for (int y : kSettings) {
    for (int b : kOutcomes) {
      const double m1 = stats.p(1, b, 1, y) + stats.p(-1, b, 1, y);
      const double m2 = stats.p(1, b, 2, y) + stats.p(-1, b, 2, y);
      worst = std::max(worst, std::abs(m1 - m2));
    }
  }
  return {worst <= tolerance, worst};
}

bool macrorealism_chsh_check(const TwoTimeStatistics& stats) {
  const NsitResult nsit = nsit_check(stats, 1e-9);
  if (!nsit.satisfied) {
    fail(ErrorCode::signalling_statistics,
         "NSIT violated by " + std::to_string(nsit.max_deviation));
  }
  const auto variants = chsh_sign_variants(stats);
  return std::all_of(variants.begin(), variants.end(),
                     [](double v) { return v <= 2.0 + kViolationMargin; });
}

}  // namespace lgsim
