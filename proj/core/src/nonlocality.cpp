#include "lgsim/nonlocality.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "lgsim/error.hpp"
#include "search.hpp"

namespace lgsim {

namespace {

constexpr double kPi = std::numbers::pi;

const std::array<ComplexMatrix, 3>& paulis() {
  static const std::array<ComplexMatrix, 3> p{pauli(Pauli::x), pauli(Pauli::y), pauli(Pauli::z)};
  return p;
}

void require_two_qubit(const ComplexMatrix& m) {
  if (m.rows() != 4 || m.cols() != 4) {
    fail(ErrorCode::dimension_mismatch, "expected a two-qubit (4x4) state");
  }
}

// Tr[rho (A (x) B)] for 2x2 A, B without forming the Kronecker product.
double expectation(const ComplexMatrix& rho, const ComplexMatrix& a, const ComplexMatrix& b) {
  Complex sum{};
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      for (std::size_t k = 0; k < 2; ++k) {
        for (std::size_t l = 0; l < 2; ++l) {
          // (A (x) B)_{(ik),(jl)} rho_{(jl),(ik)}
          sum += a(i, j) * b(k, l) * rho(j * 2 + l, i * 2 + k);
        }
      }
    }
  }
  return sum.real();
}

Eigen::Matrix3d correlation_of(const ComplexMatrix& rho) {
  Eigen::Matrix3d t;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          expectation(rho, paulis()[i], paulis()[j]);
    }
  }
  return t;
}

double horodecki_value(const ComplexMatrix& normalized_rho) {
  const Eigen::Matrix3d t = correlation_of(normalized_rho);
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(t.transpose() * t);
  const auto& ev = solver.eigenvalues();  // ascending
  return 2.0 * std::sqrt(std::max(0.0, ev(2) + ev(1)));
}

// Unnormalized filtered state and its trace.
std::pair<ComplexMatrix, double> filter_raw(const ComplexMatrix& rho, const ComplexMatrix& ka,
                                            const ComplexMatrix& kb) {
  const ComplexMatrix k = kron(ka, kb);
  ComplexMatrix out = matmul(matmul(k, rho), adjoint(k));
  const double n = trace(out).real();
  return {std::move(out), n};
}

DichotomicObservable axis_observable(const Eigen::Vector3d& n) {
  const Eigen::Vector3d u = n.normalized();
  return observable_from_bloch({u(0), u(1), u(2)});
}

// Any unit vector orthogonal to v.
Eigen::Vector3d orthogonal_to(const Eigen::Vector3d& v) {
  Eigen::Vector3d trial = std::abs(v(0)) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  return (trial - trial.dot(v) * v).normalized();
}

DichotomicObservable transposed(const DichotomicObservable& obs) {
  return {transpose(obs.observable), transpose(obs.projector_plus),
          transpose(obs.projector_minus)};
}

}  // namespace

CorrelationMatrix correlation_matrix(const DensityMatrix& rho) {
  require_two_qubit(rho.matrix());
  if (!rho.normalized()) fail(ErrorCode::out_of_range, "correlation_matrix needs a unit-trace state");
  const Eigen::Matrix3d t = correlation_of(rho.matrix());
  CorrelationMatrix out;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      out.t[i][j] = t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return out;
}

double chsh_maximum(const DensityMatrix& rho) {
  require_two_qubit(rho.matrix());
  if (!rho.normalized()) fail(ErrorCode::out_of_range, "chsh_maximum needs a unit-trace state");
  return horodecki_value(rho.matrix());
}

ChshMeasurements optimal_chsh_measurements(const DensityMatrix& rho) {
  require_two_qubit(rho.matrix());
  const Eigen::Matrix3d t = correlation_of(rho.matrix());
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(t.transpose() * t);
  const Eigen::Vector3d c1 = solver.eigenvectors().col(2);
  const Eigen::Vector3d c2 = solver.eigenvectors().col(1);
  const Eigen::Vector3d tc1 = t * c1;
  const Eigen::Vector3d tc2 = t * c2;
  const double n1 = tc1.norm();
  const double n2 = tc2.norm();
  const double angle = std::atan2(n2, n1);

  const Eigen::Vector3d a1 = n1 > 1e-15 ? Eigen::Vector3d(tc1 / n1) : Eigen::Vector3d::UnitZ();
  const Eigen::Vector3d a2 = n2 > 1e-15 ? Eigen::Vector3d(tc2 / n2) : orthogonal_to(a1);
  const Eigen::Vector3d b1 = std::cos(angle) * c1 + std::sin(angle) * c2;
  const Eigen::Vector3d b2 = std::cos(angle) * c1 - std::sin(angle) * c2;
  return {{axis_observable(a1), axis_observable(a2)}, {axis_observable(b1), axis_observable(b2)}};
}

TwoTimeStatistics spatial_statistics(const DensityMatrix& rho,
                                     const std::array<DichotomicObservable, 2>& alice,
                                     const std::array<DichotomicObservable, 2>& bob) {
  require_two_qubit(rho.matrix());
  TwoTimeStatistics stats;
  for (int x : kSettings) {
    const auto& ax = alice[static_cast<std::size_t>(x - 1)];
    for (int a : kOutcomes) {
      double marginal = 0.0;
      for (int y : kSettings) {
        const auto& by = bob[static_cast<std::size_t>(y - 1)];
        for (int b : kOutcomes) {
          const double p = expectation(rho.matrix(), ax.projector(a), by.projector(b));
          stats.set_p(a, b, x, y, p);
          if (y == 1) marginal += p;
        }
      }
      stats.set_outcome_prob(a, x, marginal);
      stats.set_success_prob(a, x, 1.0);
    }
  }
  return stats;
}

LocalFilterResult apply_local_filters(const DensityMatrix& rho, const FilterSpec& fa,
                                      const FilterSpec& fb) {
  require_two_qubit(rho.matrix());
  auto [out, n] = filter_raw(rho.matrix(), fa.kraus, fb.kraus);
  if (!(n >= kDegenerateSuccess)) {
    fail(ErrorCode::degenerate_filter, "local filter success probability " + std::to_string(n));
  }
  return {DensityMatrix(out * (1.0 / n)), n};
}

NonlocalityVerdict hidden_nonlocality_search(const DensityMatrix& rho, std::size_t resolution) {
  if (resolution < 2) fail(ErrorCode::out_of_range, "resolution must be at least 2");
  const DensityMatrix state = rho.normalize();

  NonlocalityVerdict verdict;
  verdict.resolution = resolution;
  verdict.chsh_max = chsh_maximum(state);
  verdict.local = verdict.chsh_max <= 2.0 + kViolationMargin;
  verdict.best_filtered_chsh = verdict.chsh_max;
  verdict.witness_success_probability = 1.0;
  if (!verdict.local) {
    verdict.strongly_breaking_candidate = false;
    return verdict;
  }

  auto decode = [](const std::vector<double>& p) {
    return std::pair{generic_filter(p[0], {p[1], p[2], p[3]}),
                     generic_filter(p[4], {p[5], p[6], p[7]})};
  };
  const detail::Objective objective = [&](const std::vector<double>& p) -> std::optional<double> {
    const auto [fa, fb] = decode(p);
    const auto [raw, n] = filter_raw(state.matrix(), fa.kraus, fb.kraus);
    if (!(n >= kDegenerateSuccess)) return std::nullopt;
    return horodecki_value(raw * (1.0 / n));
  };
  const detail::TieBreak tie = [](const std::vector<double>& p) { return p[0] + p[4]; };

  const auto losses = detail::linspace(0.0, kMaxSearchLoss, resolution);
  // Filters are applied before the measurement, so local unitaries after
  // them are irrelevant; the axis set covers the diagonal filter shapes.
  const std::vector<std::array<double, 2>> axes{
      {0.0, 0.0}, {kPi, 0.0}, {kPi / 2, 0.0}, {kPi / 2, kPi}, {kPi / 2, kPi / 2}, {kPi / 2, 3 * kPi / 2}};
  std::vector<std::vector<double>> grid;
  grid.reserve(losses.size() * losses.size() * axes.size() * axes.size());
  for (double la : losses) {
    for (const auto& oa : axes) {
      for (double lb : losses) {
        for (const auto& ob : axes) grid.push_back({la, oa[0], oa[1], 0.0, lb, ob[0], ob[1], 0.0});
      }
    }
  }

  const auto grid_best = detail::best_of(grid, objective, tie);
  if (!grid_best) fail(ErrorCode::no_feasible_point, "every filter pair is degenerate");
  const double loss_step = kMaxSearchLoss / static_cast<double>(resolution - 1);
  const detail::Bounds bounds{{0, 0, 0, 0, 0, 0, 0, 0},
                              {kMaxSearchLoss, kPi, 2 * kPi, 2 * kPi, kMaxSearchLoss, kPi, 2 * kPi,
                               2 * kPi}};
  const auto best = detail::refine(*grid_best,
                                   {loss_step, kPi / 4, kPi / 4, kPi / 4, loss_step, kPi / 4,
                                    kPi / 4, kPi / 4},
                                   bounds, objective, tie);

  auto filters = decode(best.params);
  verdict.best_filtered_chsh = best.value;
  verdict.witness_success_probability =
      filter_raw(state.matrix(), filters.first.kraus, filters.second.kraus).second;
  verdict.hidden_nonlocal = best.value > 2.0 + kViolationMargin;
  if (verdict.hidden_nonlocal) verdict.witness_filters = std::move(filters);
  verdict.strongly_breaking_candidate = !verdict.hidden_nonlocal;
  return verdict;
}

NonlocalityVerdict strongly_breaking_assessment(const KrausChannel& ch, std::size_t resolution) {
  if (ch.kind() != ChannelKind::trace_preserving || ch.input_dim() != 2 || ch.output_dim() != 2) {
    fail(ErrorCode::invalid_channel, "strongly-breaking assessment needs a qubit CPTP channel");
  }
  NonlocalityVerdict verdict = hidden_nonlocality_search(choi_of_channel(ch).state, resolution);
  verdict.strongly_breaking_candidate = verdict.local && !verdict.hidden_nonlocal;
  return verdict;
}

double temporal_spatial_consistency(const KrausChannel& ch, double loss,
                                    const MeasurementScenario& scen) {
  const auto [pre, post] = sppo_pair(loss);
  const SuccessTable n = success_probability(ch, pre, post, scen);
  if (!n.uniform) {
    fail(ErrorCode::non_uniform_normalization,
         "N(a|x) spread " + std::to_string(n.spread) + " exceeds 1e-9");
  }
  const double temporal = filtered_chsh_value(ch, pre, post, scen);

  // (1 (x) X)|Phi+> = (X^T (x) 1)|Phi+>: the pre-filter and the t0
  // measurements move to the input side transposed.
  const FilterSpec pre_on_input{transpose(pre.kraus), FilterRole::pre};
  const LocalFilterResult filtered =
      apply_local_filters(choi_of_channel(ch).state, pre_on_input, post);
  const std::array<DichotomicObservable, 2> alice{transposed(scen.t0[0]), transposed(scen.t0[1])};
  const double spatial = chsh_evaluate(spatial_statistics(filtered.state, alice, scen.t1)).value;
  return std::abs(temporal - spatial);
}

}  // namespace lgsim
