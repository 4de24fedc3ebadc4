#include "lgsim/quantum.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lgsim/error.hpp"

namespace lgsim {

namespace {

constexpr Complex kI{0.0, 1.0};

double real_trace(const ComplexMatrix& m) { return trace(m).real(); }

void check_completeness(const std::vector<ComplexMatrix>& ops, ChannelKind kind) {
  const std::size_t d_in = ops.front().cols();
  ComplexMatrix sum(d_in, d_in);
  for (const auto& k : ops) sum += matmul(adjoint(k), k);
  const ComplexMatrix defect = ComplexMatrix::identity(d_in) - sum;

  if (kind == ChannelKind::trace_preserving) {
    const double dev = max_abs_diff(sum, ComplexMatrix::identity(d_in));
    if (dev > tol::kReconstruction) {
      fail(ErrorCode::invalid_channel,
           "sum K^dagger K deviates from identity by " + std::to_string(dev));
    }
    return;
  }
  if (!is_psd(defect, tol::kStructure)) {
    fail(ErrorCode::invalid_channel, "1 - sum K^dagger K is not positive semidefinite");
  }
}

}  // namespace

ComplexMatrix pauli(Pauli which) {
  switch (which) {
    case Pauli::identity: return ComplexMatrix::identity(2);
    case Pauli::x: return ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}};
    case Pauli::y: return ComplexMatrix{{0.0, -kI}, {kI, 0.0}};
    case Pauli::z: return ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}};
  }
  fail(ErrorCode::out_of_range, "unknown Pauli label");
}

ComplexMatrix bloch_operator(const BlochVector& n) {
  return n[0] * pauli(Pauli::x) + n[1] * pauli(Pauli::y) + n[2] * pauli(Pauli::z);
}

const ComplexMatrix& DichotomicObservable::projector(int outcome) const {
  if (outcome == 1) return projector_plus;
  if (outcome == -1) return projector_minus;
  fail(ErrorCode::out_of_range, "outcome must be +1 or -1, got " + std::to_string(outcome));
}

DichotomicObservable observable_from_bloch(const BlochVector& n) {
  const double norm = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
  if (std::abs(norm - 1.0) > tol::kReconstruction) {
    fail(ErrorCode::not_unit_vector, "Bloch vector norm " + std::to_string(norm));
  }
  const ComplexMatrix ns = bloch_operator(n);
  const ComplexMatrix id = ComplexMatrix::identity(2);
  return {ns, 0.5 * (id + ns), 0.5 * (id - ns)};
}

DichotomicObservable observable_from_projector(const ComplexMatrix& projector_plus) {
  if (!is_hermitian(projector_plus) ||
      max_abs_diff(matmul(projector_plus, projector_plus), projector_plus) > tol::kStructure) {
    fail(ErrorCode::not_hermitian, "observable_from_projector: not an orthogonal projector");
  }
  const ComplexMatrix id = ComplexMatrix::identity(projector_plus.rows());
  const ComplexMatrix minus = id - projector_plus;
  return {projector_plus - minus, projector_plus, minus};
}

DichotomicObservable conjugate(const DichotomicObservable& obs, const ComplexMatrix& unitary) {
  const ComplexMatrix u_dag = adjoint(unitary);
  auto conj = [&](const ComplexMatrix& m) { return matmul(matmul(unitary, m), u_dag); };
  return {conj(obs.observable), conj(obs.projector_plus), conj(obs.projector_minus)};
}

const MeasurementScenario& canonical_scenario() {
  static const MeasurementScenario scenario = [] {
    const double h = 1.0 / std::numbers::sqrt2;
    return MeasurementScenario{
        {observable_from_bloch({1.0, 0.0, 0.0}), observable_from_bloch({0.0, 1.0, 0.0})},
        {observable_from_bloch({h, h, 0.0}), observable_from_bloch({h, -h, 0.0})},
    };
  }();
  return scenario;
}

DensityMatrix::DensityMatrix(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
  if (!matrix_.is_square()) fail(ErrorCode::not_square, "density matrix must be square");
  if (!is_hermitian(matrix_)) fail(ErrorCode::not_hermitian, "density matrix must be Hermitian");
  if (!is_psd(matrix_)) fail(ErrorCode::not_psd, "density matrix has negative eigenvalues");
  normalized_ = std::abs(real_trace(matrix_) - 1.0) <= tol::kReconstruction;
}

double DensityMatrix::trace() const { return real_trace(matrix_); }

DensityMatrix DensityMatrix::normalize() const {
  const double tr = trace();
  if (tr < 1e-12) {
    fail(ErrorCode::degenerate_filter, "cannot normalize a state with trace " + std::to_string(tr));
  }
  return DensityMatrix(matrix_ * (1.0 / tr));
}

DensityMatrix maximally_mixed(std::size_t d) {
  if (d == 0) fail(ErrorCode::out_of_range, "dimension must be at least 1");
  return DensityMatrix(ComplexMatrix::identity(d) * (1.0 / static_cast<double>(d)));
}

DensityMatrix pure_state(std::span<const Complex> ket) {
  return DensityMatrix(ComplexMatrix::outer(ket, ket));
}

KrausChannel::KrausChannel(std::vector<ComplexMatrix> kraus_ops, ChannelKind kind)
    : ops_(std::move(kraus_ops)), kind_(kind) {
  if (ops_.empty()) fail(ErrorCode::invalid_channel, "channel needs at least one Kraus operator");
  for (const auto& k : ops_) {
    if (k.rows() != ops_.front().rows() || k.cols() != ops_.front().cols()) {
      fail(ErrorCode::invalid_channel, "Kraus operators must share one shape");
    }
  }
  check_completeness(ops_, kind_);
}

ComplexMatrix KrausChannel::apply(const ComplexMatrix& x) const {
  if (x.rows() != input_dim() || x.cols() != input_dim()) {
    fail(ErrorCode::dimension_mismatch, "channel input must be " + std::to_string(input_dim()) +
                                            "x" + std::to_string(input_dim()));
  }
  ComplexMatrix out(output_dim(), output_dim());
  for (const auto& k : ops_) out += matmul(matmul(k, x), adjoint(k));
  return out;
}

DensityMatrix apply_channel(const KrausChannel& ch, const DensityMatrix& rho) {
  return DensityMatrix(ch.apply(rho.matrix()));
}

KrausChannel compose(const KrausChannel& outer, const KrausChannel& inner) {
  if (outer.input_dim() != inner.output_dim()) {
    fail(ErrorCode::dimension_mismatch, "compose: inner output dimension " +
                                            std::to_string(inner.output_dim()) +
                                            " vs outer input " + std::to_string(outer.input_dim()));
  }
  std::vector<ComplexMatrix> ops;
  ops.reserve(outer.kraus_ops().size() * inner.kraus_ops().size());
  for (const auto& ko : outer.kraus_ops()) {
    for (const auto& ki : inner.kraus_ops()) ops.push_back(matmul(ko, ki));
  }
  const bool tp = outer.kind() == ChannelKind::trace_preserving &&
                  inner.kind() == ChannelKind::trace_preserving;
  return KrausChannel(std::move(ops),
                      tp ? ChannelKind::trace_preserving : ChannelKind::trace_nonincreasing);
}

KrausChannel identity_channel(std::size_t d) {
  return KrausChannel({ComplexMatrix::identity(d)}, ChannelKind::trace_preserving);
}

KrausChannel amplitude_damping(double v) {
  if (!(v >= 0.0 && v <= 1.0)) {
    fail(ErrorCode::out_of_range, "amplitude damping v must lie in [0, 1], got " + std::to_string(v));
  }
  ComplexMatrix e1 = ComplexMatrix::diagonal({1.0, std::sqrt(1.0 - v)});
  ComplexMatrix e2(2, 2);
  e2(0, 1) = std::sqrt(v);
  return KrausChannel({std::move(e1), std::move(e2)}, ChannelKind::trace_preserving);
}

KrausChannel hwp_interferometer_channel(double theta) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi / 2.0)) {
    fail(ErrorCode::out_of_range, "waveplate angle must lie in [0, pi/2], got " +
                                      std::to_string(theta));
  }
  // V arm: transmitted amplitude cos 2theta stays V, sin 2theta converts to H.
  // The two arms recombine incoherently, so the converted part is its own
  // Kraus branch.
  ComplexMatrix stay = ComplexMatrix::diagonal({1.0, std::abs(std::cos(2.0 * theta))});
  ComplexMatrix convert(2, 2);
  convert(0, 1) = std::sin(2.0 * theta);
  return KrausChannel({std::move(stay), std::move(convert)}, ChannelKind::trace_preserving);
}

ChoiState choi_of_channel(const KrausChannel& ch) {
  const std::size_t d = ch.input_dim();
  const std::size_t d_out = ch.output_dim();
  ComplexMatrix rho(d * d_out, d * d_out);
  // (1 (x) E)|Phi+><Phi+| = (1/d) sum_ij |i><j| (x) E(|i><j|)
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      ComplexMatrix unit(d, d);
      unit(i, j) = 1.0;
      const ComplexMatrix block = ch.apply(unit);
      for (std::size_t r = 0; r < d_out; ++r) {
        for (std::size_t c = 0; c < d_out; ++c) {
          rho(i * d_out + r, j * d_out + c) = block(r, c) / static_cast<double>(d);
        }
      }
    }
  }
  return {DensityMatrix(std::move(rho)), d};
}

ComplexMatrix apply_via_choi(const ChoiState& choi, const ComplexMatrix& x) {
  const std::size_t d = choi.input_dim;
  if (x.rows() != d || x.cols() != d) {
    fail(ErrorCode::dimension_mismatch, "apply_via_choi: operator dimension mismatch");
  }
  const std::size_t d_out = choi.state.dim() / d;
  const ComplexMatrix lifted = kron(transpose(x), ComplexMatrix::identity(d_out));
  return partial_trace(matmul(lifted, choi.state.matrix()), 0, {d, d_out}) *
         static_cast<double>(d);
}

}  // namespace lgsim
