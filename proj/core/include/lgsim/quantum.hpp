#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "lgsim/cmatrix.hpp"

namespace lgsim {

// Basis convention: |0> = |H>, |1> = |V>; Bloch z = +1 is |0>.

enum class Pauli { identity, x, y, z };

ComplexMatrix pauli(Pauli which);

using BlochVector = std::array<double, 3>;

// n . sigma for a real 3-vector (not necessarily unit).
ComplexMatrix bloch_operator(const BlochVector& n);

// Two-outcome projective measurement with outcomes +1 and -1.
struct DichotomicObservable {
  ComplexMatrix observable;
  ComplexMatrix projector_plus;
  ComplexMatrix projector_minus;

  // outcome is +1 or -1.
  const ComplexMatrix& projector(int outcome) const;
};

// Throws NotUnitVector unless |n| = 1 within 1e-9.
DichotomicObservable observable_from_bloch(const BlochVector& n);

// Builds the observable from its +1 eigenprojector; checks idempotence.
DichotomicObservable observable_from_projector(const ComplexMatrix& projector_plus);

// U O U^dagger applied to the observable and both projectors.
DichotomicObservable conjugate(const DichotomicObservable& obs, const ComplexMatrix& unitary);

// Two settings per time slot; index 0 is setting 1.
struct MeasurementScenario {
  std::array<DichotomicObservable, 2> t0;
  std::array<DichotomicObservable, 2> t1;
};

// t0: sigma_x, sigma_y.  t1: (sigma_x + sigma_y)/sqrt2, (sigma_x - sigma_y)/sqrt2.
const MeasurementScenario& canonical_scenario();

class DensityMatrix {
 public:
  // Validates Hermiticity and positivity at 1e-10. The state is flagged
  // normalized when its trace is 1 within 1e-9; sub-normalized states are
  // kept as they are.
  explicit DensityMatrix(ComplexMatrix matrix);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  std::size_t dim() const noexcept { return matrix_.rows(); }
  bool normalized() const noexcept { return normalized_; }
  double trace() const;

  // Throws DegenerateFilter if the trace is below 1e-12.
  DensityMatrix normalize() const;

 private:
  ComplexMatrix matrix_;
  bool normalized_;
};

DensityMatrix maximally_mixed(std::size_t d);
DensityMatrix pure_state(std::span<const Complex> ket);

enum class ChannelKind { trace_preserving, trace_nonincreasing };

class KrausChannel {
 public:
  // Throws ValidationError if the operators are empty, mis-shaped, or break
  // the completeness condition for `kind`.
  KrausChannel(std::vector<ComplexMatrix> kraus_ops, ChannelKind kind);

  const std::vector<ComplexMatrix>& kraus_ops() const noexcept { return ops_; }
  ChannelKind kind() const noexcept { return kind_; }
  std::size_t input_dim() const noexcept { return ops_.front().cols(); }
  std::size_t output_dim() const noexcept { return ops_.front().rows(); }

  // sum_i K_i X K_i^dagger for an arbitrary operator X.
  ComplexMatrix apply(const ComplexMatrix& x) const;

 private:
  std::vector<ComplexMatrix> ops_;
  ChannelKind kind_;
};

DensityMatrix apply_channel(const KrausChannel& ch, const DensityMatrix& rho);

// outer after inner.
KrausChannel compose(const KrausChannel& outer, const KrausChannel& inner);

KrausChannel identity_channel(std::size_t d);

// E1 = |0><0| + sqrt(1-v)|1><1|, E2 = sqrt(v)|0><1|, v in [0, 1].
KrausChannel amplitude_damping(double v);

// Sagnac-type interferometer with a half-wave plate at angle theta on the V
// arm. Equals amplitude_damping(sin^2 2theta); the compensating plate on the
// H arm removes the sign of cos 2theta for theta > pi/4.
KrausChannel hwp_interferometer_channel(double theta);

struct ChoiState {
  DensityMatrix state;  // (d*d_out)x(d*d_out); channel acts on the second factor
  std::size_t input_dim;
};

ChoiState choi_of_channel(const KrausChannel& ch);

// Recovers the channel action from its Choi state:
// d * Tr_in[(X^T (x) 1) rho_CJ], with the transpose on the input factor.
ComplexMatrix apply_via_choi(const ChoiState& choi, const ComplexMatrix& x);

}  // namespace lgsim
