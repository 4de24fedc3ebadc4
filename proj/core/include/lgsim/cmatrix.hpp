#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace lgsim {

using Complex = std::complex<double>;

namespace tol {
// Hermiticity and positivity checks.
inline constexpr double kStructure = 1e-10;
// Reconstruction identities (traces, completions, square roots).
inline constexpr double kReconstruction = 1e-9;
}  // namespace tol

// Dense row-major complex matrix. Sized for qubit work: states, Kraus
// operators and observables up to 16x16.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;  // empty placeholder, 0x0
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const Complex> diag);
  static ComplexMatrix diagonal(std::initializer_list<Complex> diag);
  // |psi><psi| for a column vector psi.
  static ComplexMatrix outer(std::span<const Complex> ket, std::span<const Complex> bra);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<const Complex> entries() const noexcept { return data_; }

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scale);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(ComplexMatrix a, Complex scale);
ComplexMatrix operator*(Complex scale, ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix adjoint(const ComplexMatrix& a);
ComplexMatrix transpose(const ComplexMatrix& a);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
Complex trace(const ComplexMatrix& a);

// Traces out `subsystem` (0 = left tensor factor) of a (d1*d2)x(d1*d2)
// matrix and returns the reduced matrix on the remaining factor.
ComplexMatrix partial_trace(const ComplexMatrix& a, std::size_t subsystem,
                            std::pair<std::size_t, std::size_t> dims);

double frobenius_norm(const ComplexMatrix& a);
// max_ij |a_ij - b_ij|; DimensionMismatch for different shapes.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
bool is_hermitian(const ComplexMatrix& a, double tolerance = tol::kStructure);

struct HermitianSpectrum {
  std::vector<double> eigenvalues;  // descending
};

struct HermitianEigensystem {
  std::vector<double> eigenvalues;  // descending
  ComplexMatrix eigenvectors;       // column k pairs with eigenvalues[k]
};

HermitianSpectrum hermitian_eigenvalues(const ComplexMatrix& a);
HermitianEigensystem hermitian_eigensystem(const ComplexMatrix& a);

// Unique positive semidefinite square root. Eigenvalues in [-1e-10, 0) are
// clamped to zero; anything more negative throws NotPSD.
ComplexMatrix psd_sqrt(const ComplexMatrix& a);

bool is_psd(const ComplexMatrix& a, double tolerance = tol::kStructure);

}  // namespace lgsim
