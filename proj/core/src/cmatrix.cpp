#include "lgsim/cmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "lgsim/error.hpp"

namespace lgsim {

namespace {

std::string shape(const ComplexMatrix& a) {
  return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    fail(ErrorCode::dimension_mismatch,
         std::string(op) + ": " + shape(a) + " vs " + shape(b));
  }
}

void require_square(const ComplexMatrix& a, const char* op) {
  if (!a.is_square()) {
    fail(ErrorCode::not_square, std::string(op) + ": got " + shape(a));
  }
}

Eigen::MatrixXcd to_eigen(const ComplexMatrix& a) {
  Eigen::MatrixXcd m(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) m(r, c) = a(r, c);
  }
  return m;
}

void require_hermitian(const ComplexMatrix& a, const char* op) {
  require_square(a, op);
  if (!is_hermitian(a)) {
    fail(ErrorCode::not_hermitian,
         std::string(op) + ": max deviation from adjoint " +
             std::to_string(max_abs_diff(a, adjoint(a))));
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : ComplexMatrix(rows, cols, std::vector<Complex>(rows * cols)) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (rows_ == 0 || cols_ == 0) {
    fail(ErrorCode::dimension_mismatch, "matrix dimensions must be positive");
  }
  if (data_.size() != rows_ * cols_) {
    fail(ErrorCode::dimension_mismatch,
         "entry count " + std::to_string(data_.size()) + " does not match " +
             std::to_string(rows_) + "x" + std::to_string(cols_));
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  if (rows_ == 0 || cols_ == 0) {
    fail(ErrorCode::dimension_mismatch, "matrix dimensions must be positive");
  }
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) fail(ErrorCode::dimension_mismatch, "ragged initializer");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::initializer_list<Complex> diag) {
  return diagonal(std::span<const Complex>(diag.begin(), diag.size()));
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> ket, std::span<const Complex> bra) {
  ComplexMatrix m(ket.size(), bra.size());
  for (std::size_t r = 0; r < ket.size(); ++r) {
    for (std::size_t c = 0; c < bra.size(); ++c) m(r, c) = ket[r] * std::conj(bra[c]);
  }
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "add");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "subtract");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
  for (auto& z : data_) z *= scale;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(ComplexMatrix a, Complex scale) { return a *= scale; }
ComplexMatrix operator*(Complex scale, ComplexMatrix a) { return a *= scale; }
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return matmul(a, b); }

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    fail(ErrorCode::dimension_mismatch, "matmul: " + shape(a) + " * " + shape(b));
  }
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex lhs = a(r, k);
      if (lhs == Complex{}) continue;
      for (std::size_t c = 0; c < b.cols(); ++c) out(r, c) += lhs * b(k, c);
    }
  }
  return out;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out(c, r) = std::conj(a(r, c));
  }
  return out;
}

ComplexMatrix transpose(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out(c, r) = a(r, c);
  }
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ar = 0; ar < a.rows(); ++ar) {
    for (std::size_t ac = 0; ac < a.cols(); ++ac) {
      const Complex scale = a(ar, ac);
      for (std::size_t br = 0; br < b.rows(); ++br) {
        for (std::size_t bc = 0; bc < b.cols(); ++bc) {
          out(ar * b.rows() + br, ac * b.cols() + bc) = scale * b(br, bc);
        }
      }
    }
  }
  return out;
}

Complex trace(const ComplexMatrix& a) {
  require_square(a, "trace");
  Complex sum{};
  for (std::size_t i = 0; i < a.rows(); ++i) sum += a(i, i);
  return sum;
}

ComplexMatrix partial_trace(const ComplexMatrix& a, std::size_t subsystem,
                            std::pair<std::size_t, std::size_t> dims) {
  const auto [d1, d2] = dims;
  if (!a.is_square() || a.rows() != d1 * d2) {
    fail(ErrorCode::dimension_mismatch,
         "partial_trace: " + shape(a) + " is not (" + std::to_string(d1) + "*" +
             std::to_string(d2) + ") square");
  }
  if (subsystem > 1) fail(ErrorCode::dimension_mismatch, "partial_trace: subsystem must be 0 or 1");

  if (subsystem == 0) {
    ComplexMatrix out(d2, d2);
    for (std::size_t i = 0; i < d1; ++i) {
      for (std::size_t r = 0; r < d2; ++r) {
        for (std::size_t c = 0; c < d2; ++c) out(r, c) += a(i * d2 + r, i * d2 + c);
      }
    }
    return out;
  }
  ComplexMatrix out(d1, d1);
  for (std::size_t r = 0; r < d1; ++r) {
    for (std::size_t c = 0; c < d1; ++c) {
      for (std::size_t j = 0; j < d2; ++j) out(r, c) += a(r * d2 + j, c * d2 + j);
    }
  }
  return out;
}

double frobenius_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (const auto& z : a.entries()) sum += std::norm(z);
  return std::sqrt(sum);
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double worst = 0.0;
  const auto ea = a.entries();
  const auto eb = b.entries();
  for (std::size_t i = 0; i < ea.size(); ++i) worst = std::max(worst, std::abs(ea[i] - eb[i]));
  return worst;
}

bool is_hermitian(const ComplexMatrix& a, double tolerance) {
  if (!a.is_square()) return false;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = r; c < a.cols(); ++c) {
      if (std::abs(a(r, c) - std::conj(a(c, r))) > tolerance) return false;
    }
  }
  return true;
}

HermitianEigensystem hermitian_eigensystem(const ComplexMatrix& a) {
  require_hermitian(a, "hermitian_eigensystem");
  // Solve on the exactly Hermitian part so tolerance-level skew cannot leak in.
  const Eigen::MatrixXcd m = to_eigen(a);
  const Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::not_hermitian, "eigensolver did not converge");
  }

  const std::size_t n = a.rows();
  HermitianEigensystem out{std::vector<double>(n), ComplexMatrix(n, n)};
  // Eigen sorts ascending.
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = n - 1 - k;
    out.eigenvalues[k] = solver.eigenvalues()(static_cast<Eigen::Index>(src));
    for (std::size_t r = 0; r < n; ++r) {
      out.eigenvectors(r, k) = solver.eigenvectors()(static_cast<Eigen::Index>(r),
                                                     static_cast<Eigen::Index>(src));
    }
  }
  return out;
}

HermitianSpectrum hermitian_eigenvalues(const ComplexMatrix& a) {
  return {hermitian_eigensystem(a).eigenvalues};
}

ComplexMatrix psd_sqrt(const ComplexMatrix& a) {
  const auto sys = hermitian_eigensystem(a);
  const std::size_t n = a.rows();
  if (sys.eigenvalues.back() < -tol::kStructure) {
    fail(ErrorCode::not_psd,
         "psd_sqrt: smallest eigenvalue " + std::to_string(sys.eigenvalues.back()));
  }
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double root = std::sqrt(std::max(0.0, sys.eigenvalues[k]));
    if (root == 0.0) continue;
    for (std::size_t r = 0; r < n; ++r) {
      const Complex vr = sys.eigenvectors(r, k) * root;
      for (std::size_t c = 0; c < n; ++c) out(r, c) += vr * std::conj(sys.eigenvectors(c, k));
    }
  }
  return out;
}

bool is_psd(const ComplexMatrix& a, double tolerance) {
  if (!is_hermitian(a, tolerance)) return false;
  return hermitian_eigenvalues(a).eigenvalues.back() >= -tolerance;
}

}  // namespace lgsim
