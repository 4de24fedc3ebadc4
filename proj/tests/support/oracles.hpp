#pragma once

// Reference values computed without the library: closed forms, a plain
// bisection root finder, and a from-scratch Eigen evaluation of the filtered
// two-time statistics.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <random>

#include <Eigen/Dense>

#include "lgsim/cmatrix.hpp"

namespace oracle {

inline const double kSqrt2 = std::sqrt(2.0);

// Amplitude damping, canonical scenario.
inline double b_unfiltered(double v) { return 2.0 * kSqrt2 * std::sqrt(1.0 - v); }
inline double b_filtered(double v, double d) {
  return 4.0 * kSqrt2 * std::sqrt(1.0 - v) / (2.0 - v * d);
}
inline double success(double v, double d) { return (1.0 - d) * (2.0 - v * d) / 2.0; }
inline double choi_chsh_max(double v) { return 2.0 * std::sqrt(2.0 * (1.0 - v)); }

inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double tol = 1e-13) {
  double flo = f(lo);
  for (int i = 0; i < 200 && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Upper edge of the filtered violation region: 8(1-v) = (2 - vD)^2.
inline double threshold(double d) {
  return bisect([d](double v) { return 8.0 * (1.0 - v) - (2.0 - v * d) * (2.0 - v * d); }, 0.0,
                1.0);
}

using M2 = Eigen::Matrix2cd;

inline M2 projector(double nx, double ny, double nz, int sign) {
  M2 sx, sy, sz;
  sx << 0, 1, 1, 0;
  sy << 0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0;
  sz << 1, 0, 0, -1;
  return 0.5 * (M2::Identity() + static_cast<double>(sign) * (nx * sx + ny * sy + nz * sz));
}

// Filtered temporal CHSH for amplitude damping with diagonal filters
// diag(1, sqrt(1-dp)) before and diag(sqrt(1-dq), 1) after, canonical
// scenario, evaluated directly: p = Tr[M_b L(M_a)] / (2 Tr[L(M_a)]).
inline double direct_filtered_b(double v, double dp, double dq) {
  M2 e1 = M2::Zero(), e2 = M2::Zero(), kp = M2::Zero(), kq = M2::Zero();
  e1(0, 0) = 1;
  e1(1, 1) = std::sqrt(1 - v);
  e2(0, 1) = std::sqrt(v);
  kp(0, 0) = 1;
  kp(1, 1) = std::sqrt(1 - dp);
  kq(0, 0) = std::sqrt(1 - dq);
  kq(1, 1) = 1;
  auto lambda = [&](const M2& x) {
    const M2 y = kp * x * kp.adjoint();
    const M2 z = e1 * y * e1.adjoint() + e2 * y * e2.adjoint();
    return M2(kq * z * kq.adjoint());
  };
  const double r = 1.0 / kSqrt2;
  const std::array<std::array<double, 3>, 2> t0{{{1, 0, 0}, {0, 1, 0}}};
  const std::array<std::array<double, 3>, 2> t1{{{r, r, 0}, {r, -r, 0}}};
  double c[2][2] = {};
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      for (int a : {1, -1}) {
        const M2 out = lambda(projector(t0[x][0], t0[x][1], t0[x][2], a));
        const double n = out.trace().real();
        for (int b : {1, -1}) {
          const double p =
              (projector(t1[y][0], t1[y][1], t1[y][2], b) * out).trace().real() / (2.0 * n);
          c[x][y] += a * b * p;
        }
      }
    }
  }
  return c[0][0] + c[1][0] + c[0][1] - c[1][1];
}

// Haar-ish random matrices for property sweeps.
inline lgsim::ComplexMatrix random_matrix(std::mt19937_64& rng, std::size_t rows,
                                          std::size_t cols) {
  std::normal_distribution<double> g;
  lgsim::ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = {g(rng), g(rng)};
  }
  return m;
}

inline lgsim::ComplexMatrix random_unitary(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd z(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    for (Eigen::Index j = 0; j < z.cols(); ++j) z(i, j) = {g(rng), g(rng)};
  }
  const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  const Eigen::MatrixXcd q = qr.householderQ();
  lgsim::ComplexMatrix u(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      u(i, j) = q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return u;
}

// Random PSD matrix A^dagger A scaled to unit trace.
inline lgsim::ComplexMatrix random_state(std::mt19937_64& rng, std::size_t n) {
  const auto a = random_matrix(rng, n, n);
  auto rho = lgsim::matmul(lgsim::adjoint(a), a);
  return rho * (1.0 / lgsim::trace(rho).real());
}

}  // namespace oracle
