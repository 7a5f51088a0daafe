#pragma once

// Independent dense reference constructions for tests. Everything here
// is built from explicit 2x2 matrices and Kronecker products -- no bit
// tricks, no sparse machinery -- so it shares no code path with the
// library it checks.
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "helix/hilbert.hpp"

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Per-site basis order (0 = down, 1 = up), matching index = sum bit_j 2^(j-1).
inline Mat spin_half(char kind) {
  Mat m = Mat::Zero(2, 2);
  const cplx i{0.0, 1.0};
  switch (kind) {
    case 'x': m(0, 1) = 0.5; m(1, 0) = 0.5; break;
    case 'y': m(0, 1) = 0.5 * i; m(1, 0) = -0.5 * i; break;
    case 'z': m(0, 0) = -0.5; m(1, 1) = 0.5; break;
    case '+': m(1, 0) = 1.0; break;
    case '-': m(0, 1) = 1.0; break;
  }
  return m;
}

/// Spin operator at site j (1-based) on an n-site chain; site 1 is the
/// least significant Kronecker factor.
inline Mat site(char kind, int j, int n) {
  Mat m = Mat::Identity(1, 1);
  for (int s = 1; s <= n; ++s)
    m = kron(s == j ? spin_half(kind) : Mat::Identity(2, 2), m);
  return m;
}

inline Mat dense_h0(int n, double q) {
  const std::size_t dim = std::size_t{1} << n;
  Mat h = Mat::Zero(dim, dim);
  for (int j = 1; j <= n; ++j) {
    const int k = j % n + 1;
    h += site('x', j, n) * site('x', k, n) +
         site('y', j, n) * site('y', k, n) +
         std::cos(q) * (site('z', j, n) * site('z', k, n) -
                        0.25 * Mat::Identity(dim, dim));
  }
  return h;
}

inline Mat dense_hdm(int n, double p, double lambda) {
  const std::size_t dim = std::size_t{1} << n;
  Mat h = Mat::Zero(dim, dim);
  const cplx i{0.0, 1.0};
  for (int j = 1; j <= n; ++j) {
    const int k = j % n + 1;
    h += i * (lambda / 2.0) *
         (std::exp(-i * p) * site('+', j, n) * site('-', k, n) -
          std::exp(i * p) * site('-', j, n) * site('+', k, n));
  }
  return h;
}

inline Mat to_dense(const helix::SparseOperator& op) {
  Mat m = Mat::Zero(op.dimension(), op.dimension());
  for (const auto& e : op.entries()) m(e.row, e.col) += e.value;
  return m;
}

inline Vec to_vec(const helix::StateVector& v) {
  Vec out(v.dim());
  for (std::size_t i = 0; i < v.dim(); ++i) out[i] = v.amp[i];
  return out;
}

/// Hermitian evolution oracle: full eigendecomposition, then
/// F(t) = |<ref| e^{-iHt} |psi0>|^2 evaluated in closed form at any t.
struct SpectralOracle {
  Eigen::VectorXd evals;
  Vec c0;  // eigenbasis coefficients of psi0
  Vec r0;  // eigenbasis coefficients of ref

  SpectralOracle(const Mat& h, const Vec& psi0, const Vec& ref) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    evals = es.eigenvalues();
    c0 = es.eigenvectors().adjoint() * psi0;
    r0 = es.eigenvectors().adjoint() * ref;
  }

  double fidelity(double t) const {
    cplx amp{0.0, 0.0};
    const cplx i{0.0, 1.0};
    for (Eigen::Index k = 0; k < evals.size(); ++k)
      amp += std::conj(r0[k]) * std::exp(-i * evals[k] * t) * c0[k];
    return std::norm(amp);
  }
};

} // namespace oracle
