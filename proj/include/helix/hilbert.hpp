#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

// Spin-1/2 chain Hilbert space: bitmask basis, sparse operators, inner
// products. Site j in [1, N] maps to bit (j-1); bit set means spin up
// (s^z = +1/2). Basis index = sum_j bit_j * 2^(j-1).
namespace helix {

using cplx = std::complex<double>;

// Entries with |value| below this are dropped when a SparseOperator is
// finalized, so phase sums that cancel do not leave fill behind.
inline constexpr double kZeroDropThreshold = 1e-15;

// Largest chain the bitmask encoding accepts (2^24 amplitudes).
inline constexpr int kMaxSites = 24;

struct StateVector {
  int n_sites = 0;
  std::vector<cplx> amp;

  static StateVector zero(int n_sites);

  std::size_t dim() const { return amp.size(); }
  double norm() const;
  /// Scales to unit norm and returns the discarded norm factor.
  double normalize();
};

enum class SpinKind { sx, sy, sz, s_plus, s_minus };

/// Sparse complex matrix on the 2^N space. Built by accumulating COO
/// triplets, then finalized: entries are sorted by (row, col),
/// duplicates summed, near-zeros dropped, and a CSR image built for
/// matvec. Immutable (and thread-safe to share) once finalized.
class SparseOperator {
 public:
  struct Entry {
    std::uint32_t row, col;
    cplx value;
  };

  SparseOperator() = default;
  explicit SparseOperator(std::size_t dimension);
  static SparseOperator identity(std::size_t dimension);

  void add(std::uint32_t row, std::uint32_t col, cplx value);
  void finalize();
  bool finalized() const { return finalized_; }

  std::size_t dimension() const { return dim_; }
  const std::vector<Entry>& entries() const;
  std::size_t nnz() const { return entries_.size(); }

  StateVector apply(const StateVector& v) const;

  SparseOperator adjoint() const;
  double max_abs() const;
  bool is_hermitian(double tol = 1e-12) const;

 private:
  std::size_t dim_ = 0;
  bool finalized_ = false;
  std::vector<Entry> entries_;       // sorted (row, col) after finalize
  std::vector<std::uint32_t> row_ptr_; // CSR row offsets into entries_
};

/// Spin-1/2 operator at site j (1-based) on an n_sites chain,
/// s^alpha = sigma^alpha / 2, s^pm = s^x +- i s^y.
SparseOperator site_operator(SpinKind kind, int site, int n_sites);

StateVector apply(const SparseOperator& op, const StateVector& v);

/// <u|v> with conjugation on u.
cplx inner(const StateVector& u, const StateVector& v);

/// sum_i coeff_i * op_i, finalized.
SparseOperator add_scaled(
    const std::vector<std::pair<cplx, const SparseOperator*>>& terms);

/// Sparse operator product a * b, finalized.
SparseOperator multiply(const SparseOperator& a, const SparseOperator& b);

} // namespace helix
