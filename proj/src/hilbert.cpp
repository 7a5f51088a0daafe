#include "helix/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "helix/kernels.hpp"

namespace helix {

StateVector StateVector::zero(int n_sites) {
  if (n_sites < 1 || n_sites > kMaxSites)
    throw std::invalid_argument("StateVector: n_sites out of range");
  StateVector v;
  v.n_sites = n_sites;
  v.amp.assign(std::size_t{1} << n_sites, cplx{0.0, 0.0});
  return v;
}

double StateVector::norm() const {
  return std::sqrt(kernels::norm_sq(amp.size(), amp.data()));
}

double StateVector::normalize() {
  const double nrm = norm();
  if (!(nrm > 0.0) || !std::isfinite(nrm))
    throw std::runtime_error("StateVector::normalize: zero or non-finite norm");
  kernels::scale(amp.size(), cplx{1.0 / nrm, 0.0}, amp.data());
  return nrm;
}

SparseOperator::SparseOperator(std::size_t dimension) : dim_(dimension) {
  if (dimension == 0)
    throw std::invalid_argument("SparseOperator: zero dimension");
}

SparseOperator SparseOperator::identity(std::size_t dimension) {
  SparseOperator op(dimension);
  for (std::uint32_t i = 0; i < dimension; ++i) op.add(i, i, cplx{1.0, 0.0});
  op.finalize();
  return op;
}

void SparseOperator::add(std::uint32_t row, std::uint32_t col, cplx value) {
  if (finalized_)
    throw std::logic_error("SparseOperator::add after finalize");
  if (row >= dim_ || col >= dim_)
    throw std::out_of_range("SparseOperator::add: index out of range");
  entries_.push_back({row, col, value});
}

void SparseOperator::finalize() {
  if (finalized_) return;
  std::sort(entries_.begin(), entries_.end(),
            [](const Entry& a, const Entry& b) {
              return a.row != b.row ? a.row < b.row : a.col < b.col;
            });
  std::vector<Entry> merged;
  merged.reserve(entries_.size());
  for (const Entry& e : entries_) {
    if (!merged.empty() && merged.back().row == e.row &&
        merged.back().col == e.col) {
      merged.back().value += e.value;
    } else {
      merged.push_back(e);
    }
  }
  entries_.clear();
  for (const Entry& e : merged)
    if (std::abs(e.value) >= kZeroDropThreshold) entries_.push_back(e);

  row_ptr_.assign(dim_ + 1, 0);
  for (const Entry& e : entries_) ++row_ptr_[e.row + 1];
  for (std::size_t r = 0; r < dim_; ++r) row_ptr_[r + 1] += row_ptr_[r];
  finalized_ = true;
}

const std::vector<SparseOperator::Entry>& SparseOperator::entries() const {
  if (!finalized_)
    throw std::logic_error("SparseOperator::entries before finalize");
  return entries_;
}

StateVector SparseOperator::apply(const StateVector& v) const {
  if (!finalized_)
    throw std::logic_error("SparseOperator::apply before finalize");
  if (v.dim() != dim_)
    throw std::invalid_argument("SparseOperator::apply: dimension mismatch");
  StateVector out = StateVector::zero(v.n_sites);
  for (const Entry& e : entries_) out.amp[e.row] += e.value * v.amp[e.col];
  return out;
}

SparseOperator SparseOperator::adjoint() const {
  if (!finalized_)
    throw std::logic_error("SparseOperator::adjoint before finalize");
  SparseOperator out(dim_);
  for (const Entry& e : entries_) out.add(e.col, e.row, std::conj(e.value));
  out.finalize();
  return out;
}

double SparseOperator::max_abs() const {
  if (!finalized_)
    throw std::logic_error("SparseOperator::max_abs before finalize");
  double m = 0.0;
  for (const Entry& e : entries_) m = std::max(m, std::abs(e.value));
  return m;
}

bool SparseOperator::is_hermitian(double tol) const {
  SparseOperator adj = adjoint();
  SparseOperator diff =
      add_scaled({{cplx{1.0, 0.0}, this}, {cplx{-1.0, 0.0}, &adj}});
  return diff.nnz() == 0 || diff.max_abs() < tol;
}

SparseOperator site_operator(SpinKind kind, int site, int n_sites) {
  if (n_sites < 1 || n_sites > kMaxSites)
    throw std::invalid_argument("site_operator: n_sites out of range");
  if (site < 1 || site > n_sites)
    throw std::out_of_range("site_operator: site out of range");
  const std::uint32_t dim = std::uint32_t{1} << n_sites;
  const std::uint32_t bit = std::uint32_t{1} << (site - 1);
  SparseOperator op(dim);
  switch (kind) {
    case SpinKind::sz:
      for (std::uint32_t s = 0; s < dim; ++s)
        op.add(s, s, cplx{(s & bit) ? 0.5 : -0.5, 0.0});
      break;
    case SpinKind::s_plus:
      for (std::uint32_t s = 0; s < dim; ++s)
        if (!(s & bit)) op.add(s | bit, s, cplx{1.0, 0.0});
      break;
    case SpinKind::s_minus:
      for (std::uint32_t s = 0; s < dim; ++s)
        if (s & bit) op.add(s & ~bit, s, cplx{1.0, 0.0});
      break;
    case SpinKind::sx:
      for (std::uint32_t s = 0; s < dim; ++s)
        op.add(s ^ bit, s, cplx{0.5, 0.0});
      break;
    case SpinKind::sy:
      // <up|s^y|down> = -i/2, <down|s^y|up> = +i/2
      for (std::uint32_t s = 0; s < dim; ++s)
        op.add(s ^ bit, s, (s & bit) ? cplx{0.0, 0.5} : cplx{0.0, -0.5});
      break;
    default:
      throw std::invalid_argument("site_operator: unknown kind");
  }
  op.finalize();
  return op;
}

StateVector apply(const SparseOperator& op, const StateVector& v) {
  return op.apply(v);
}

cplx inner(const StateVector& u, const StateVector& v) {
  if (u.dim() != v.dim())
    throw std::invalid_argument("inner: dimension mismatch");
  return kernels::dot_conj(u.dim(), u.amp.data(), v.amp.data());
}

SparseOperator add_scaled(
    const std::vector<std::pair<cplx, const SparseOperator*>>& terms) {
  if (terms.empty()) throw std::invalid_argument("add_scaled: no terms");
  std::size_t dim = 0;
  for (const auto& [c, op] : terms) {
    if (!op) continue;
    if (dim == 0) dim = op->dimension();
    if (op->dimension() != dim)
      throw std::invalid_argument("add_scaled: dimension mismatch");
  }
  if (dim == 0) throw std::invalid_argument("add_scaled: no operators");
  SparseOperator out(dim);
  for (const auto& [c, op] : terms) {
    if (!op) continue;
    for (const auto& e : op->entries()) out.add(e.row, e.col, c * e.value);
  }
  out.finalize();
  return out;
}

SparseOperator multiply(const SparseOperator& a, const SparseOperator& b) {
  if (a.dimension() != b.dimension())
    throw std::invalid_argument("multiply: dimension mismatch");
  // Index b's entries by row for the inner contraction.
  std::vector<std::uint32_t> b_row_ptr(b.dimension() + 1, 0);
  for (const auto& e : b.entries()) ++b_row_ptr[e.row + 1];
  for (std::size_t r = 0; r < b.dimension(); ++r)
    b_row_ptr[r + 1] += b_row_ptr[r];
  SparseOperator out(a.dimension());
  const auto& be = b.entries();
  for (const auto& ea : a.entries()) {
    for (std::uint32_t i = b_row_ptr[ea.col]; i < b_row_ptr[ea.col + 1]; ++i)
      out.add(ea.row, be[i].col, ea.value * be[i].value);
  }
  out.finalize();
  return out;
}

} // namespace helix
