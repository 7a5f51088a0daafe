#include "helix/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "helix/kernels.hpp"

namespace helix {

namespace {

constexpr double kFidelitySlack = 1e-9;

Eigen::MatrixXcd to_dense(const SparseOperator& op) {
  if (op.dimension() > kMaxDenseDim)
    throw std::invalid_argument(
        "evolve: dimension exceeds the dense-engine cap (N <= 12)");
  Eigen::MatrixXcd m =
      Eigen::MatrixXcd::Zero(op.dimension(), op.dimension());
  for (const auto& e : op.entries()) m(e.row, e.col) += e.value;
  return m;
}

double clipped_fidelity(const StateVector& ref, const StateVector& psi) {
  const double f = std::norm(inner(ref, psi));
  if (f > 1.0 + kFidelitySlack)
    throw std::runtime_error("evolve: fidelity exceeds 1 beyond tolerance");
  return std::min(std::max(f, 0.0), 1.0);
}

void record_sample(TimeSeries& ts, const StateVector& psi,
                   const StateVector& ref, double log_norm,
                   bool record_helix) {
  ts.fidelity.push_back(clipped_fidelity(ref, psi));
  ts.log_norm.push_back(log_norm);
  if (record_helix)
    for (int l = 1; l <= psi.n_sites; ++l) ts.helix.push_back(helix_vector(psi, l));
}

} // namespace

TimeGrid TimeGrid::from_dt(double t_max, double dt) {
  if (!(dt > 0.0) || !(t_max >= dt))
    throw std::invalid_argument("TimeGrid: need 0 < dt <= t_max");
  const int samples = static_cast<int>(std::round(t_max / dt));
  if (std::abs(samples * dt - t_max) > 1e-12 * std::max(1.0, t_max))
    throw std::invalid_argument("TimeGrid: t_max must be a multiple of dt");
  return {t_max, dt, samples};
}

std::vector<double> TimeGrid::times() const {
  std::vector<double> out(samples + 1);
  for (int i = 0; i <= samples; ++i) out[i] = i * dt;
  return out;
}

EvolveResult evolve(const SparseOperator& h, const StateVector& psi0,
                    const TimeGrid& grid, const EvolveOptions& opts) {
  if (h.dimension() != psi0.dim())
    throw std::invalid_argument("evolve: dimension mismatch");
  const StateVector& ref = opts.reference ? *opts.reference : psi0;
  if (ref.dim() != psi0.dim())
    throw std::invalid_argument("evolve: reference dimension mismatch");

  EvolveResult result;
  TimeSeries& ts = result.series;
  ts.n_sites = psi0.n_sites;
  ts.times = grid.times();

  StateVector psi = psi0;
  psi.normalize();

  if (opts.hermitian) {
    SparseOperator adj = h.adjoint();
    SparseOperator anti =
        add_scaled({{cplx{1.0, 0.0}, &h}, {cplx{-1.0, 0.0}, &adj}});
    if (anti.nnz() != 0 && anti.max_abs() >= 1e-12)
      throw std::invalid_argument(
          "evolve: hermitian flag set but H has an anti-Hermitian part");

    Eigen::MatrixXcd dense = to_dense(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("evolve: eigendecomposition failed");
    const Eigen::VectorXd& ev = es.eigenvalues();
    const Eigen::MatrixXcd& vec = es.eigenvectors();

    Eigen::Map<const Eigen::VectorXcd> psi_map(psi.amp.data(), psi.dim());
    Eigen::VectorXcd c0 = vec.adjoint() * psi_map;
    StateVector sample = psi;
    for (int i = 0; i <= grid.samples; ++i) {
      const double t = ts.times[i];
      Eigen::VectorXcd phase(ev.size());
      for (Eigen::Index k = 0; k < ev.size(); ++k)
        phase[k] = std::polar(1.0, -ev[k] * t) * c0[k];
      Eigen::Map<Eigen::VectorXcd>(sample.amp.data(), sample.dim()) =
          vec * phase;
      record_sample(ts, sample, ref, 0.0, opts.record_helix);
      if (opts.keep_states) result.states.push_back(sample);
    }
  } else {
    Eigen::MatrixXcd dense = to_dense(h);
    Eigen::MatrixXcd step =
        (cplx{0.0, -grid.dt} * dense).exp(); // scaling-and-squaring Pade
    Eigen::Map<Eigen::VectorXcd> psi_map(psi.amp.data(), psi.dim());
    double log_norm = 0.0;
    record_sample(ts, psi, ref, log_norm, opts.record_helix);
    if (opts.keep_states) result.states.push_back(psi);
    Eigen::VectorXcd work(psi.dim());
    for (int i = 1; i <= grid.samples; ++i) {
      work = step * psi_map;
      psi_map = work;
      const double nrm = psi.norm();
      if (!(nrm > 0.0) || !std::isfinite(nrm))
        throw std::runtime_error("evolve: state norm underflow/overflow");
      log_norm += std::log(nrm);
      kernels::scale(psi.dim(), cplx{1.0 / nrm, 0.0}, psi.amp.data());
      record_sample(ts, psi, ref, log_norm, opts.record_helix);
      if (opts.keep_states) result.states.push_back(psi);
    }
  }
  return result;
}

std::array<double, 3> helix_vector(const StateVector& psi, int site) {
  if (site < 1 || site > psi.n_sites)
    throw std::out_of_range("helix_vector: site out of range");
  if (std::abs(psi.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("helix_vector: state is not normalized");
  const std::uint32_t bit = std::uint32_t{1} << (site - 1);
  const std::uint32_t dim = static_cast<std::uint32_t>(psi.dim());
  double hz = 0.0;
  cplx hp{0.0, 0.0}; // <s_l^+>
  for (std::uint32_t s = 0; s < dim; ++s) {
    hz += std::norm(psi.amp[s]) * ((s & bit) ? 0.5 : -0.5);
    if (!(s & bit)) hp += std::conj(psi.amp[s | bit]) * psi.amp[s];
  }
  return {hp.real(), hp.imag(), hz};
}

SubspaceMatrix project_subspace(const SparseOperator& op,
                                const StateFamily& family) {
  if (family.members.empty())
    throw std::invalid_argument("project_subspace: empty family");
  const int dim = static_cast<int>(family.members.size());
  SubspaceMatrix out;
  out.m.resize(dim, dim);
  for (int b = 0; b < dim; ++b) {
    StateVector col = op.apply(family.members[b]);
    // op B_b = sum_a M_ab B_a with B_n = w_n |member_n>, so the
    // representation entry picks up the weight ratio w_b / w_a. Raw
    // entries below the library-wide zero-drop threshold are structural
    // zeros; dropping them before scaling keeps roundoff from being
    // amplified by large weight ratios.
    for (int a = 0; a < dim; ++a) {
      cplx raw = inner(family.members[a], col);
      if (std::abs(raw) < kZeroDropThreshold) raw = 0.0;
      out.m(a, b) = raw * (family.weight(b) / family.weight(a));
    }
  }
  return out;
}

double nilpotency_defect(const SubspaceMatrix& m) {
  const double scale = m.m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  Eigen::MatrixXcd unit = m.m / scale;
  Eigen::MatrixXcd power = unit;
  for (int l = 1; l < m.dim(); ++l) power = power * unit;
  return power.cwiseAbs().maxCoeff();
}

Eigen::VectorXcd jordan_propagate(const SubspaceMatrix& m,
                                  const Eigen::VectorXcd& coeffs, double t) {
  if (coeffs.size() != m.dim())
    throw std::invalid_argument("jordan_propagate: coefficient length");
  if (nilpotency_defect(m) >= 1e-12)
    throw std::invalid_argument(
        "jordan_propagate: matrix is not nilpotent (family not invariant)");
  Eigen::VectorXcd term = coeffs;
  Eigen::VectorXcd out = coeffs;
  for (int l = 1; l < m.dim(); ++l) {
    term = (cplx{0.0, -t} / static_cast<double>(l)) * (m.m * term);
    out += term;
  }
  return out;
}

} // namespace helix
