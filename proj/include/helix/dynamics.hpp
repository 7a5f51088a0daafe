#pragma once

#include <array>
#include <Eigen/Dense>

#include "helix/hilbert.hpp"
#include "helix/states.hpp"

// Time evolution (Hermitian spectral propagator and non-Hermitian
// normalized flow), observable time series, subspace projection, and
// the exact nilpotent-propagator polynomial.
namespace helix {

// Dense engine cap: 2^12. Larger chains would need a Krylov stepper,
// which this library does not ship (all reference experiments are N=10).
inline constexpr std::size_t kMaxDenseDim = 4096;

struct TimeGrid {
  double t_max = 0.0;
  double dt = 0.0;
  int samples = 0; // number of steps; samples * dt == t_max

  static TimeGrid from_dt(double t_max, double dt);
  /// samples+1 points: 0, dt, ..., t_max.
  std::vector<double> times() const;
};

struct TimeSeries {
  int n_sites = 0;
  std::vector<double> times;
  std::vector<double> fidelity; // in [0, 1]
  std::vector<double> log_norm; // accumulated log of discarded norm factors
  // row-major [time][site] on-site spin expectations
  std::vector<std::array<double, 3>> helix;

  const std::array<double, 3>& helix_at(std::size_t time_index,
                                        int site) const {
    return helix[time_index * n_sites + (site - 1)];
  }
};

struct EvolveOptions {
  bool hermitian = true;
  /// Fidelity reference; defaults to the initial state.
  const StateVector* reference = nullptr;
  bool record_helix = true;
  bool keep_states = false;
};

struct EvolveResult {
  TimeSeries series;
  std::vector<StateVector> states; // filled when keep_states is set
};

/// Evolves psi0 under h over the grid. Hermitian path: exact spectral
/// propagator (eigendecomposition). Non-Hermitian path: one dense
/// exp(-i h dt) applied per step, renormalizing at every sample with the
/// discarded factor accumulated in log_norm. Observables come from the
/// normalized samples.
EvolveResult evolve(const SparseOperator& h, const StateVector& psi0,
                    const TimeGrid& grid, const EvolveOptions& opts = {});

/// h_l = (<s_l^x>, <s_l^y>, <s_l^z>); psi must be normalized to 1e-9.
std::array<double, 3> helix_vector(const StateVector& psi, int site);

struct SubspaceMatrix {
  Eigen::MatrixXcd m;
  int dim() const { return static_cast<int>(m.rows()); }
};

/// Matrix representation of op in the family's scaled basis
/// B_n = w_n |member_n>: M_ab = (w_b / w_a) <member_a| op |member_b>.
/// With unit weights (the default) this is the plain projection
/// <family_a| op |family_b>.
SubspaceMatrix project_subspace(const SparseOperator& op,
                                const StateFamily& family);

/// Relative max-entry size of M^dim; 0 for an exactly nilpotent M.
double nilpotency_defect(const SubspaceMatrix& m);

/// U(t) a with U(t) = sum_{l=0}^{dim-1} (-iMt)^l / l!, exact for
/// nilpotent M (checked to 1e-12; throws otherwise). Result is not
/// normalized.
Eigen::VectorXcd jordan_propagate(const SubspaceMatrix& m,
                                  const Eigen::VectorXcd& coeffs, double t);

} // namespace helix
