#pragma once

#include "helix/hilbert.hpp"
#include "helix/states.hpp"

// Hamiltonian builders: the XXZ chain H0 with anisotropy cos q, the
// chiral ladder-hopping DMI term H_DM(p), the non-Hermitian drives
// (global modulated field and local tilted raising with compensation),
// and the full driven Hamiltonian. All builders use strictly periodic
// boundaries (site N+1 = site 1) and are pure functions.
namespace helix {

struct ChainParams {
  int n_sites = 10;
  double q = 0.0;      // helix wave vector (radians)
  double p = 0.0;      // DMI rotation vector; must be 2*pi*n/N
  double lambda = 0.0; // DMI strength
  double theta = 0.0;  // helix tilt (radians)
  double kappa = 0.0;  // drive strength, >= 0
  double delta = 0.0;  // compensation strength, >= 0
  int drive_site = 5;  // site carrying the local drive

  /// 2*pi*numerator/n_sites, the commensurate momentum grid.
  static double momentum(int numerator, int n_sites);

  /// Throws std::invalid_argument on violated hard requirements
  /// (N >= 2, p on the 2*pi*n/N grid, kappa/delta >= 0, drive site
  /// in range). q is not restricted here; see q_commensurate.
  void validate() const;

  /// True when q lies on the 2*pi*n/N grid (translational symmetry).
  bool q_commensurate(double tol = 1e-9) const;

  HelixSpec helix_spec(int direction = +1) const {
    return HelixSpec{theta, q, direction};
  }
};

/// H0 = sum_j [ sx_j sx_{j+1} + sy_j sy_{j+1}
///              + cos q (sz_j sz_{j+1} - 1/4) ], Hermitian.
/// The constant -cos q * N/4 shift stays in: the phantom states sit at
/// exactly zero energy only with it.
SparseOperator build_h0(const ChainParams& params);

/// H_DM(p) = i*(lambda/2) * sum_j ( e^{-ip} s_j^+ s_{j+1}^-
///                                  - e^{ip} s_j^- s_{j+1}^+ ), Hermitian.
/// Normalized so the single-magnon band is cos k - cos q - lambda sin(k-p).
SparseOperator build_hdm(const ChainParams& params);

/// Global drive H_I = sum_j B_j . s_j with the spatially modulated
/// complex field of strength kappa; equals kappa * sum_j stilde_j^+(q).
/// Non-Hermitian.
SparseOperator build_hi_global(const ChainParams& params);

/// Local drive kappa * stilde_l^+(q) + i*delta * stilde_l^z(q).
/// Non-Hermitian.
SparseOperator build_hi_local(const ChainParams& params);

/// H_DRVN = H0 + H_DM(p) + local drive.
SparseOperator build_hdrvn(const ChainParams& params);

} // namespace helix
