#pragma once

#include "helix/hilbert.hpp"

// Closed-form state families of the chain: the fully polarized states,
// the phantom ladders built from the winding magnon operator, the helix
// product states, and the tilted (site-dependently rotated) operator
// ladder used by the non-Hermitian drive.
namespace helix {

struct HelixSpec {
  double theta = 0.0; // tilt angle, [0, pi]
  double q = 0.0;     // winding wave vector (radians per site)
  int direction = +1; // +1 uses e^{+iqj}, -1 uses e^{-iqj}
};

enum class FamilyLabel { phantom_q, phantom_minus_q, tilted };

struct StateFamily {
  FamilyLabel label;
  std::vector<StateVector> members; // N+1 states, index n = 0..N
  // Basis scale factors w_n: members are stored unit-norm, but subspace
  // matrix representations refer to the basis {w_n |member_n>}. Empty
  // means all ones. The tilted family uses w_n = n!, the normalization
  // under which the collective raising relation reads
  // stilde^+ B_n = sqrt((N-n)/(n+1)) B_{n+1}.
  std::vector<double> basis_weights;

  int n_sites() const { return members.empty() ? 0 : members.front().n_sites; }
  double weight(int n) const {
    return basis_weights.empty() ? 1.0 : basis_weights[n];
  }
  /// Largest |<m|n>| over m != n, and largest | ||m|| - 1 |.
  double max_cross_overlap() const;
  double max_norm_deviation() const;
};

/// |down down ... down>, amplitude 1 on basis index 0.
StateVector ferro_down(int n_sites);
StateVector ferro_up(int n_sites);

/// Applies the winding magnon raising operator
/// sum_j e^{i sign q j} s_j^+ ; result is not normalized.
StateVector magnon_raise(const StateVector& v, double q, int sign);

/// n-th phantom state (1/Omega_n)(tau_q^+)^n |down...down>, normalized.
/// sign = +1 gives the q family, -1 the -q family.
StateVector phantom_state(int n, double q, int sign, int n_sites);

StateFamily phantom_family(double q, int sign, int n_sites);

/// Product state prod_j [cos(theta/2)|down>_j
///                       - i e^{i dir q j} sin(theta/2)|up>_j].
StateVector helix_state(const HelixSpec& spec, int n_sites);

enum class TiltKind { raise, lower, z };

/// Single-site rotated operator: for kind = raise,
///   cos^2(theta/2) s_j^+ + e^{-2iqj} sin^2(theta/2) s_j^-
///   + i e^{-iqj} sin(theta) s_j^z
/// (q -> dir*q); lower is its adjoint and z is half their commutator.
SparseOperator tilted_site_operator(TiltKind kind, int site,
                                    const HelixSpec& spec, int n_sites);

/// Collective raising operator sum_j stilde_j^+.
SparseOperator tilted_collective_raise(const HelixSpec& spec, int n_sites);

/// The N+1 tilted states (1/Omega_n)(stilde_q^+)^n |psitilde_0> with
/// |psitilde_0> = helix_state(spec).
StateFamily tilted_family(const HelixSpec& spec, int n_sites);

/// Tilted ferromagnetic endpoint as a direct product:
/// prod_j [cos(theta/2)|up>_j - i e^{-i dir q j} sin(theta/2)|down>_j].
StateVector tilted_top_product(const HelixSpec& spec, int n_sites);

} // namespace helix
