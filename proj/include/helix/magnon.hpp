#pragma once

#include <vector>

#include <Eigen/Dense>

#include "helix/model.hpp"

// Holstein-Primakoff boson picture: the single-magnon band, its density
// of states (closed form and sampled histogram), and the exact
// equivalence check against the one-flip sector of the spin model.
namespace helix {

struct BandParams {
  double q = 0.0;
  double p = 0.0;
  double lambda = 0.0;
};

/// eps_k = cos k - cos q - lambda sin(k - p).
double dispersion(double k, const BandParams& params);

/// Half-width of the band: sqrt(lambda^2 + 1 + 2 lambda sin p).
/// (cos k - lambda sin(k-p) rewritten as a single sinusoid.)
double band_half_width(const BandParams& params);

// Band-edge guard on the closed-form radicand; the divergence at the
// edges is integrable but not evaluable.
inline constexpr double kDosEdgeGuard = 1e-6;

/// Closed form 1/(2 pi sqrt(lambda^2 + 1 + 2 lambda sin p - E^2)).
/// The energy is measured from the band center. Note this counts one
/// momentum branch: the full sampled density is twice this value.
/// Throws std::domain_error outside the band (radicand <= guard).
double dos_analytic(double energy, const BandParams& params);

/// Average of dos_analytic over [e_lo, e_hi] via the arcsine
/// antiderivative, with the interval clipped to the band. This is the
/// closed form's exact prediction for a histogram bin, finite even for
/// bins touching the edge divergence. Same one-branch normalization as
/// dos_analytic. Throws std::domain_error for an interval outside the
/// band or with e_hi <= e_lo.
double dos_analytic_bin_average(double e_lo, double e_hi,
                                const BandParams& params);

struct DosCurve {
  enum class Kind { analytic, histogram };
  Kind kind;
  std::vector<double> energies; // measured from the band center
  std::vector<double> dos;      // states per unit energy per site
};

/// Samples eps_k on k = 2 pi m / n_k and bins the band-centered
/// energies over [-A, A]. Normalized as a density: integral 1.
DosCurve dos_histogram(const BandParams& params, int n_k, int n_bins);

/// Guarded sampling of the closed form on n_points interior energies.
DosCurve dos_analytic_curve(const BandParams& params, int n_points);

struct SingleMagnonResult {
  Eigen::MatrixXcd block;           // one-flip sector of H0 + H_DM
  std::vector<double> eigenvalues;  // sorted ascending
};

/// Extracts the single up-spin sector of the spin Hamiltonian built by
/// `model` and diagonalizes it. Exact image of the HP boson band.
SingleMagnonResult single_magnon_block(const ChainParams& params);

} // namespace helix
