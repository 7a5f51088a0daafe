#include "helix/magnon.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace helix {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double dispersion(double k, const BandParams& params) {
  return std::cos(k) - std::cos(params.q) -
         params.lambda * std::sin(k - params.p);
}

double band_half_width(const BandParams& params) {
  return std::sqrt(params.lambda * params.lambda + 1.0 +
                   2.0 * params.lambda * std::sin(params.p));
}

double dos_analytic(double energy, const BandParams& params) {
  const double a = band_half_width(params);
  const double radicand = a * a - energy * energy;
  if (radicand <= kDosEdgeGuard)
    throw std::domain_error("dos_analytic: energy outside the band");
  return 1.0 / (kTwoPi * std::sqrt(radicand));
}

double dos_analytic_bin_average(double e_lo, double e_hi,
                                const BandParams& params) {
  if (!(e_hi > e_lo))
    throw std::domain_error("dos_analytic_bin_average: empty interval");
  const double a = band_half_width(params);
  const double lo = std::clamp(e_lo, -a, a);
  const double hi = std::clamp(e_hi, -a, a);
  if (!(hi > lo))
    throw std::domain_error("dos_analytic_bin_average: outside the band");
  return (std::asin(hi / a) - std::asin(lo / a)) / (kTwoPi * (e_hi - e_lo));
}

DosCurve dos_histogram(const BandParams& params, int n_k, int n_bins) {
  if (n_k < 1000)
    throw std::invalid_argument("dos_histogram: n_k must be >= 1000");
  if (n_bins < 2)
    throw std::invalid_argument("dos_histogram: need at least 2 bins");
  const double a = band_half_width(params);
  const double center = -std::cos(params.q);
  const double width = 2.0 * a / n_bins;
  if (!(width > 0.0))
    throw std::invalid_argument("dos_histogram: degenerate bin width");

  std::vector<std::int64_t> counts(n_bins, 0);
  for (int m = 0; m < n_k; ++m) {
    const double k = kTwoPi * m / n_k;
    const double e = dispersion(k, params) - center;
    int bin = static_cast<int>(std::floor((e + a) / width));
    bin = std::clamp(bin, 0, n_bins - 1);
    ++counts[bin];
  }

  DosCurve curve;
  curve.kind = DosCurve::Kind::histogram;
  curve.energies.resize(n_bins);
  curve.dos.resize(n_bins);
  for (int b = 0; b < n_bins; ++b) {
    curve.energies[b] = -a + (b + 0.5) * width; // midpoint bin centers
    curve.dos[b] = static_cast<double>(counts[b]) / (n_k * width);
  }
  return curve;
}

DosCurve dos_analytic_curve(const BandParams& params, int n_points) {
  if (n_points < 2)
    throw std::invalid_argument("dos_analytic_curve: need >= 2 points");
  const double a = band_half_width(params);
  DosCurve curve;
  curve.kind = DosCurve::Kind::analytic;
  for (int i = 0; i < n_points; ++i) {
    const double e = -a + (i + 0.5) * (2.0 * a / n_points);
    if (a * a - e * e <= kDosEdgeGuard) continue; // guarded edge points
    curve.energies.push_back(e);
    curve.dos.push_back(dos_analytic(e, params));
  }
  return curve;
}

SingleMagnonResult single_magnon_block(const ChainParams& params) {
  params.validate();
  const int n = params.n_sites;
  SparseOperator h0 = build_h0(params);
  SparseOperator hdm = build_hdm(params);
  SparseOperator h =
      add_scaled({{cplx{1.0, 0.0}, &h0}, {cplx{1.0, 0.0}, &hdm}});

  // One-flip basis: single up spin at site j -> basis index 2^(j-1).
  std::vector<std::uint32_t> idx(n);
  for (int j = 0; j < n; ++j) idx[j] = std::uint32_t{1} << j;

  SingleMagnonResult result;
  result.block = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& e : h.entries()) {
    // both row and col must be single-flip states
    auto rit = std::find(idx.begin(), idx.end(), e.row);
    auto cit = std::find(idx.begin(), idx.end(), e.col);
    if (rit != idx.end() && cit != idx.end())
      result.block(rit - idx.begin(), cit - idx.begin()) = e.value;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(result.block);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("single_magnon_block: diagonalization failed");
  result.eigenvalues.assign(es.eigenvalues().data(),
                            es.eigenvalues().data() + n);
  std::sort(result.eigenvalues.begin(), result.eigenvalues.end());
  return result;
}

} // namespace helix
