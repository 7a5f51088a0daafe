#include "helix/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace helix {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool on_momentum_grid(double k, int n, double tol) {
  const double ratio = k * n / kTwoPi;
  return std::abs(ratio - std::round(ratio)) < tol;
}

cplx polar1(double phase) { return {std::cos(phase), std::sin(phase)}; }

} // namespace

double ChainParams::momentum(int numerator, int n_sites) {
  return kTwoPi * numerator / n_sites;
}

void ChainParams::validate() const {
  if (n_sites < 2 || n_sites > kMaxSites)
    throw std::invalid_argument("ChainParams: n_sites out of range");
  if (!on_momentum_grid(p, n_sites, 1e-9))
    throw std::invalid_argument(
        "ChainParams: p must be 2*pi*n/N (single-value condition)");
  if (kappa < 0.0 || delta < 0.0)
    throw std::invalid_argument("ChainParams: kappa and delta must be >= 0");
  if (drive_site < 1 || drive_site > n_sites)
    throw std::invalid_argument("ChainParams: drive_site out of range");
}

bool ChainParams::q_commensurate(double tol) const {
  return on_momentum_grid(q, n_sites, tol);
}

SparseOperator build_h0(const ChainParams& params) {
  params.validate();
  const int n = params.n_sites;
  const double cq = std::cos(params.q);
  const std::uint32_t dim = std::uint32_t{1} << n;
  SparseOperator h(dim);
  for (std::uint32_t s = 0; s < dim; ++s) {
    double diag = 0.0;
    for (int j = 1; j <= n; ++j) {
      const std::uint32_t b1 = std::uint32_t{1} << (j - 1);
      const std::uint32_t b2 = std::uint32_t{1} << (j % n);
      const double z1 = (s & b1) ? 0.5 : -0.5;
      const double z2 = (s & b2) ? 0.5 : -0.5;
      diag += cq * (z1 * z2 - 0.25);
      // (1/2)(s_j^+ s_{j+1}^- + h.c.) flip-flop
      const bool u1 = s & b1, u2 = s & b2;
      if (u1 != u2) h.add(s ^ b1 ^ b2, s, cplx{0.5, 0.0});
    }
    if (diag != 0.0) h.add(s, s, cplx{diag, 0.0});
  }
  h.finalize();
  return h;
}

SparseOperator build_hdm(const ChainParams& params) {
  params.validate();
  const int n = params.n_sites;
  const std::uint32_t dim = std::uint32_t{1} << n;
  const cplx fwd = cplx{0.0, 0.5 * params.lambda} * polar1(-params.p);
  const cplx bwd = cplx{0.0, -0.5 * params.lambda} * polar1(params.p);
  SparseOperator h(dim);
  if (params.lambda != 0.0) {
    for (std::uint32_t s = 0; s < dim; ++s) {
      for (int j = 1; j <= n; ++j) {
        const std::uint32_t b1 = std::uint32_t{1} << (j - 1);
        const std::uint32_t b2 = std::uint32_t{1} << (j % n);
        const bool u1 = s & b1, u2 = s & b2;
        // i*lambda e^{-ip} s_j^+ s_{j+1}^- needs j down, j+1 up
        if (!u1 && u2) h.add(s ^ b1 ^ b2, s, fwd);
        // -i*lambda e^{+ip} s_j^- s_{j+1}^+ needs j up, j+1 down
        if (u1 && !u2) h.add(s ^ b1 ^ b2, s, bwd);
      }
    }
  }
  h.finalize();
  return h;
}

SparseOperator build_hi_global(const ChainParams& params) {
  params.validate();
  const int n = params.n_sites;
  const double c2 = std::cos(params.theta / 2.0) * std::cos(params.theta / 2.0);
  const double s2 = std::sin(params.theta / 2.0) * std::sin(params.theta / 2.0);
  const double st = std::sin(params.theta);
  const double k = params.kappa;

  // B_j . s_j with B_j^x = kappa [cos^2(theta/2) + e^{-2iqj} sin^2(theta/2)],
  // B_j^y = i*kappa [cos^2(theta/2) - e^{-2iqj} sin^2(theta/2)],
  // B_j^z = i*kappa e^{-iqj} sin(theta).
  std::vector<SparseOperator> parts;
  std::vector<cplx> coeffs;
  for (int j = 1; j <= n; ++j) {
    const cplx e2 = polar1(-2.0 * params.q * j);
    const cplx e1 = polar1(-params.q * j);
    parts.push_back(site_operator(SpinKind::sx, j, n));
    coeffs.push_back(k * (c2 + e2 * s2));
    parts.push_back(site_operator(SpinKind::sy, j, n));
    coeffs.push_back(cplx{0.0, k} * (c2 - e2 * s2));
    parts.push_back(site_operator(SpinKind::sz, j, n));
    coeffs.push_back(cplx{0.0, k * st} * e1);
  }
  std::vector<std::pair<cplx, const SparseOperator*>> terms;
  for (std::size_t i = 0; i < parts.size(); ++i)
    terms.push_back({coeffs[i], &parts[i]});
  return add_scaled(terms);
}

SparseOperator build_hi_local(const ChainParams& params) {
  params.validate();
  const HelixSpec spec = params.helix_spec();
  SparseOperator raise = tilted_site_operator(TiltKind::raise,
                                              params.drive_site, spec,
                                              params.n_sites);
  SparseOperator comp = tilted_site_operator(TiltKind::z, params.drive_site,
                                             spec, params.n_sites);
  return add_scaled({{cplx{params.kappa, 0.0}, &raise},
                     {cplx{0.0, params.delta}, &comp}});
}

SparseOperator build_hdrvn(const ChainParams& params) {
  SparseOperator h0 = build_h0(params);
  SparseOperator hdm = build_hdm(params);
  SparseOperator hi = build_hi_local(params);
  return add_scaled({{cplx{1.0, 0.0}, &h0},
                     {cplx{1.0, 0.0}, &hdm},
                     {cplx{1.0, 0.0}, &hi}});
}

} // namespace helix
