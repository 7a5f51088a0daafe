#include "helix/states.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace helix {

namespace {

cplx polar1(double phase) { return {std::cos(phase), std::sin(phase)}; }

} // namespace

double StateFamily::max_cross_overlap() const {
  double m = 0.0;
  for (std::size_t a = 0; a < members.size(); ++a)
    for (std::size_t b = a + 1; b < members.size(); ++b)
      m = std::max(m, std::abs(inner(members[a], members[b])));
  return m;
}

double StateFamily::max_norm_deviation() const {
  double m = 0.0;
  for (const auto& v : members) m = std::max(m, std::abs(v.norm() - 1.0));
  return m;
}

StateVector ferro_down(int n_sites) {
  StateVector v = StateVector::zero(n_sites);
  v.amp[0] = cplx{1.0, 0.0};
  return v;
}

StateVector ferro_up(int n_sites) {
  StateVector v = StateVector::zero(n_sites);
  v.amp[v.dim() - 1] = cplx{1.0, 0.0};
  return v;
}

StateVector magnon_raise(const StateVector& v, double q, int sign) {
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("magnon_raise: sign must be +1 or -1");
  const int n = v.n_sites;
  const std::uint32_t dim = std::uint32_t{1} << n;
  StateVector out = StateVector::zero(n);
  for (int j = 1; j <= n; ++j) {
    const std::uint32_t bit = std::uint32_t{1} << (j - 1);
    const cplx phase = polar1(sign * q * j);
    for (std::uint32_t s = 0; s < dim; ++s)
      if (!(s & bit)) out.amp[s | bit] += phase * v.amp[s];
  }
  return out;
}

StateVector phantom_state(int n, double q, int sign, int n_sites) {
  if (n < 0 || n > n_sites)
    throw std::out_of_range("phantom_state: n out of range");
  StateVector v = ferro_down(n_sites);
  // Renormalizing after each raise keeps amplitudes O(1); the factor
  // discarded is real positive, so the phase matches 1/Omega_n exactly.
  for (int step = 0; step < n; ++step) {
    v = magnon_raise(v, q, sign);
    v.normalize();
  }
  return v;
}

StateFamily phantom_family(double q, int sign, int n_sites) {
  StateFamily fam;
  fam.label = sign > 0 ? FamilyLabel::phantom_q : FamilyLabel::phantom_minus_q;
  StateVector v = ferro_down(n_sites);
  fam.members.push_back(v);
  for (int n = 1; n <= n_sites; ++n) {
    v = magnon_raise(v, q, sign);
    v.normalize();
    fam.members.push_back(v);
  }
  return fam;
}

StateVector helix_state(const HelixSpec& spec, int n_sites) {
  StateVector v = StateVector::zero(n_sites);
  const double c = std::cos(spec.theta / 2.0);
  const double s = std::sin(spec.theta / 2.0);
  const std::uint32_t dim = std::uint32_t{1} << n_sites;
  for (std::uint32_t b = 0; b < dim; ++b) {
    cplx amp{1.0, 0.0};
    for (int j = 1; j <= n_sites; ++j) {
      if (b & (std::uint32_t{1} << (j - 1)))
        amp *= cplx{0.0, -s} * polar1(spec.direction * spec.q * j);
      else
        amp *= c;
    }
    v.amp[b] = amp;
  }
  return v;
}

SparseOperator tilted_site_operator(TiltKind kind, int site,
                                    const HelixSpec& spec, int n_sites) {
  if (site < 1 || site > n_sites)
    throw std::out_of_range("tilted_site_operator: site out of range");
  const double qd = spec.direction * spec.q;
  const double c2 = std::cos(spec.theta / 2.0) * std::cos(spec.theta / 2.0);
  const double s2 = std::sin(spec.theta / 2.0) * std::sin(spec.theta / 2.0);
  const double st = std::sin(spec.theta);

  auto raise = [&]() {
    SparseOperator sp = site_operator(SpinKind::s_plus, site, n_sites);
    SparseOperator sm = site_operator(SpinKind::s_minus, site, n_sites);
    SparseOperator sz = site_operator(SpinKind::sz, site, n_sites);
    return add_scaled({{cplx{c2, 0.0}, &sp},
                       {s2 * polar1(-2.0 * qd * site), &sm},
                       {cplx{0.0, st} * polar1(-qd * site), &sz}});
  };

  switch (kind) {
    case TiltKind::raise:
      return raise();
    case TiltKind::lower:
      return raise().adjoint();
    case TiltKind::z: {
      SparseOperator up = raise();
      SparseOperator dn = up.adjoint();
      SparseOperator ab = multiply(up, dn);
      SparseOperator ba = multiply(dn, up);
      return add_scaled({{cplx{0.5, 0.0}, &ab}, {cplx{-0.5, 0.0}, &ba}});
    }
  }
  throw std::invalid_argument("tilted_site_operator: unknown kind");
}

SparseOperator tilted_collective_raise(const HelixSpec& spec, int n_sites) {
  std::vector<SparseOperator> parts;
  parts.reserve(n_sites);
  for (int j = 1; j <= n_sites; ++j)
    parts.push_back(tilted_site_operator(TiltKind::raise, j, spec, n_sites));
  std::vector<std::pair<cplx, const SparseOperator*>> terms;
  for (const auto& p : parts) terms.push_back({cplx{1.0, 0.0}, &p});
  return add_scaled(terms);
}

StateFamily tilted_family(const HelixSpec& spec, int n_sites) {
  StateFamily fam;
  fam.label = FamilyLabel::tilted;
  SparseOperator raise = tilted_collective_raise(spec, n_sites);
  StateVector v = helix_state(spec, n_sites);
  fam.members.push_back(v);
  fam.basis_weights.push_back(1.0);
  for (int n = 1; n <= n_sites; ++n) {
    v = raise.apply(v);
    v.normalize();
    fam.members.push_back(v);
    fam.basis_weights.push_back(fam.basis_weights.back() * n);
  }
  return fam;
}

StateVector tilted_top_product(const HelixSpec& spec, int n_sites) {
  StateVector v = StateVector::zero(n_sites);
  const double c = std::cos(spec.theta / 2.0);
  const double s = std::sin(spec.theta / 2.0);
  const std::uint32_t dim = std::uint32_t{1} << n_sites;
  for (std::uint32_t b = 0; b < dim; ++b) {
    // bit set -> |up>_j factor cos(theta/2); bit clear -> the rotated
    // down amplitude -i e^{-i dir q j} sin(theta/2)
    cplx amp{1.0, 0.0};
    for (int j = 1; j <= n_sites; ++j) {
      if (b & (std::uint32_t{1} << (j - 1)))
        amp *= c;
      else
        amp *= cplx{0.0, -s} * polar1(-spec.direction * spec.q * j);
    }
    v.amp[b] = amp;
  }
  return v;
}

} // namespace helix
