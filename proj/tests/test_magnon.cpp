#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helix/magnon.hpp"

using namespace helix;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;
}

TEST_CASE("dispersion closed form") {
  const double q = 6.0 * kPi / 10.0;
  BandParams resonant{q, q, 1.0};
  CHECK(std::abs(dispersion(q, resonant)) < 1e-15);
  CHECK(dispersion(-q, resonant) ==
        doctest::Approx(std::sin(2.0 * q)).epsilon(1e-12));
  // direct formula evaluation at k = 0
  CHECK(dispersion(0.0, resonant) ==
        doctest::Approx(1.0 - std::cos(0.6 * kPi) - std::sin(-0.6 * kPi))
            .epsilon(1e-12));
  CHECK(dispersion(0.0, resonant) == doctest::Approx(2.260074).epsilon(1e-6));
}

TEST_CASE("band half-width against a brute-force scan") {
  for (double lambda : {0.0, 0.7, 1.0, 5.0}) {
    BandParams band{0.6 * kPi, 0.4 * kPi, lambda};
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i < 1000000; ++i) {
      const double e = dispersion(kTwoPi * i / 1000000, band);
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
    CHECK(std::abs((hi - lo) - 2.0 * band_half_width(band)) < 1e-9);
  }
}

TEST_CASE("analytic dos") {
  BandParams band{0.4 * kPi, 0.4 * kPi, 1.0};
  // reference value evaluated directly from the closed form
  const double want = 1.0 / (kTwoPi * std::sqrt(2.0 + 2.0 * std::sin(0.4 * kPi)));
  CHECK(dos_analytic(0.0, band) == doctest::Approx(want).epsilon(1e-12));
  CHECK(want == doctest::Approx(0.08057).epsilon(1e-4));

  BandParams free_band{0.4 * kPi, 0.0, 0.0};
  CHECK(dos_analytic(0.0, free_band) ==
        doctest::Approx(1.0 / kTwoPi).epsilon(1e-12));

  const double a = band_half_width(band);
  CHECK_THROWS_AS(dos_analytic(a + 0.1, band), std::domain_error);
  CHECK_THROWS_AS(dos_analytic(a, band), std::domain_error);
}

TEST_CASE("bin average of the analytic dos") {
  BandParams band{0.4 * kPi, 0.4 * kPi, 1.0};
  // away from the edges the bin average approaches the midpoint value
  const double w = 1e-4;
  CHECK(dos_analytic_bin_average(-w / 2, w / 2, band) ==
        doctest::Approx(dos_analytic(0.0, band)).epsilon(1e-8));
  // integrating over the whole band gives 1/2 per momentum branch
  const double a = band_half_width(band);
  CHECK(dos_analytic_bin_average(-a, a, band) * 2.0 * a ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(dos_analytic_bin_average(a + 1.0, a + 2.0, band),
                  std::domain_error);
  CHECK_THROWS_AS(dos_analytic_bin_average(1.0, 1.0, band),
                  std::domain_error);
}

TEST_CASE("histogram dos") {
  BandParams band{0.4 * kPi, 0.4 * kPi, 5.0};
  CHECK_THROWS_AS(dos_histogram(band, 100, 50), std::invalid_argument);

  DosCurve hist = dos_histogram(band, 100000, 200);
  REQUIRE(hist.energies.size() == 200);
  CHECK(hist.kind == DosCurve::Kind::histogram);

  const double a = band_half_width(band);
  const double w = 2.0 * a / 200;
  double integral = 0.0;
  double max_rel = 0.0;
  for (std::size_t i = 0; i < hist.energies.size(); ++i) {
    CHECK(hist.dos[i] >= 0.0);
    integral += hist.dos[i] * w;
    const double e = hist.energies[i];
    if (a * a - e * e <= 0.05) continue;
    // two momentum branches fold onto each energy
    const double want =
        2.0 * dos_analytic_bin_average(e - w / 2, e + w / 2, band);
    max_rel = std::max(max_rel, std::abs(hist.dos[i] - want) / want);
  }
  CHECK(std::abs(integral - 1.0) < 1e-3);
  CHECK(max_rel < 0.01);
}

TEST_CASE("dos at zero energy falls with the dm coupling") {
  double prev = 1e300;
  for (double lambda = 1.0; lambda <= 8.0; lambda += 0.25) {
    const double d0 = dos_analytic(0.0, BandParams{0.4 * kPi, 0.4 * kPi, lambda});
    CHECK(d0 < prev);
    prev = d0;
  }
}

TEST_CASE("single-magnon sector equals the boson band") {
  for (int n : {4, 6, 10}) {
    for (double lambda : {0.0, 1.0, 5.0}) {
      ChainParams p;
      p.n_sites = n;
      p.q = ChainParams::momentum(std::max(1, 3 * n / 10), n);
      p.p = p.q;
      p.lambda = lambda;
      p.drive_site = 1;
      SingleMagnonResult res = single_magnon_block(p);
      REQUIRE(res.eigenvalues.size() == std::size_t(n));
      std::vector<double> want;
      for (int m = 0; m < n; ++m)
        want.push_back(dispersion(kTwoPi * m / n, {p.q, p.p, lambda}));
      std::sort(want.begin(), want.end());
      for (int i = 0; i < n; ++i)
        CHECK(std::abs(res.eigenvalues[i] - want[i]) < 1e-12);
    }
  }
}

TEST_CASE("resonant zero mode in the one-flip sector") {
  ChainParams p;
  p.n_sites = 10;
  p.q = ChainParams::momentum(3, 10);
  p.p = p.q;
  p.lambda = 1.0;
  SingleMagnonResult res = single_magnon_block(p);
  bool has_zero = false;
  for (double e : res.eigenvalues)
    if (std::abs(e) < 1e-12) has_zero = true;
  CHECK(has_zero);

  // lambda = 0 reduces to the plain shifted cosine band
  p.lambda = 0.0;
  SingleMagnonResult xx = single_magnon_block(p);
  std::vector<double> want;
  for (int m = 0; m < 10; ++m)
    want.push_back(std::cos(kTwoPi * m / 10) - std::cos(p.q));
  std::sort(want.begin(), want.end());
  for (int i = 0; i < 10; ++i)
    CHECK(std::abs(xx.eigenvalues[i] - want[i]) < 1e-12);
}
