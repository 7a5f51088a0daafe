#include <doctest.h>

#include <complex>
#include <random>
#include <vector>

#include "helix/kernels.hpp"

using helix::kernels::Backend;
using cplx = std::complex<double>;

namespace {

std::vector<cplx> random_vec(std::size_t n, std::mt19937& rng) {
  std::normal_distribution<double> g;
  std::vector<cplx> v(n);
  for (auto& x : v) x = {g(rng), g(rng)};
  return v;
}

// Guard that restores the previously active backend.
struct BackendGuard {
  Backend saved = helix::kernels::active_backend();
  ~BackendGuard() { helix::kernels::set_backend(saved); }
};

} // namespace

TEST_CASE("scalar backend is always supported") {
  CHECK(helix::kernels::backend_supported(Backend::scalar));
  CHECK(helix::kernels::backend_name(Backend::scalar) == "scalar");
  CHECK(helix::kernels::backend_name(Backend::avx2) == "avx2");
}

TEST_CASE("backend switching round-trips") {
  BackendGuard guard;
  REQUIRE(helix::kernels::set_backend(Backend::scalar));
  CHECK(helix::kernels::active_backend() == Backend::scalar);
  if (helix::kernels::backend_supported(Backend::avx2)) {
    REQUIRE(helix::kernels::set_backend(Backend::avx2));
    CHECK(helix::kernels::active_backend() == Backend::avx2);
  } else {
    CHECK_FALSE(helix::kernels::set_backend(Backend::avx2));
    CHECK(helix::kernels::active_backend() == Backend::scalar);
  }
}

TEST_CASE("simd kernels agree with the scalar reference") {
  if (!helix::kernels::backend_supported(Backend::avx2)) {
    MESSAGE("avx2 not supported on this host; equivalence trivially skipped");
    return;
  }
  BackendGuard guard;
  std::mt19937 rng(7);
  // odd lengths exercise the vector remainder handling
  for (std::size_t n : {std::size_t{1}, std::size_t{2}, std::size_t{3},
                        std::size_t{4}, std::size_t{7}, std::size_t{8},
                        std::size_t{63}, std::size_t{1024},
                        std::size_t{1025}}) {
    const auto u = random_vec(n, rng);
    const auto v = random_vec(n, rng);
    const cplx a{0.37, -1.21};

    helix::kernels::set_backend(Backend::scalar);
    auto y_s = v;
    helix::kernels::axpy(n, a, u.data(), y_s.data());
    auto x_s = u;
    helix::kernels::scale(n, a, x_s.data());
    const cplx dot_s = helix::kernels::dot(n, u.data(), v.data());
    const cplx dc_s = helix::kernels::dot_conj(n, u.data(), v.data());
    const double ns_s = helix::kernels::norm_sq(n, u.data());

    helix::kernels::set_backend(Backend::avx2);
    auto y_v = v;
    helix::kernels::axpy(n, a, u.data(), y_v.data());
    auto x_v = u;
    helix::kernels::scale(n, a, x_v.data());
    const cplx dot_v = helix::kernels::dot(n, u.data(), v.data());
    const cplx dc_v = helix::kernels::dot_conj(n, u.data(), v.data());
    const double ns_v = helix::kernels::norm_sq(n, u.data());

    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(y_s[i] - y_v[i]) < 1e-13);
      CHECK(std::abs(x_s[i] - x_v[i]) < 1e-13);
    }
    const double scale_tol = 1e-13 * (1.0 + std::sqrt(double(n)));
    CHECK(std::abs(dot_s - dot_v) < scale_tol * (1.0 + std::abs(dot_s)));
    CHECK(std::abs(dc_s - dc_v) < scale_tol * (1.0 + std::abs(dc_s)));
    CHECK(std::abs(ns_s - ns_v) < scale_tol * (1.0 + ns_s));
  }
}

TEST_CASE("kernel reference semantics") {
  std::mt19937 rng(11);
  const std::size_t n = 17;
  const auto u = random_vec(n, rng);
  const auto v = random_vec(n, rng);
  const cplx a{-0.5, 2.0};

  auto y = v;
  helix::kernels::axpy(n, a, u.data(), y.data());
  cplx dot_ref{0.0, 0.0}, dc_ref{0.0, 0.0};
  double ns_ref = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(std::abs(y[i] - (v[i] + a * u[i])) < 1e-15);
    dot_ref += u[i] * v[i];
    dc_ref += std::conj(u[i]) * v[i];
    ns_ref += std::norm(u[i]);
  }
  CHECK(std::abs(helix::kernels::dot(n, u.data(), v.data()) - dot_ref) <
        1e-13);
  CHECK(std::abs(helix::kernels::dot_conj(n, u.data(), v.data()) - dc_ref) <
        1e-13);
  CHECK(helix::kernels::norm_sq(n, u.data()) ==
        doctest::Approx(ns_ref).epsilon(1e-13));
}
