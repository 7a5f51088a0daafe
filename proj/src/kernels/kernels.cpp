#include "ops.hpp"

#include <cstdlib>
#include <cstring>

namespace helix::kernels {

namespace detail {

namespace {

void axpy_scalar(std::size_t n, cplx a, const cplx* x, cplx* y) {
  const double ar = a.real(), ai = a.imag();
  const double* xs = reinterpret_cast<const double*>(x);
  double* ys = reinterpret_cast<double*>(y);
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = xs[2 * i], xi = xs[2 * i + 1];
    ys[2 * i] += ar * xr - ai * xi;
    ys[2 * i + 1] += ar * xi + ai * xr;
  }
}

void scale_scalar(std::size_t n, cplx a, cplx* x) {
  const double ar = a.real(), ai = a.imag();
  double* xs = reinterpret_cast<double*>(x);
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = xs[2 * i], xi = xs[2 * i + 1];
    xs[2 * i] = ar * xr - ai * xi;
    xs[2 * i + 1] = ar * xi + ai * xr;
  }
}

cplx dot_scalar(std::size_t n, const cplx* u, const cplx* v) {
  double re = 0.0, im = 0.0;
  const double* us = reinterpret_cast<const double*>(u);
  const double* vs = reinterpret_cast<const double*>(v);
  for (std::size_t i = 0; i < n; ++i) {
    const double ur = us[2 * i], ui = us[2 * i + 1];
    const double vr = vs[2 * i], vi = vs[2 * i + 1];
    re += ur * vr - ui * vi;
    im += ur * vi + ui * vr;
  }
  return {re, im};
}

cplx dot_conj_scalar(std::size_t n, const cplx* u, const cplx* v) {
  double re = 0.0, im = 0.0;
  const double* us = reinterpret_cast<const double*>(u);
  const double* vs = reinterpret_cast<const double*>(v);
  for (std::size_t i = 0; i < n; ++i) {
    const double ur = us[2 * i], ui = us[2 * i + 1];
    const double vr = vs[2 * i], vi = vs[2 * i + 1];
    re += ur * vr + ui * vi;
    im += ur * vi - ui * vr;
  }
  return {re, im};
}

double norm_sq_scalar(std::size_t n, const cplx* x) {
  double acc = 0.0;
  const double* xs = reinterpret_cast<const double*>(x);
  for (std::size_t i = 0; i < 2 * n; ++i) acc += xs[i] * xs[i];
  return acc;
}

} // namespace

const Ops scalar_ops = {axpy_scalar, scale_scalar, dot_scalar,
                        dot_conj_scalar, norm_sq_scalar};

} // namespace detail

namespace {

bool cpu_has_avx2() {
#if defined(HELIX_HAVE_AVX2_TU)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

struct State {
  const detail::Ops* ops;
  Backend backend;
};

State initial_state() {
  Backend want = cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
  if (const char* env = std::getenv("HELIX_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) want = Backend::scalar;
    if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) want = Backend::avx2;
  }
#if defined(HELIX_HAVE_AVX2_TU)
  if (want == Backend::avx2) return {&detail::avx2_ops, Backend::avx2};
#endif
  return {&detail::scalar_ops, Backend::scalar};
}

State& state() {
  static State s = initial_state();
  return s;
}

} // namespace

Backend active_backend() { return state().backend; }

std::string_view backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

bool backend_supported(Backend b) {
  return b == Backend::scalar || cpu_has_avx2();
}

bool set_backend(Backend b) {
  if (!backend_supported(b)) return false;
  if (b == Backend::scalar) {
    state() = {&detail::scalar_ops, Backend::scalar};
    return true;
  }
#if defined(HELIX_HAVE_AVX2_TU)
  state() = {&detail::avx2_ops, Backend::avx2};
  return true;
#else
  return false;
#endif
}

void axpy(std::size_t n, cplx a, const cplx* x, cplx* y) {
  state().ops->axpy(n, a, x, y);
}

void scale(std::size_t n, cplx a, cplx* x) { state().ops->scale(n, a, x); }

cplx dot(std::size_t n, const cplx* u, const cplx* v) {
  return state().ops->dot(n, u, v);
}

cplx dot_conj(std::size_t n, const cplx* u, const cplx* v) {
  return state().ops->dot_conj(n, u, v);
}

double norm_sq(std::size_t n, const cplx* x) { return state().ops->norm_sq(n, x); }

} // namespace helix::kernels
