#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

// Runtime-dispatched complex vector kernels. A scalar reference path is
// always available; an AVX2+FMA path is selected at startup when the CPU
// supports it. The HELIX_KERNELS environment variable ("scalar" or "avx2")
// overrides the automatic choice.
namespace helix::kernels {

using cplx = std::complex<double>;

enum class Backend { scalar, avx2 };

Backend active_backend();
std::string_view backend_name(Backend b);

/// Switch the active backend. Returns false (and leaves the backend
/// unchanged) if the requested backend is not supported on this CPU.
bool set_backend(Backend b);

bool backend_supported(Backend b);

/// y[i] += a * x[i]
void axpy(std::size_t n, cplx a, const cplx* x, cplx* y);

/// x[i] *= a
void scale(std::size_t n, cplx a, cplx* x);

/// sum_i u[i] * v[i]   (no conjugation)
cplx dot(std::size_t n, const cplx* u, const cplx* v);

/// sum_i conj(u[i]) * v[i]
cplx dot_conj(std::size_t n, const cplx* u, const cplx* v);

/// sum_i |x[i]|^2
double norm_sq(std::size_t n, const cplx* x);

} // namespace helix::kernels
