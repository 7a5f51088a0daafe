#include "ops.hpp"

#if defined(HELIX_HAVE_AVX2_TU)

#include <immintrin.h>

// AVX2+FMA kernels for interleaved complex<double> arrays (two complex
// numbers per 256-bit vector). Tails fall back to scalar arithmetic.
namespace helix::kernels::detail {

namespace {

// Complex multiply of packed pairs: (a.re*b.re - a.im*b.im,
//                                    a.re*b.im + a.im*b.re)
inline __m256d cmul(__m256d a, __m256d b) {
  __m256d b_re = _mm256_movedup_pd(b);        // [br, br]
  __m256d b_im = _mm256_permute_pd(b, 0xF);   // [bi, bi]
  __m256d a_sw = _mm256_permute_pd(a, 0x5);   // [ai, ar]
  return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

inline cplx reduce_pairs(__m256d acc) {
  __m128d lo = _mm256_castpd256_pd128(acc);
  __m128d hi = _mm256_extractf128_pd(acc, 1);
  __m128d s = _mm_add_pd(lo, hi);
  alignas(16) double out[2];
  _mm_store_pd(out, s);
  return {out[0], out[1]};
}

void axpy_avx2(std::size_t n, cplx a, const cplx* x, cplx* y) {
  const double* xs = reinterpret_cast<const double*>(x);
  double* ys = reinterpret_cast<double*>(y);
  const __m256d a_re = _mm256_set1_pd(a.real());
  const __m256d a_im = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xs + 2 * i);
    __m256d yv = _mm256_loadu_pd(ys + 2 * i);
    __m256d x_sw = _mm256_permute_pd(xv, 0x5);
    __m256d prod = _mm256_fmaddsub_pd(a_re, xv, _mm256_mul_pd(a_im, x_sw));
    _mm256_storeu_pd(ys + 2 * i, _mm256_add_pd(yv, prod));
  }
  for (; i < n; ++i) {
    const double xr = xs[2 * i], xi = xs[2 * i + 1];
    ys[2 * i] += a.real() * xr - a.imag() * xi;
    ys[2 * i + 1] += a.real() * xi + a.imag() * xr;
  }
}

void scale_avx2(std::size_t n, cplx a, cplx* x) {
  double* xs = reinterpret_cast<double*>(x);
  const __m256d a_re = _mm256_set1_pd(a.real());
  const __m256d a_im = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xs + 2 * i);
    __m256d x_sw = _mm256_permute_pd(xv, 0x5);
    __m256d prod = _mm256_fmaddsub_pd(a_re, xv, _mm256_mul_pd(a_im, x_sw));
    _mm256_storeu_pd(xs + 2 * i, prod);
  }
  for (; i < n; ++i) {
    const double xr = xs[2 * i], xi = xs[2 * i + 1];
    xs[2 * i] = a.real() * xr - a.imag() * xi;
    xs[2 * i + 1] = a.real() * xi + a.imag() * xr;
  }
}

cplx dot_avx2(std::size_t n, const cplx* u, const cplx* v) {
  const double* us = reinterpret_cast<const double*>(u);
  const double* vs = reinterpret_cast<const double*>(v);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d uv = _mm256_loadu_pd(us + 2 * i);
    __m256d vv = _mm256_loadu_pd(vs + 2 * i);
    acc = _mm256_add_pd(acc, cmul(uv, vv));
  }
  cplx out = reduce_pairs(acc);
  for (; i < n; ++i) {
    const double ur = us[2 * i], ui = us[2 * i + 1];
    const double vr = vs[2 * i], vi = vs[2 * i + 1];
    out += cplx{ur * vr - ui * vi, ur * vi + ui * vr};
  }
  return out;
}

cplx dot_conj_avx2(std::size_t n, const cplx* u, const cplx* v) {
  const double* us = reinterpret_cast<const double*>(u);
  const double* vs = reinterpret_cast<const double*>(v);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d uv = _mm256_loadu_pd(us + 2 * i);
    __m256d vv = _mm256_loadu_pd(vs + 2 * i);
    // even lane: ur*vr + ui*vi, odd lane: ur*vi - ui*vr
    __m256d u_re = _mm256_movedup_pd(uv);
    __m256d u_im = _mm256_permute_pd(uv, 0xF);
    __m256d v_sw = _mm256_permute_pd(vv, 0x5);
    __m256d t = _mm256_mul_pd(u_im, v_sw);
    acc = _mm256_add_pd(acc, _mm256_fmsubadd_pd(u_re, vv, t));
  }
  cplx out = reduce_pairs(acc);
  for (; i < n; ++i) {
    const double ur = us[2 * i], ui = us[2 * i + 1];
    const double vr = vs[2 * i], vi = vs[2 * i + 1];
    out += cplx{ur * vr + ui * vi, ur * vi - ui * vr};
  }
  return out;
}

double norm_sq_avx2(std::size_t n, const cplx* x) {
  const double* xs = reinterpret_cast<const double*>(x);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xs + 2 * i);
    acc = _mm256_fmadd_pd(xv, xv, acc);
  }
  cplx pair = reduce_pairs(acc);
  double out = pair.real() + pair.imag();
  for (; i < n; ++i)
    out += xs[2 * i] * xs[2 * i] + xs[2 * i + 1] * xs[2 * i + 1];
  return out;
}

} // namespace

const Ops avx2_ops = {axpy_avx2, scale_avx2, dot_avx2, dot_conj_avx2,
                      norm_sq_avx2};

} // namespace helix::kernels::detail

#endif // HELIX_HAVE_AVX2_TU
