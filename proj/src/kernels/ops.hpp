#pragma once

#include "helix/kernels.hpp"

// Internal kernel function tables shared between the dispatcher and the
// per-ISA translation units.
namespace helix::kernels::detail {

struct Ops {
  void (*axpy)(std::size_t, cplx, const cplx*, cplx*);
  void (*scale)(std::size_t, cplx, cplx*);
  cplx (*dot)(std::size_t, const cplx*, const cplx*);
  cplx (*dot_conj)(std::size_t, const cplx*, const cplx*);
  double (*norm_sq)(std::size_t, const cplx*);
};

extern const Ops scalar_ops;

#if defined(HELIX_HAVE_AVX2_TU)
extern const Ops avx2_ops;
#endif

} // namespace helix::kernels::detail
