#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

// Low-level arithmetic kernels used by the quadrature transforms and the
// sampled-field evaluations.  Every kernel has a scalar reference
// implementation and an AVX2+FMA variant; the dispatcher picks one at startup
// based on CPU capabilities.  Set SPECFLOW_KERNELS=scalar (or avx2) in the
// environment, or call force_backend(), to pin a backend.
//
// Complex arrays are std::complex<double> in the usual interleaved [re,im]
// layout.  Reductions may reassociate, so SIMD results can differ from the
// scalar ones by a few ulp; the equivalence tests bound that difference.

namespace specflow::kernels {

using cplx = std::complex<double>;

enum class Backend { scalar, avx2 };

Backend active_backend();
void force_backend(Backend b);
std::string_view backend_name(Backend b);

/// sum_i a[i] * x[i]
cplx dot_cr(const cplx* a, const double* x, std::size_t len);

/// sum_i conj(a[i]) * b[i]
cplx dot_cc(const cplx* a, const cplx* b, std::size_t len);

/// sum_i x[i] * y[i]
double dot_rr(const double* x, const double* y, std::size_t len);

/// a[i] *= b[i], elementwise complex product
void cmul_inplace(cplx* a, const cplx* b, std::size_t len);

/// y[i] += alpha * x[i]
void axpy_cc(cplx alpha, const cplx* x, cplx* y, std::size_t len);

namespace scalar {
cplx dot_cr(const cplx* a, const double* x, std::size_t len);
cplx dot_cc(const cplx* a, const cplx* b, std::size_t len);
double dot_rr(const double* x, const double* y, std::size_t len);
void cmul_inplace(cplx* a, const cplx* b, std::size_t len);
void axpy_cc(cplx alpha, const cplx* x, cplx* y, std::size_t len);
}  // namespace scalar

// Present only on x86-64 builds; the dispatcher never selects it unless the
// CPU reports AVX2 and FMA.
namespace avx2 {
bool available();
cplx dot_cr(const cplx* a, const double* x, std::size_t len);
cplx dot_cc(const cplx* a, const cplx* b, std::size_t len);
double dot_rr(const double* x, const double* y, std::size_t len);
void cmul_inplace(cplx* a, const cplx* b, std::size_t len);
void axpy_cc(cplx alpha, const cplx* x, cplx* y, std::size_t len);
}  // namespace avx2

}  // namespace specflow::kernels
