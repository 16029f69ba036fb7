#include "specflow/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace specflow::kernels::avx2 {

bool available() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// [re0+re1, im0+im1] of a register holding two interleaved complex values
inline cplx csum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  alignas(16) double out[2];
  _mm_store_pd(out, lo);
  return {out[0], out[1]};
}

}  // namespace

cplx dot_cr(const cplx* a, const double* x, std::size_t len) {
  const double* ap = reinterpret_cast<const double*>(a);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    __m256d vx = _mm256_loadu_pd(x + i);
    __m256d x01 = _mm256_permute4x64_pd(vx, 0x50);  // [x0,x0,x1,x1]
    __m256d x23 = _mm256_permute4x64_pd(vx, 0xFA);  // [x2,x2,x3,x3]
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(ap + 2 * i), x01, acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(ap + 2 * i + 4), x23, acc1);
  }
  cplx r = csum(_mm256_add_pd(acc0, acc1));
  for (; i < len; ++i) r += a[i] * x[i];
  return r;
}

cplx dot_cc(const cplx* a, const cplx* b, std::size_t len) {
  const double* ap = reinterpret_cast<const double*>(a);
  const double* bp = reinterpret_cast<const double*>(b);
  __m256d acc_d = _mm256_setzero_pd();  // a .* b        -> re parts
  __m256d acc_s = _mm256_setzero_pd();  // a .* swap(b)  -> im parts
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) {
    __m256d va = _mm256_loadu_pd(ap + 2 * i);
    __m256d vb = _mm256_loadu_pd(bp + 2 * i);
    acc_d = _mm256_fmadd_pd(va, vb, acc_d);
    acc_s = _mm256_fmadd_pd(va, _mm256_permute_pd(vb, 0x5), acc_s);
  }
  const __m256d sign = _mm256_set_pd(-1.0, 1.0, -1.0, 1.0);
  double re = hsum(acc_d);
  double im = hsum(_mm256_mul_pd(acc_s, sign));
  for (; i < len; ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  return {re, im};
}

double dot_rr(const double* x, const double* y, std::size_t len) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  double s = hsum(acc);
  for (; i < len; ++i) s += x[i] * y[i];
  return s;
}

void cmul_inplace(cplx* a, const cplx* b, std::size_t len) {
  double* ap = reinterpret_cast<double*>(a);
  const double* bp = reinterpret_cast<const double*>(b);
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) {
    __m256d va = _mm256_loadu_pd(ap + 2 * i);
    __m256d vb = _mm256_loadu_pd(bp + 2 * i);
    __m256d bre = _mm256_movedup_pd(vb);
    __m256d bim = _mm256_permute_pd(vb, 0xF);
    __m256d swp = _mm256_permute_pd(va, 0x5);
    _mm256_storeu_pd(ap + 2 * i,
                     _mm256_fmaddsub_pd(va, bre, _mm256_mul_pd(swp, bim)));
  }
  for (; i < len; ++i) a[i] *= b[i];
}

void axpy_cc(cplx alpha, const cplx* x, cplx* y, std::size_t len) {
  const double* xp = reinterpret_cast<const double*>(x);
  double* yp = reinterpret_cast<double*>(y);
  const __m256d are = _mm256_set1_pd(alpha.real());
  const __m256d aim = _mm256_set1_pd(alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) {
    __m256d vx = _mm256_loadu_pd(xp + 2 * i);
    __m256d swp = _mm256_permute_pd(vx, 0x5);
    __m256d prod = _mm256_fmaddsub_pd(vx, are, _mm256_mul_pd(swp, aim));
    _mm256_storeu_pd(yp + 2 * i,
                     _mm256_add_pd(_mm256_loadu_pd(yp + 2 * i), prod));
  }
  for (; i < len; ++i) y[i] += alpha * x[i];
}

}  // namespace specflow::kernels::avx2

#else  // non-x86 fallbacks; dispatcher selects scalar

namespace specflow::kernels::avx2 {
bool available() { return false; }
cplx dot_cr(const cplx* a, const double* x, std::size_t len) {
  return scalar::dot_cr(a, x, len);
}
cplx dot_cc(const cplx* a, const cplx* b, std::size_t len) {
  return scalar::dot_cc(a, b, len);
}
double dot_rr(const double* x, const double* y, std::size_t len) {
  return scalar::dot_rr(x, y, len);
}
void cmul_inplace(cplx* a, const cplx* b, std::size_t len) {
  scalar::cmul_inplace(a, b, len);
}
void axpy_cc(cplx alpha, const cplx* x, cplx* y, std::size_t len) {
  scalar::axpy_cc(alpha, x, y, len);
}
}  // namespace specflow::kernels::avx2

#endif
