#include "specflow/kernels.hpp"

namespace specflow::kernels::scalar {

cplx dot_cr(const cplx* a, const double* x, std::size_t len) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    re += a[i].real() * x[i];
    im += a[i].imag() * x[i];
  }
  return {re, im};
}

cplx dot_cc(const cplx* a, const cplx* b, std::size_t len) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  return {re, im};
}

double dot_rr(const double* x, const double* y, std::size_t len) {
  double s = 0.0;
  for (std::size_t i = 0; i < len; ++i) s += x[i] * y[i];
  return s;
}

void cmul_inplace(cplx* a, const cplx* b, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) {
    const double re = a[i].real() * b[i].real() - a[i].imag() * b[i].imag();
    const double im = a[i].real() * b[i].imag() + a[i].imag() * b[i].real();
    a[i] = {re, im};
  }
}

void axpy_cc(cplx alpha, const cplx* x, cplx* y, std::size_t len) {
  const double ar = alpha.real(), ai = alpha.imag();
  for (std::size_t i = 0; i < len; ++i) {
    const double re = ar * x[i].real() - ai * x[i].imag();
    const double im = ar * x[i].imag() + ai * x[i].real();
    y[i] = {y[i].real() + re, y[i].imag() + im};
  }
}

}  // namespace specflow::kernels::scalar
