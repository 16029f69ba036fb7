#include "specflow/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace specflow::kernels {

namespace {

struct Table {
  cplx (*dot_cr)(const cplx*, const double*, std::size_t);
  cplx (*dot_cc)(const cplx*, const cplx*, std::size_t);
  double (*dot_rr)(const double*, const double*, std::size_t);
  void (*cmul_inplace)(cplx*, const cplx*, std::size_t);
  void (*axpy_cc)(cplx, const cplx*, cplx*, std::size_t);
};

constexpr Table kScalar{scalar::dot_cr, scalar::dot_cc, scalar::dot_rr,
                        scalar::cmul_inplace, scalar::axpy_cc};
constexpr Table kAvx2{avx2::dot_cr, avx2::dot_cc, avx2::dot_rr,
                      avx2::cmul_inplace, avx2::axpy_cc};

Backend pick_initial() {
  if (const char* env = std::getenv("SPECFLOW_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0 && avx2::available()) return Backend::avx2;
  }
  return avx2::available() ? Backend::avx2 : Backend::scalar;
}

Backend g_backend = pick_initial();
const Table* g_table = g_backend == Backend::avx2 ? &kAvx2 : &kScalar;

}  // namespace

Backend active_backend() { return g_backend; }

void force_backend(Backend b) {
  if (b == Backend::avx2 && !avx2::available()) b = Backend::scalar;
  g_backend = b;
  g_table = b == Backend::avx2 ? &kAvx2 : &kScalar;
}

std::string_view backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

cplx dot_cr(const cplx* a, const double* x, std::size_t len) {
  return g_table->dot_cr(a, x, len);
}
cplx dot_cc(const cplx* a, const cplx* b, std::size_t len) {
  return g_table->dot_cc(a, b, len);
}
double dot_rr(const double* x, const double* y, std::size_t len) {
  return g_table->dot_rr(x, y, len);
}
void cmul_inplace(cplx* a, const cplx* b, std::size_t len) {
  g_table->cmul_inplace(a, b, len);
}
void axpy_cc(cplx alpha, const cplx* x, cplx* y, std::size_t len) {
  g_table->axpy_cc(alpha, x, y, len);
}

}  // namespace specflow::kernels
