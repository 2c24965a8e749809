// SPDX-License-Identifier: Apache-2.0
#include "sefdm/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace sefdm::kernels {
namespace {

bool avx2_available() {
#if defined(SEFDM_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

std::atomic<const detail::KernelTable*> g_table{nullptr};
std::atomic<Backend> g_backend{Backend::scalar};

const detail::KernelTable* table_for(Backend b) {
#if defined(SEFDM_HAVE_AVX2)
  if (b == Backend::avx2) return &detail::avx2_table;
#endif
  (void)b;
  return &detail::scalar_table;
}

Backend pick_initial() {
  if (const char* env = std::getenv("SEFDM_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0 && avx2_available()) return Backend::avx2;
  }
  return avx2_available() ? Backend::avx2 : Backend::scalar;
}

const detail::KernelTable* table() {
  const detail::KernelTable* t = g_table.load(std::memory_order_acquire);
  if (t == nullptr) {
    const Backend b = pick_initial();
    g_backend.store(b, std::memory_order_relaxed);
    t = table_for(b);
    g_table.store(t, std::memory_order_release);
  }
  return t;
}

}  // namespace

Backend active_backend() {
  table();
  return g_backend.load(std::memory_order_relaxed);
}

Backend best_backend() { return avx2_available() ? Backend::avx2 : Backend::scalar; }

bool set_backend(Backend b) {
  if (b == Backend::avx2 && !avx2_available()) return false;
  g_backend.store(b, std::memory_order_relaxed);
  g_table.store(table_for(b), std::memory_order_release);
  return true;
}

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
  }
  return "unknown";
}

void cgemv(const cplx* a, std::size_t rows, std::size_t cols, const cplx* x, cplx* y) {
  table()->cgemv(a, rows, cols, x, y);
}

void caxpy(cplx s, const cplx* x, cplx* y, std::size_t n) { table()->caxpy(s, x, y, n); }

double sum_abs2(const cplx* x, std::size_t n) { return table()->sum_abs2(x, n); }

double sum_err2(const cplx* x, const cplx* y, std::size_t n) { return table()->sum_err2(x, y, n); }

}  // namespace sefdm::kernels
