// SPDX-License-Identifier: Apache-2.0
//
// Arithmetic kernels for the complex inner loops of the link simulator.
//
// Every kernel exists as a scalar reference implementation and, on x86-64
// builds, an AVX2+FMA variant. The active variant is chosen once at runtime
// from CPU capabilities; the SEFDM_KERNELS environment variable ("scalar" or
// "avx2") overrides the automatic choice. The variants are equivalence-tested
// against each other: they must agree to floating-point rounding.
#pragma once

#include <cstddef>

#include "sefdm/types.hpp"

namespace sefdm::kernels {

enum class Backend { scalar, avx2 };

// Backend currently used by the dispatch table.
Backend active_backend();

// Best backend the running CPU supports.
Backend best_backend();

// Switch backends; returns false (and leaves the table unchanged) if the
// requested backend is unavailable on this CPU or build.
bool set_backend(Backend b);

const char* backend_name(Backend b);

// y = A x with A row-major (rows x cols).
void cgemv(const cplx* a, std::size_t rows, std::size_t cols, const cplx* x, cplx* y);

// y += s * x over n entries.
void caxpy(cplx s, const cplx* x, cplx* y, std::size_t n);

// sum_i |x_i|^2
double sum_abs2(const cplx* x, std::size_t n);

// sum_i |x_i - y_i|^2
double sum_err2(const cplx* x, const cplx* y, std::size_t n);

namespace detail {

struct KernelTable {
  void (*cgemv)(const cplx*, std::size_t, std::size_t, const cplx*, cplx*);
  void (*caxpy)(cplx, const cplx*, cplx*, std::size_t);
  double (*sum_abs2)(const cplx*, std::size_t);
  double (*sum_err2)(const cplx*, const cplx*, std::size_t);
};

extern const KernelTable scalar_table;
#if defined(SEFDM_HAVE_AVX2)
extern const KernelTable avx2_table;
#endif

}  // namespace detail

}  // namespace sefdm::kernels
