#pragma once

// Dense double-precision inner loops used by every solver path.
//
// Two implementations exist: a scalar reference and an AVX2/FMA variant.
// The active table is chosen once at first use from CPUID, and can be forced
// with the environment variable GAPVI_KERNELS=scalar|avx2. Reductions in the
// vector variant use four partial sums, so results agree with the scalar
// reference to rounding, not bitwise.

#include <cstddef>
#include <span>
#include <string_view>

namespace gapvi::kernels {

struct KernelTable {
  const char* name;
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
  // y = A x, A row-major rows x cols
  void (*gemv)(const double* A, std::size_t rows, std::size_t cols, const double* x, double* y);
  // y = A^T x, A row-major rows x cols
  void (*gemv_t)(const double* A, std::size_t rows, std::size_t cols, const double* x, double* y);
};

const KernelTable& scalar_table();

// nullptr when the build target has no AVX2 variant.
const KernelTable* avx2_table();

bool cpu_supports_avx2();

// Table used by the linalg helpers.
const KernelTable& active();

// Switches the active table. Returns false (and leaves the selection
// unchanged) when the requested variant is unknown or unsupported here.
bool select(std::string_view name);

}  // namespace gapvi::kernels
