#pragma once

// Data-parallel inner loops used by the dense linear algebra layer.
// A scalar reference implementation is always available; on x86-64 an
// AVX2+FMA variant is selected at runtime when the CPU supports it.
// The environment variable TRICONS_KERNELS=scalar|avx2 forces a backend.

#include <cstddef>
#include <string_view>

namespace tricons::kernels {

struct Ops {
    const char* name;
    // sum_i x[i]*y[i]
    double (*dot)(const double* x, const double* y, std::size_t n);
    // y[i] += a*x[i]
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    // y = A*x for row-major A (rows x cols)
    void (*matvec)(const double* a, std::size_t rows, std::size_t cols,
                   const double* x, double* y);
    // plane rotation: (x[i], y[i]) <- (c*x[i] - s*y[i], s*x[i] + c*y[i])
    void (*rot)(double* x, double* y, double c, double s, std::size_t n);
};

const Ops& scalar_ops();
const Ops* avx2_ops();   // nullptr when unsupported (non-x86 build or CPU)

// Currently active backend. Resolved once from CPU features and the
// TRICONS_KERNELS override.
const Ops& active();

// Force a backend by name; returns false if unknown/unavailable.
bool select(std::string_view name);

inline double dot(const double* x, const double* y, std::size_t n) {
    return active().dot(x, y, n);
}
inline void axpy(double a, const double* x, double* y, std::size_t n) {
    active().axpy(a, x, y, n);
}
inline void matvec(const double* a, std::size_t rows, std::size_t cols,
                   const double* x, double* y) {
    active().matvec(a, rows, cols, x, y);
}
inline void rot(double* x, double* y, double c, double s, std::size_t n) {
    active().rot(x, y, c, s, n);
}

} // namespace tricons::kernels
