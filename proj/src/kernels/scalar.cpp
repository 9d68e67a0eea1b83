#include "tricons/kernels.hpp"

namespace tricons::kernels {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void matvec_scalar(const double* a, std::size_t rows, std::size_t cols,
                   const double* x, double* y) {
    for (std::size_t r = 0; r < rows; ++r)
        y[r] = dot_scalar(a + r * cols, x, cols);
}

void rot_scalar(double* x, double* y, double c, double s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = x[i], yi = y[i];
        x[i] = c * xi - s * yi;
        y[i] = s * xi + c * yi;
    }
}

} // namespace

const Ops& scalar_ops() {
    static const Ops ops{"scalar", dot_scalar, axpy_scalar, matvec_scalar, rot_scalar};
    return ops;
}

} // namespace tricons::kernels
