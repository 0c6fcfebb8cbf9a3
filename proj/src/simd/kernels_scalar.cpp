#include <algorithm>

#include "iidseval/simd.hpp"

namespace iidseval::simd {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(double alpha, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] *= alpha;
}

void standardize_scalar(const double* in, const double* mean, const double* inv_std, double* out,
                        std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = (in[i] - mean[i]) * inv_std[i];
}

void relu_scalar(double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = std::max(y[i], 0.0);
}

}  // namespace

const KernelTable& scalar_kernels() noexcept {
    static const KernelTable table{Backend::scalar, dot_scalar,         axpy_scalar,
                                   scale_scalar,    standardize_scalar, relu_scalar};
    return table;
}

}  // namespace iidseval::simd
