#pragma once

// Vector kernels used by the linear and neural classifiers. Each kernel has a
// scalar reference implementation and, where the CPU supports it, an AVX2/FMA
// variant. The active table is chosen once at startup; IIDSEVAL_SIMD=scalar
// forces the reference path (useful for cross-machine bitwise comparisons).

#include <span>
#include <string_view>

namespace iidseval::simd {

enum class Backend { scalar, avx2 };

struct KernelTable {
    Backend backend;
    /// sum_i a[i] * b[i]
    double (*dot)(const double* a, const double* b, std::size_t n);
    /// y[i] += alpha * x[i]
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    /// y[i] *= alpha
    void (*scale)(double alpha, double* y, std::size_t n);
    /// out[i] = (in[i] - mean[i]) * inv_std[i]
    void (*standardize)(const double* in, const double* mean, const double* inv_std, double* out,
                        std::size_t n);
    /// y[i] = max(y[i], 0)
    void (*relu)(double* y, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;
/// Null when the AVX2 variant was not compiled in.
const KernelTable* avx2_kernels() noexcept;

bool cpu_supports(Backend b) noexcept;

/// Currently active table.
const KernelTable& kernels() noexcept;
/// Switch backend; returns false (and changes nothing) when unsupported.
bool select(Backend b) noexcept;

std::string_view backend_name(Backend b) noexcept;

inline double dot(std::span<const double> a, std::span<const double> b) {
    return kernels().dot(a.data(), b.data(), a.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    kernels().axpy(alpha, x.data(), y.data(), x.size());
}
inline void scale(double alpha, std::span<double> y) { kernels().scale(alpha, y.data(), y.size()); }
inline void standardize(std::span<const double> in, std::span<const double> mean,
                        std::span<const double> inv_std, std::span<double> out) {
    kernels().standardize(in.data(), mean.data(), inv_std.data(), out.data(), in.size());
}
inline void relu(std::span<double> y) { kernels().relu(y.data(), y.size()); }

}  // namespace iidseval::simd
