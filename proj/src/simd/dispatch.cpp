#include <atomic>
#include <cstdlib>
#include <string_view>

#include "iidseval/simd.hpp"

namespace iidseval::simd {

#ifndef IIDSEVAL_HAVE_AVX2
const KernelTable* avx2_kernels() noexcept { return nullptr; }
#endif

bool cpu_supports(Backend b) noexcept {
    switch (b) {
    case Backend::scalar:
        return true;
    case Backend::avx2:
#if defined(IIDSEVAL_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
        return avx2_kernels() != nullptr && __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
        return false;
#endif
    }
    return false;
}

namespace {

const KernelTable* initial_table() noexcept {
    const char* env = std::getenv("IIDSEVAL_SIMD");
    if (env != nullptr && std::string_view{env} == "scalar") return &scalar_kernels();
    if (cpu_supports(Backend::avx2)) return avx2_kernels();
    return &scalar_kernels();
}

std::atomic<const KernelTable*>& active() noexcept {
    static std::atomic<const KernelTable*> table{initial_table()};
    return table;
}

}  // namespace

const KernelTable& kernels() noexcept { return *active().load(std::memory_order_acquire); }

bool select(Backend b) noexcept {
    if (!cpu_supports(b)) return false;
    active().store(b == Backend::avx2 ? avx2_kernels() : &scalar_kernels(), std::memory_order_release);
    return true;
}

std::string_view backend_name(Backend b) noexcept { return b == Backend::avx2 ? "avx2" : "scalar"; }

}  // namespace iidseval::simd
