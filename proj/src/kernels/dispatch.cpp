#include "tricons/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string_view>

namespace tricons::kernels {

#if defined(TRICONS_HAVE_AVX2)
const Ops* avx2_ops_impl();
#endif

const Ops* avx2_ops() {
#if defined(TRICONS_HAVE_AVX2)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
        return avx2_ops_impl();
#endif
    return nullptr;
}

namespace {

const Ops* resolve() {
    if (const char* env = std::getenv("TRICONS_KERNELS")) {
        std::string_view want(env);
        if (want == "scalar") return &scalar_ops();
        if (want == "avx2" && avx2_ops()) return avx2_ops();
        // unknown or unavailable override: fall through to auto
    }
    if (const Ops* simd = avx2_ops()) return simd;
    return &scalar_ops();
}

std::atomic<const Ops*>& current() {
    static std::atomic<const Ops*> ops{resolve()};
    return ops;
}

} // namespace

const Ops& active() { return *current().load(std::memory_order_relaxed); }

bool select(std::string_view name) {
    if (name == "scalar") {
        current().store(&scalar_ops(), std::memory_order_relaxed);
        return true;
    }
    if (name == "avx2") {
        if (const Ops* simd = avx2_ops()) {
            current().store(simd, std::memory_order_relaxed);
            return true;
        }
        return false;
    }
    return false;
}

} // namespace tricons::kernels
