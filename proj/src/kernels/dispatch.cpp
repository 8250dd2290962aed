#include <cstdlib>
#include <cstring>

#include "curv4/kernels.hpp"

namespace curv4::kernels {

extern const Kernels kAvx2;  // defined in quadform_avx2.cpp

namespace {

const Kernels& select() {
    const char* force = std::getenv("CURV4_SIMD");
    if (force && std::strcmp(force, "scalar") == 0) return kScalar;
#if defined(__x86_64__) || defined(__i386__)
    if (avx2_compiled_in() && __builtin_cpu_supports("avx2") &&
        __builtin_cpu_supports("fma"))
        return kAvx2;
#endif
    return kScalar;
}

}  // namespace

const Kernels& active() {
    static const Kernels& k = select();
    return k;
}

}  // namespace curv4::kernels
