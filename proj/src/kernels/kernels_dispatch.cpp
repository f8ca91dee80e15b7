// SPDX-License-Identifier: Apache-2.0

#include "densmap/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace densmap::kernels {
namespace {

const Backend* select_initial() {
    const char* env = std::getenv("DENSMAP_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) return &scalar_backend();
#if defined(__x86_64__) || defined(_M_X64)
    if (const Backend* b = avx2_backend()) {
        if (!env || std::strcmp(env, "avx2") == 0) return b;
    }
#endif
    return &scalar_backend();
}

const Backend*& current() {
    static const Backend* b = select_initial();
    return b;
}

}  // namespace

const Backend& active() { return *current(); }
const char* active_name() { return current()->name; }

bool force_backend(const char* name) {
    if (std::strcmp(name, "scalar") == 0) {
        current() = &scalar_backend();
        return true;
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (std::strcmp(name, "avx2") == 0) {
        if (const Backend* b = avx2_backend()) {
            current() = b;
            return true;
        }
    }
#endif
    return false;
}

}  // namespace densmap::kernels
