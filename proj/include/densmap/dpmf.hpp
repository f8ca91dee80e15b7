// SPDX-License-Identifier: Apache-2.0
//
// DPMF container: magic "DPMF", version byte 0x01, rank byte, complex flag
// byte, per-dimension lengths as 64-bit little-endian unsigned, then
// row-major 64-bit little-endian IEEE-754 doubles (complex interleaved
// re, im).

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "densmap/grid.hpp"

namespace densmap::io {

struct DpmfData {
    int rank = 0;
    bool is_complex = false;
    std::vector<std::uint64_t> dims;
    std::vector<double> real;    // filled when !is_complex
    std::vector<cplx> complex_;  // filled when is_complex

    std::size_t count() const {
        std::size_t n = 1;
        for (auto d : dims) n *= std::size_t(d);
        return n;
    }
};

void write_dpmf(const std::string& path, const std::vector<std::uint64_t>& dims,
                const double* data);
void write_dpmf(const std::string& path, const std::vector<std::uint64_t>& dims,
                const cplx* data);

DpmfData read_dpmf(const std::string& path);

}  // namespace densmap::io
