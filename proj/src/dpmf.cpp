// SPDX-License-Identifier: Apache-2.0

#include "densmap/dpmf.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace densmap::io {

namespace {

static_assert(std::endian::native == std::endian::little,
              "DPMF writer assumes a little-endian host");

void write_header(std::ofstream& out, int rank, bool is_complex,
                  const std::vector<std::uint64_t>& dims) {
    out.write("DPMF", 4);
    const unsigned char version = 0x01;
    const unsigned char rank_b = static_cast<unsigned char>(rank);
    const unsigned char cflag = is_complex ? 1 : 0;
    out.put(char(version));
    out.put(char(rank_b));
    out.put(char(cflag));
    for (std::uint64_t d : dims) out.write(reinterpret_cast<const char*>(&d), 8);
}

}  // namespace

void write_dpmf(const std::string& path, const std::vector<std::uint64_t>& dims,
                const double* data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_dpmf: cannot open " + path);
    write_header(out, int(dims.size()), false, dims);
    std::size_t n = 1;
    for (auto d : dims) n *= std::size_t(d);
    out.write(reinterpret_cast<const char*>(data), std::streamsize(n * sizeof(double)));
    if (!out) throw std::runtime_error("write_dpmf: short write to " + path);
}

void write_dpmf(const std::string& path, const std::vector<std::uint64_t>& dims,
                const cplx* data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_dpmf: cannot open " + path);
    write_header(out, int(dims.size()), true, dims);
    std::size_t n = 1;
    for (auto d : dims) n *= std::size_t(d);
    out.write(reinterpret_cast<const char*>(data), std::streamsize(n * sizeof(cplx)));
    if (!out) throw std::runtime_error("write_dpmf: short write to " + path);
}

DpmfData read_dpmf(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_dpmf: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "DPMF", 4) != 0)
        throw std::runtime_error("read_dpmf: bad magic in " + path);
    const int version = in.get();
    if (version != 0x01) throw std::runtime_error("read_dpmf: unsupported version");
    DpmfData d;
    d.rank = in.get();
    d.is_complex = in.get() != 0;
    if (d.rank < 1 || d.rank > 4) throw std::runtime_error("read_dpmf: bad rank");
    d.dims.resize(d.rank);
    for (auto& dim : d.dims) in.read(reinterpret_cast<char*>(&dim), 8);
    const std::size_t n = d.count();
    if (d.is_complex) {
        d.complex_.resize(n);
        in.read(reinterpret_cast<char*>(d.complex_.data()), std::streamsize(n * sizeof(cplx)));
    } else {
        d.real.resize(n);
        in.read(reinterpret_cast<char*>(d.real.data()), std::streamsize(n * sizeof(double)));
    }
    if (!in) throw std::runtime_error("read_dpmf: truncated payload in " + path);
    return d;
}

}  // namespace densmap::io
