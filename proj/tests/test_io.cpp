// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "densmap/config.hpp"
#include "densmap/dpmf.hpp"

using namespace densmap;
namespace fs = std::filesystem;

TEST_SUITE_BEGIN("io");

namespace {

fs::path temp_file(const std::string& name) {
    return fs::temp_directory_path() / ("densmap_test_" + name);
}

}  // namespace

TEST_CASE("dpmf round trip preserves payloads bit-exactly") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> d(-5.0, 5.0);
    for (int rep = 0; rep < 8; ++rep) {
        const std::size_t rows = 3 + rep, cols = 5 + rep;
        SUBCASE("") {}
        std::vector<double> real(rows * cols);
        for (double& x : real) x = d(rng);
        const auto p = temp_file("real.dpmf");
        io::write_dpmf(p.string(), {rows, cols}, real.data());
        const io::DpmfData back = io::read_dpmf(p.string());
        REQUIRE(back.rank == 2);
        REQUIRE_FALSE(back.is_complex);
        REQUIRE(back.dims == std::vector<std::uint64_t>{rows, cols});
        for (std::size_t i = 0; i < real.size(); ++i) CHECK(back.real[i] == real[i]);

        std::vector<cplx> cvec(rows);
        for (cplx& z : cvec) z = {d(rng), d(rng)};
        const auto pc = temp_file("cplx.dpmf");
        io::write_dpmf(pc.string(), {rows}, cvec.data());
        const io::DpmfData cb = io::read_dpmf(pc.string());
        REQUIRE(cb.is_complex);
        REQUIRE(cb.rank == 1);
        for (std::size_t i = 0; i < cvec.size(); ++i) CHECK(cb.complex_[i] == cvec[i]);
    }
}

TEST_CASE("dpmf header layout is stable") {
    const auto p = temp_file("header.dpmf");
    const double payload[2] = {1.0, -2.0};
    io::write_dpmf(p.string(), {2}, payload);
    std::ifstream in(p.string(), std::ios::binary);
    std::vector<unsigned char> head(15);
    in.read(reinterpret_cast<char*>(head.data()), 15);
    CHECK(head[0] == 'D');
    CHECK(head[1] == 'P');
    CHECK(head[2] == 'M');
    CHECK(head[3] == 'F');
    CHECK(head[4] == 0x01);  // version
    CHECK(head[5] == 1);     // rank
    CHECK(head[6] == 0);     // real payload
    CHECK(head[7] == 2);     // dim low byte, little endian
    for (int i = 8; i < 15; ++i) CHECK(head[i] == 0);
}

TEST_CASE("dpmf reader rejects corrupted input") {
    const auto p = temp_file("bad.dpmf");
    {
        std::ofstream out(p.string(), std::ios::binary);
        out << "NOPE";
    }
    CHECK_THROWS(io::read_dpmf(p.string()));
}

TEST_CASE("config parser: comments, whitespace, overrides, validation") {
    const auto p = temp_file("run.cfg");
    {
        std::ofstream out(p.string());
        out << "# a comment line\n";
        out << "grid.L = 6.2831853\n";
        out << "grid.M = 64   # trailing comment\n";
        out << "\n";
        out << "potential.form = cosine\n";
    }
    io::Config cfg = io::parse_config_file(p.string());
    CHECK(cfg.get_double("grid.L", 0.0) == doctest::Approx(6.2831853));
    CHECK(cfg.get_int("grid.M", 0) == 64);
    CHECK(cfg.get_string("potential.form", "") == "cosine");

    io::apply_override(cfg, "grid.M=128");
    CHECK(cfg.get_int("grid.M", 0) == 128);

    CHECK_NOTHROW(cfg.validate({"grid.L", "grid.M", "potential.form"}));
    CHECK_THROWS_AS(cfg.validate({"grid.L"}), io::ConfigError);
    CHECK_THROWS_AS(cfg.get_int("grid.L", 0), io::ConfigError);
    CHECK_THROWS_AS(io::apply_override(cfg, "no-equals-sign"), io::ConfigError);
}

TEST_CASE("csv output is deterministic and newline-terminated") {
    const auto p = temp_file("table.csv");
    {
        io::CsvWriter csv(p.string(), {"t", "value"});
        csv.row({0.0, 1.0 / 3.0});
        csv.row({0.5, 2.0});
    }
    std::ifstream in(p.string(), std::ios::binary);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(content == "t,value\n0,0.33333333333333331\n0.5,2\n");
}

TEST_SUITE_END();
