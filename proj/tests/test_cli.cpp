// SPDX-License-Identifier: Apache-2.0
//
// End-to-end checks of the command-line front end: output files, exit codes,
// and byte-level determinism of repeated runs.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "densmap/dpmf.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = DENSMAP_CLI_PATH;

int run(const std::string& args) {
    const std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("densmap_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(bool(in));
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("propagate: free constant state keeps unit norm") {
    const fs::path out = fresh_dir("propagate");
    const int code = run("propagate --set potential.form=zero --set state.form=constant"
                         " --set grid.M=32 --set time.steps=50 --set io.outdir=" +
                         out.string());
    CHECK(code == 0);
    const auto rows = read_csv(out / "norm.csv");
    REQUIRE(rows.size() == 52);  // header + 51 nodes
    CHECK(rows[0][0] == "t");
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(std::abs(std::stod(rows[i][1]) - 1.0) < 1e-10);
    CHECK(fs::exists(out / "density.dpmf"));
    CHECK(fs::exists(out / "manifest.txt"));
}

TEST_CASE("functionals: uniform ball hartree energy") {
    const fs::path out = fresh_dir("functionals");
    const int code = run("functionals --set density.form=uniform_ball --set density.R=1"
                         " --set density.N=1 --set io.outdir=" +
                         out.string());
    CHECK(code == 0);
    const auto rows = read_csv(out / "components.csv");
    REQUIRE(rows.size() == 2);
    const double vh = std::stod(rows[1][1]);
    CHECK(std::abs(vh - 0.6) < 1e-4 * 0.6);
}

TEST_CASE("invert-fp: round trip writes potential, report and verdict") {
    const fs::path out = fresh_dir("invertfp");
    const int code = run(
        "invert-fp --set grid.M=48 --set time.T=0.5 --set time.steps=100"
        " --set potential.form=cosine --set potential.v0=1 --set potential.k=1"
        " --set potential.drive=sin --set potential.drive_amp=0.2"
        " --set potential.drive_omega=1 --set potential.drive_form=cosine"
        " --set state.form=ground --set inversion.v0=static"
        " --set inversion.restart_interval=0.025 --set io.outdir=" +
        out.string());
    CHECK(code == 0);
    const densmap::io::DpmfData v = densmap::io::read_dpmf((out / "v_recovered.dpmf").string());
    CHECK(v.rank == 2);
    CHECK(v.dims[0] == 101);
    CHECK(v.dims[1] == 48);
    const auto report = read_csv(out / "report.csv");
    CHECK(report.size() >= 3);
    CHECK(report[0][0] == "iter");
    const auto verdict = read_csv(out / "rho_verdict.csv");
    REQUIRE(verdict.size() == 2);
    CHECK(std::stod(verdict[1][0]) < 1e-4);  // max_t ||rho||_1
}

TEST_CASE("determinism: identical configs give byte-identical csv output") {
    const fs::path a = fresh_dir("det_a");
    const fs::path b = fresh_dir("det_b");
    const std::string common =
        "propagate --set potential.form=cosine --set potential.v0=0.5"
        " --set state.form=ground --set grid.M=32 --set time.steps=40 --set io.outdir=";
    CHECK(run(common + a.string()) == 0);
    CHECK(run(common + b.string()) == 0);
    CHECK(slurp(a / "norm.csv") == slurp(b / "norm.csv"));
    CHECK(slurp(a / "observables.csv") == slurp(b / "observables.csv"));
    CHECK(slurp(a / "density.dpmf") == slurp(b / "density.dpmf"));
}

TEST_CASE("unknown configuration keys exit with the validation code") {
    const fs::path out = fresh_dir("badkey");
    const int code = run("propagate --set no.such.key=1 --set io.outdir=" + out.string());
    CHECK(code == 2);
}

TEST_CASE("respond lehmann writes the spectrum tables") {
    const fs::path out = fresh_dir("respond");
    const int code = run(
        "respond --set response.task=lehmann --set grid.L=1 --set grid.M=99"
        " --set grid.boundary=dirichlet --set response.K=4 --set io.outdir=" +
        out.string());
    CHECK(code == 0);
    const auto exc = read_csv(out / "excitations.csv");
    REQUIRE(exc.size() == 5);
    const double omega1 = std::stod(exc[1][1]);
    CHECK(std::abs(omega1 - 1.5 * 9.8696) < 0.3);  // 3 pi^2 / 2
    CHECK(fs::exists(out / "chi_spectrum.csv"));
}

TEST_CASE("invert-hj and invert-taylor pipelines run end to end") {
    const fs::path out = fresh_dir("inverthj");
    const std::string drive =
        " --set grid.M=64 --set time.T=0.5 --set time.steps=200"
        " --set potential.form=cosine --set potential.v0=1 --set potential.k=1"
        " --set potential.drive=sin --set potential.drive_amp=0.3"
        " --set potential.drive_omega=2 --set potential.drive_form=sine"
        " --set state.form=ground --set io.outdir=";
    CHECK(run("invert-hj" + drive + out.string()) == 0);
    const auto summary = read_csv(out / "summary.csv");
    REQUIRE(summary.size() == 2);
    CHECK(std::stod(summary[1][1]) < 5e-2);  // sup gap to the generating drive

    const fs::path out2 = fresh_dir("inverttaylor");
    CHECK(run("invert-taylor --set taylor.K=1" + drive + out2.string()) == 0);
    const densmap::io::DpmfData vc = densmap::io::read_dpmf((out2 / "v_coeffs.dpmf").string());
    CHECK(vc.dims[0] == 2);
    CHECK(fs::exists(out2 / "ratio.csv"));
}

TEST_CASE("verify-rho identity check is exact for the generating potential") {
    const fs::path out = fresh_dir("verifyrho");
    const int code = run(
        "verify-rho --set grid.M=48 --set time.steps=60 --set potential.form=cosine"
        " --set state.form=ground --set io.outdir=" +
        out.string());
    CHECK(code == 0);
    const auto verdict = read_csv(out / "rho_verdict.csv");
    REQUIRE(verdict.size() == 2);
    CHECK(std::stod(verdict[1][0]) < 1e-12);
}

TEST_CASE("spectrum subcommand writes eigenvalues") {
    const fs::path out = fresh_dir("spectrum");
    const int code = run(
        "spectrum --set grid.L=1 --set grid.M=99 --set grid.boundary=dirichlet"
        " --set spectrum.K=3 --set io.outdir=" +
        out.string());
    CHECK(code == 0);
    const auto rows = read_csv(out / "eigen.csv");
    REQUIRE(rows.size() == 4);
    CHECK(std::abs(std::stod(rows[1][1]) - 4.9348) < 0.05);
}

TEST_CASE("diagnose continuity stays at round-off") {
    const fs::path out = fresh_dir("diag");
    const int code = run(
        "diagnose --set diagnose.task=continuity --set potential.form=cosine"
        " --set state.form=ground --set grid.M=48 --set time.steps=60"
        " --set potential.drive=sin --set potential.drive_amp=0.3 --set io.outdir=" +
        out.string());
    CHECK(code == 0);
    const auto rows = read_csv(out / "continuity.csv");
    REQUIRE(rows.size() == 61);
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(std::stod(rows[i][1]) < 1e-10);
}
