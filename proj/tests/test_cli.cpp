#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "canonform/dense_matrix.hpp"
#include "canonform/matrix_io.hpp"
#include "doctest.h"

#ifndef CANONFORM_CLI_PATH
#error "CANONFORM_CLI_PATH must point at the built command line binary"
#endif

namespace {

namespace fs = std::filesystem;

std::string path_in_tmp(const char* name) {
    return (fs::temp_directory_path() / name).string();
}

int run_cli(const std::string& args) {
    const std::string command = std::string(CANONFORM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(command.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("gen, reduce and verify round trip through files") {
    const std::string a = path_in_tmp("cli_a.mtx");
    const std::string x = path_in_tmp("cli_x.mtx");
    const std::string p = path_in_tmp("cli_p.mtx");

    CHECK(run_cli("gen --class r-normal --dim 6 --seed 3 --out " + a) == 0);
    CHECK(run_cli("reduce --product perplectic --in " + a + " --out-form " + x +
                  " --out-transform " + p) == 0);
    CHECK(run_cli("verify --product perplectic --in " + a + " --transform " + p + " --canonical " +
                  x + " --pattern x") == 0);
}

TEST_CASE("the symplectic reduction round trips as well") {
    const std::string a = path_in_tmp("cli_aj.mtx");
    const std::string x = path_in_tmp("cli_xj.mtx");
    const std::string p = path_in_tmp("cli_pj.mtx");
    CHECK(run_cli("gen --class j-normal --dim 6 --seed 4 --out " + a) == 0);
    CHECK(run_cli("reduce --product symplectic --in " + a + " --out-form " + x +
                  " --out-transform " + p) == 0);
    CHECK(run_cli("verify --product symplectic --in " + a + " --transform " + p + " --canonical " +
                  x + " --pattern fourdiag") == 0);
}

TEST_CASE("a Jordan block reduces with exit code 2") {
    const std::string path = path_in_tmp("cli_jordan.mtx");
    canonform::write_matrix_market(path, canonform::DenseMatrix{{1.0, 1.0}, {0.0, 1.0}});
    CHECK(run_cli("reduce --product perplectic --in " + path +
                  " --out-form /dev/null --out-transform /dev/null") == 2);
}

TEST_CASE("a non-normal matrix reduces with exit code 3") {
    const std::string path = path_in_tmp("cli_nonnormal.mtx");
    canonform::write_matrix_market(path, canonform::DenseMatrix{{1.0, 1.0}, {0.0, 2.0}});
    CHECK(run_cli("reduce --product perplectic --in " + path +
                  " --out-form /dev/null --out-transform /dev/null") == 3);
}

TEST_CASE("a corrupted transform file fails verification with exit code 1") {
    const std::string a = path_in_tmp("cli_a2.mtx");
    const std::string x = path_in_tmp("cli_x2.mtx");
    const std::string p = path_in_tmp("cli_p2.mtx");
    REQUIRE(run_cli("gen --class r-normal --dim 4 --seed 5 --out " + a) == 0);
    REQUIRE(run_cli("reduce --product perplectic --in " + a + " --out-form " + x +
                    " --out-transform " + p) == 0);

    canonform::DenseMatrix transform = canonform::read_matrix_market(p);
    transform(0, 0) += canonform::Complex(1e-2, 0.0);
    canonform::write_matrix_market(p, transform);
    CHECK(run_cli("verify --product perplectic --in " + a + " --transform " + p + " --canonical " +
                  x + " --pattern x") == 1);
}

TEST_CASE("usage and parse errors use the dedicated exit codes") {
    CHECK(run_cli("reduce --product nonsense --in missing.mtx --out-form a --out-transform b") == 64);
    CHECK(run_cli("frobnicate") == 64);

    const std::string bad = path_in_tmp("cli_bad.mtx");
    std::ofstream(bad) << "not a matrix market file\n";
    CHECK(run_cli("classify --product perplectic --in " + bad) == 65);
}

TEST_CASE("classify exits cleanly on generated structure") {
    const std::string a = path_in_tmp("cli_ph.mtx");
    REQUIRE(run_cli("gen --class per-hermitian --dim 4 --seed 7 --out " + a) == 0);
    CHECK(run_cli("classify --product perplectic --in " + a) == 0);
}

TEST_CASE("perturb writes a certificate and the perturbed matrix") {
    const std::string a = path_in_tmp("cli_double.mtx");
    const std::string spectrum = path_in_tmp("cli_spectrum.mtx");
    {
        canonform::DenseMatrix s(4, 1);
        s(0, 0) = canonform::Complex(1.0, 1.0);
        s(1, 0) = canonform::Complex(1.0, 1.0);
        s(2, 0) = canonform::Complex(-2.0, 0.0);
        s(3, 0) = canonform::Complex(0.5, -1.0);
        canonform::write_matrix_market(spectrum, s);
    }
    REQUIRE(run_cli("gen --class r-normal --dim 4 --seed 9 --spectrum " + spectrum + " --out " + a) ==
            0);
    const std::string out = path_in_tmp("cli_perturbed.mtx");
    CHECK(run_cli("perturb --product perplectic --in " + a + " --epsilon 1e-4 --seed 11 --out " +
                  out) == 0);
    const canonform::DenseMatrix perturbed = canonform::read_matrix_market(out);
    const canonform::DenseMatrix original = canonform::read_matrix_market(a);
    CHECK((perturbed - original).frobenius_norm() < 1e-4);
    CHECK((perturbed - original).frobenius_norm() > 0.0);
}

TEST_SUITE_END();
