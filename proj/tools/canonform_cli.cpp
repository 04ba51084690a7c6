#include <cstdio>
#include <cstdlib>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "canonform/dense_matrix.hpp"
#include "canonform/errors.hpp"
#include "canonform/genericity.hpp"
#include "canonform/matrix_io.hpp"
#include "canonform/perplectic.hpp"
#include "canonform/scalar_product.hpp"
#include "canonform/symplectic.hpp"
#include "canonform/testkit.hpp"
#include "json.hpp"

namespace {

using canonform::Complex;
using canonform::DenseMatrix;
using canonform::ScalarProduct;
using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitDefective = 2;
constexpr int kExitNotNormal = 3;
constexpr int kExitUsage = 64;
constexpr int kExitParse = 65;
constexpr int kExitInternal = 70;

std::string fnv1a_digest(const DenseMatrix& a) {
    std::uint64_t hash = 0xCBF29CE484222325ull;
    auto mix = [&](const char* data, std::size_t size) {
        for (std::size_t i = 0; i < size; ++i) {
            hash ^= static_cast<unsigned char>(data[i]);
            hash *= 0x100000001B3ull;
        }
    };
    char buffer[96];
    int len = std::snprintf(buffer, sizeof(buffer), "%zu,%zu;", a.rows(), a.cols());
    mix(buffer, static_cast<std::size_t>(len));
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            len = std::snprintf(buffer, sizeof(buffer), "%.17g %.17g;", a(i, j).real(),
                                a(i, j).imag());
            mix(buffer, static_cast<std::size_t>(len));
        }
    }
    std::snprintf(buffer, sizeof(buffer), "fnv1a:%016llx", static_cast<unsigned long long>(hash));
    return buffer;
}

double default_tolerance_from_env(double fallback) {
    if (const char* env = std::getenv("CANONFORM_TOL")) {
        char* end = nullptr;
        const double value = std::strtod(env, &end);
        if (end != env && value > 0.0) return value;
    }
    return fallback;
}

ScalarProduct make_product(const std::string& name, std::size_t dim) {
    if (name == "perplectic") return ScalarProduct::perplectic(dim);
    return ScalarProduct::symplectic(dim);
}

json residual_json(const canonform::ResidualValue& r) {
    return json{{"frobenius", r.frobenius}, {"spectral_estimate", r.spectral_estimate}};
}

json classify_json(const canonform::StructureReport& report) {
    return json{
        {"norms",
         {{"frobenius", report.input_frobenius},
          {"spectral_estimate", report.input_spectral_estimate}}},
        {"tolerance", report.tolerance},
        {"threshold", report.threshold},
        {"residuals",
         {{"selfadjoint", residual_json(report.selfadjoint_residual)},
          {"skewadjoint", residual_json(report.skewadjoint_residual)},
          {"unitary", residual_json(report.unitary_residual)},
          {"normal", residual_json(report.normal_residual)}}},
        {"flags",
         {{"selfadjoint", report.selfadjoint},
          {"skewadjoint", report.skewadjoint},
          {"unitary", report.unitary},
          {"normal", report.normal}}},
    };
}

json stages_json(const canonform::ReductionReport& report) {
    json stages = json::array();
    for (const auto& stage : report.stages) {
        stages.push_back(json{{"stage", stage.stage}, {"residual", stage.value}});
    }
    return stages;
}

canonform::testkit::MatrixClass parse_class(const std::string& name) {
    using canonform::testkit::MatrixClass;
    if (name == "per-hermitian") return MatrixClass::PerHermitian;
    if (name == "perskew-hermitian") return MatrixClass::PerskewHermitian;
    if (name == "perplectic") return MatrixClass::Perplectic;
    if (name == "r-normal") return MatrixClass::RNormal;
    if (name == "skew-hamiltonian") return MatrixClass::SkewHamiltonian;
    if (name == "hamiltonian") return MatrixClass::Hamiltonian;
    if (name == "symplectic") return MatrixClass::Symplectic;
    return MatrixClass::JNormal;
}

std::vector<Complex> read_spectrum(const std::string& path) {
    const DenseMatrix column = canonform::read_matrix_market(path);
    if (column.rows() != 1 && column.cols() != 1) {
        throw canonform::UnsupportedFormatError("spectrum file must be a single row or column");
    }
    std::vector<Complex> values;
    for (std::size_t i = 0; i < column.rows(); ++i)
        for (std::size_t j = 0; j < column.cols(); ++j) values.push_back(column(i, j));
    return values;
}

struct ClassifyArgs {
    std::string product;
    std::string input;
    double tol = 0.0;
    bool tol_given = false;
};

int run_classify(const ClassifyArgs& args) {
    const DenseMatrix a = canonform::read_matrix_market(args.input);
    const double tol =
        args.tol_given ? args.tol : default_tolerance_from_env(canonform::kDefaultTolerance);
    const canonform::StructureReport report = classify(a, make_product(args.product, a.rows()), tol);

    json out{{"command", "classify"},
             {"input", args.input},
             {"input_digest", fnv1a_digest(a)},
             {"product", args.product},
             {"dim", a.rows()}};
    out.update(classify_json(report));
    out["exit_status"] = kExitOk;
    std::printf("%s\n", out.dump(2).c_str());
    return kExitOk;
}

struct ReduceArgs {
    std::string product;
    std::string input;
    std::string out_form;
    std::string out_transform;
    double tol = 0.0;
    bool tol_given = false;
};

int run_reduce(const ReduceArgs& args) {
    const DenseMatrix a = canonform::read_matrix_market(args.input);
    canonform::ReductionOptions opts;
    opts.tol = args.tol_given ? args.tol : default_tolerance_from_env(opts.tol);

    json out{{"command", "reduce"},
             {"input", args.input},
             {"input_digest", fnv1a_digest(a)},
             {"product", args.product}};

    canonform::ReductionReport report;
    if (args.product == "perplectic") {
        const canonform::XFormResult x = canonform::normal_to_x(a, opts);
        canonform::write_matrix_market(args.out_form, x.X);
        canonform::write_matrix_market(args.out_transform, x.P);
        report = x.residuals;
        out["pattern"] = "x";
        out["corner"] = x.corner;
    } else {
        const canonform::FourDiagResult d4 = canonform::normal_to_four_diagonal(a, opts);
        canonform::write_matrix_market(args.out_form, d4.D4);
        canonform::write_matrix_market(args.out_transform, d4.S);
        report = d4.residuals;
        out["pattern"] = "fourdiag";
    }
    out["residuals"] = {{"transform_structure", report.transform_structure_residual},
                        {"similarity", report.similarity_residual},
                        {"pattern", report.pattern_residual}};
    out["stages"] = stages_json(report);
    out["outputs"] = {{"form", args.out_form}, {"transform", args.out_transform}};
    out["exit_status"] = kExitOk;
    std::printf("%s\n", out.dump(2).c_str());
    return kExitOk;
}

struct GenArgs {
    std::string class_name;
    std::size_t dim = 0;
    std::uint64_t seed = 0;
    std::string spectrum_path;
    std::string output;
    double min_gap = 1e-3;
};

int run_gen(const GenArgs& args) {
    canonform::testkit::GeneratorSpec spec;
    spec.class_kind = parse_class(args.class_name);
    spec.dim = args.dim;
    spec.seed = args.seed;
    spec.min_gap = args.min_gap;
    if (!args.spectrum_path.empty()) spec.spectrum = read_spectrum(args.spectrum_path);

    const DenseMatrix a = canonform::testkit::random_structured(spec);
    canonform::write_matrix_market(args.output, a);

    const bool j_side = args.class_name == "skew-hamiltonian" || args.class_name == "hamiltonian" ||
                        args.class_name == "symplectic" || args.class_name == "j-normal";
    const canonform::StructureReport report =
        classify(a, j_side ? ScalarProduct::symplectic(args.dim) : ScalarProduct::perplectic(args.dim),
                 canonform::kDefaultTolerance);

    json out{{"command", "gen"},         {"class", args.class_name}, {"dim", args.dim},
             {"seed", args.seed},        {"out", args.output},       {"output_digest", fnv1a_digest(a)}};
    out.update(classify_json(report));
    out["exit_status"] = kExitOk;
    std::printf("%s\n", out.dump(2).c_str());
    return kExitOk;
}

struct PerturbArgs {
    std::string product;
    std::string input;
    std::string output;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    double tol = 0.0;
    bool tol_given = false;
};

int run_perturb(const PerturbArgs& args) {
    const DenseMatrix a = canonform::read_matrix_market(args.input);
    canonform::ReductionOptions opts;
    opts.tol = args.tol_given ? args.tol : default_tolerance_from_env(opts.tol);
    const canonform::PerturbationCertificate cert = canonform::perturb_to_distinct(
        a, make_product(args.product, a.rows()), args.epsilon, args.seed, opts);
    canonform::write_matrix_market(args.output, cert.perturbed);

    const json out{{"command", "perturb"},
                   {"input", args.input},
                   {"input_digest", fnv1a_digest(a)},
                   {"product", args.product},
                   {"epsilon", args.epsilon},
                   {"seed", args.seed},
                   {"coefficient", {{"real", cert.coefficient.real()}, {"imag", cert.coefficient.imag()}}},
                   {"distance",
                    {{"frobenius", cert.distance_frobenius},
                     {"spectral_estimate", cert.distance_spectral_estimate}}},
                   {"min_gap", cert.min_gap},
                   {"normality_residual", cert.normality_residual},
                   {"out", args.output},
                   {"exit_status", kExitOk}};
    std::printf("%s\n", out.dump(2).c_str());
    return kExitOk;
}

struct VerifyArgs {
    std::string product;
    std::string input;
    std::string transform;
    std::string canonical;
    std::string pattern;
    double tol = 0.0;
    bool tol_given = false;
};

int run_verify(const VerifyArgs& args) {
    const DenseMatrix a = canonform::read_matrix_market(args.input);
    const DenseMatrix t = canonform::read_matrix_market(args.transform);
    const DenseMatrix c = canonform::read_matrix_market(args.canonical);
    const double tol = args.tol_given ? args.tol : default_tolerance_from_env(1e-8);
    const canonform::testkit::PatternKind pattern = args.pattern == "x"
                                                        ? canonform::testkit::PatternKind::XForm
                                                        : canonform::testkit::PatternKind::FourDiagonal;
    const canonform::testkit::VerificationReport verdict = canonform::testkit::oracle_verify_reduction(
        a, t, c, make_product(args.product, a.rows()), pattern, tol);

    const int status = verdict.pass ? kExitOk : kExitVerifyFailed;
    const json out{{"command", "verify"},
                   {"input", args.input},
                   {"input_digest", fnv1a_digest(a)},
                   {"product", args.product},
                   {"pattern", args.pattern},
                   {"threshold", verdict.threshold},
                   {"residuals",
                    {{"transform_structure", verdict.structure_residual},
                     {"similarity", verdict.similarity_residual},
                     {"pattern", verdict.pattern_residual}}},
                   {"checks",
                    {{"transform_structure", verdict.structure_ok},
                     {"similarity", verdict.similarity_ok},
                     {"pattern", verdict.pattern_ok},
                     {"class_preserved", verdict.class_preserved}}},
                   {"pass", verdict.pass},
                   {"exit_status", status}};
    std::printf("%s\n", out.dump(2).c_str());
    return status;
}

void print_error(const char* kind, const std::exception& e) {
    const json out{{"error", kind}, {"message", e.what()}};
    std::fprintf(stderr, "%s\n", out.dump().c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Canonical forms for matrices normal in the perplectic or symplectic product"};
    app.require_subcommand(1);

    ClassifyArgs classify_args;
    CLI::App* classify_cmd = app.add_subcommand("classify", "Structure residuals and class flags");
    classify_cmd->add_option("--product", classify_args.product)
        ->required()
        ->check(CLI::IsMember({"perplectic", "symplectic"}));
    classify_cmd->add_option("--in", classify_args.input)->required();
    classify_cmd->add_option("--tol", classify_args.tol)->check(CLI::PositiveNumber);

    ReduceArgs reduce_args;
    CLI::App* reduce_cmd = app.add_subcommand("reduce", "Reduce to X-form / four-diagonal form");
    reduce_cmd->add_option("--product", reduce_args.product)
        ->required()
        ->check(CLI::IsMember({"perplectic", "symplectic"}));
    reduce_cmd->add_option("--in", reduce_args.input)->required();
    reduce_cmd->add_option("--out-form", reduce_args.out_form)->required();
    reduce_cmd->add_option("--out-transform", reduce_args.out_transform)->required();
    reduce_cmd->add_option("--tol", reduce_args.tol)->check(CLI::PositiveNumber);

    GenArgs gen_args;
    CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a structured random matrix");
    gen_cmd->add_option("--class", gen_args.class_name)
        ->required()
        ->check(CLI::IsMember({"per-hermitian", "perskew-hermitian", "perplectic", "r-normal",
                               "skew-hamiltonian", "hamiltonian", "symplectic", "j-normal"}));
    gen_cmd->add_option("--dim", gen_args.dim)->required()->check(CLI::PositiveNumber);
    gen_cmd->add_option("--seed", gen_args.seed)->required();
    gen_cmd->add_option("--spectrum", gen_args.spectrum_path);
    gen_cmd->add_option("--min-gap", gen_args.min_gap)->check(CLI::PositiveNumber);
    gen_cmd->add_option("--out", gen_args.output)->required();

    PerturbArgs perturb_args;
    CLI::App* perturb_cmd = app.add_subcommand("perturb", "Perturb to pairwise distinct eigenvalues");
    perturb_cmd->add_option("--product", perturb_args.product)
        ->required()
        ->check(CLI::IsMember({"perplectic", "symplectic"}));
    perturb_cmd->add_option("--in", perturb_args.input)->required();
    perturb_cmd->add_option("--epsilon", perturb_args.epsilon)->required()->check(CLI::PositiveNumber);
    perturb_cmd->add_option("--seed", perturb_args.seed)->required();
    perturb_cmd->add_option("--out", perturb_args.output)->required();
    perturb_cmd->add_option("--tol", perturb_args.tol)->check(CLI::PositiveNumber);

    VerifyArgs verify_args;
    CLI::App* verify_cmd = app.add_subcommand("verify", "Independently verify an emitted reduction");
    verify_cmd->add_option("--product", verify_args.product)
        ->required()
        ->check(CLI::IsMember({"perplectic", "symplectic"}));
    verify_cmd->add_option("--in", verify_args.input)->required();
    verify_cmd->add_option("--transform", verify_args.transform)->required();
    verify_cmd->add_option("--canonical", verify_args.canonical)->required();
    verify_cmd->add_option("--pattern", verify_args.pattern)
        ->required()
        ->check(CLI::IsMember({"x", "fourdiag"}));
    verify_cmd->add_option("--tol", verify_args.tol)->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    classify_args.tol_given = classify_cmd->count("--tol") > 0;
    reduce_args.tol_given = reduce_cmd->count("--tol") > 0;
    perturb_args.tol_given = perturb_cmd->count("--tol") > 0;
    verify_args.tol_given = verify_cmd->count("--tol") > 0;

    try {
        if (classify_cmd->parsed()) return run_classify(classify_args);
        if (reduce_cmd->parsed()) return run_reduce(reduce_args);
        if (gen_cmd->parsed()) return run_gen(gen_args);
        if (perturb_cmd->parsed()) return run_perturb(perturb_args);
        if (verify_cmd->parsed()) return run_verify(verify_args);
        return kExitUsage;
    } catch (const canonform::ParseError& e) {
        print_error("ParseError", e);
        return kExitParse;
    } catch (const canonform::UnsupportedFormatError& e) {
        print_error("UnsupportedFormat", e);
        return kExitParse;
    } catch (const canonform::DefectiveError& e) {
        print_error("Defective", e);
        return kExitDefective;
    } catch (const canonform::NotNormalError& e) {
        print_error("NotNormal", e);
        return kExitNotNormal;
    } catch (const canonform::Error& e) {
        print_error("Internal", e);
        return kExitInternal;
    } catch (const std::exception& e) {
        print_error("Internal", e);
        return kExitInternal;
    }
}
