#include "canonform/matrix_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "canonform/errors.hpp"

namespace canonform {

namespace {

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

bool next_line(std::ifstream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

}  // namespace

DenseMatrix read_matrix_market(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("read_matrix_market: cannot open " + path.string());

    std::string line;
    std::size_t lineno = 0;

    if (!next_line(in, line)) throw ParseError("empty file", 1);
    ++lineno;
    {
        std::istringstream banner(line);
        std::string head, object, format, field, symmetry;
        banner >> head >> object >> format >> field >> symmetry;
        if (head != "%%MatrixMarket" || lowercase(object) != "matrix") {
            throw ParseError("malformed Matrix Market banner", lineno);
        }
        if (lowercase(format) == "coordinate") {
            throw UnsupportedFormatError(
                "read_matrix_market: coordinate (sparse) files are not supported; expected a dense array");
        }
        if (lowercase(format) != "array" || lowercase(field) != "complex" ||
            lowercase(symmetry) != "general") {
            throw ParseError("expected banner 'matrix array complex general'", lineno);
        }
    }

    std::size_t rows = 0;
    std::size_t cols = 0;
    while (next_line(in, line)) {
        ++lineno;
        if (!line.empty() && line[0] == '%') continue;
        std::istringstream sizes(line);
        long long r = -1;
        long long c = -1;
        if (!(sizes >> r >> c) || r < 0 || c < 0) {
            throw ParseError("expected 'rows cols' size line", lineno);
        }
        rows = static_cast<std::size_t>(r);
        cols = static_cast<std::size_t>(c);
        break;
    }
    if (rows == 0 && cols == 0 && !in) throw ParseError("missing size line", lineno);

    DenseMatrix a(rows, cols);
    const std::size_t total = rows * cols;
    std::size_t count = 0;
    while (count < total) {
        if (!next_line(in, line)) {
            throw ParseError("unexpected end of file: " + std::to_string(total - count) +
                                 " entries missing",
                             lineno);
        }
        ++lineno;
        if (line.empty() || line[0] == '%') continue;
        std::istringstream entry(line);
        double re = 0.0;
        double im = 0.0;
        if (!(entry >> re >> im)) {
            throw ParseError("expected 'real imag' entry", lineno);
        }
        if (!std::isfinite(re) || !std::isfinite(im)) {
            throw ParseError("non-finite matrix entry", lineno);
        }
        // Column-major on disk.
        const std::size_t col = count / rows;
        const std::size_t row = count % rows;
        a(row, col) = Complex(re, im);
        ++count;
    }
    return a;
}

void write_matrix_market(const std::filesystem::path& path, const DenseMatrix& a) {
    std::ofstream out(path);
    if (!out) throw Error("write_matrix_market: cannot open " + path.string());
    out << "%%MatrixMarket matrix array complex general\n";
    out << a.rows() << " " << a.cols() << "\n";
    char buffer[128];
    for (std::size_t j = 0; j < a.cols(); ++j) {
        for (std::size_t i = 0; i < a.rows(); ++i) {
            const Complex v = a(i, j);
            std::snprintf(buffer, sizeof(buffer), "%.17g %.17g\n", v.real(), v.imag());
            out << buffer;
        }
    }
    if (!out) throw Error("write_matrix_market: write failed for " + path.string());
}

}  // namespace canonform
