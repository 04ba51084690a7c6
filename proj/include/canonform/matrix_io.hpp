#pragma once

#include <filesystem>

#include "canonform/dense_matrix.hpp"

namespace canonform {

/// Matrix Market "array complex general" reader. Coordinate/sparse files are
/// rejected with UnsupportedFormatError; malformed input raises ParseError
/// with the offending line number.
DenseMatrix read_matrix_market(const std::filesystem::path& path);

/// Writer emitting 17 significant digits per component (lossless round trip),
/// column-major as the format prescribes.
void write_matrix_market(const std::filesystem::path& path, const DenseMatrix& a);

}  // namespace canonform
