#pragma once

#include <string>
#include <string_view>

#include "lrpd/linalg.hpp"

namespace lrpd {

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double x);

/// Parses a headerless n x n CSV. Rejects ragged rows, non-numeric cells, and
/// asymmetry above `rel_tol * max|a_ij|`.
SymMatrix read_matrix_csv(const std::string& path, double rel_tol = 1e-8);
SymMatrix parse_matrix_csv(std::string_view text, double rel_tol = 1e-8);

std::string matrix_to_csv(const Matrix& m);
std::string vector_to_csv(const Vector& v);

/// Writes via a temporary file in the same directory and renames it into place.
void write_file_atomic(const std::string& path, std::string_view contents);

std::string read_file(const std::string& path);

}  // namespace lrpd
