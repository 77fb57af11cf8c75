#pragma once

#include <string>
#include <variant>
#include <vector>

#include "hjac/core.hpp"

namespace hjac {

using AnyMatrix = std::variant<DenseMatrix<double>, DenseMatrix<complex128>>;

// Binary layout, little-endian: "HJAC", u32 version (1), u32 kind
// (0 real, 1 complex), u64 rows, u64 cols, then the column-major payload.
void write_matrix(const std::string& path, const AnyMatrix& m);

// Text layout: a header line "hjac-text real|complex rows cols", then one
// matrix row per line; complex entries are written as (re,im).
void write_matrix_text(const std::string& path, const AnyMatrix& m);

// Reads either layout, detected from the first bytes. Throws InputError on
// a bad header, unknown version or truncated payload.
AnyMatrix read_matrix(const std::string& path);

// A real matrix with a single row or column whose entries are all +1 or -1.
SignVector read_signs(const std::string& path);

// One value per line, printed with 17 significant digits.
void write_values(const std::string& path, const std::vector<double>& values);
std::vector<double> read_values(const std::string& path);

}  // namespace hjac
