#ifndef NETCTRL_MATRIX_IO_HPP_
#define NETCTRL_MATRIX_IO_HPP_

#include <string>

#include "netctrl/matrix_core.hpp"

namespace netctrl {

// Matrix file format: a header line holding n, then n rows of n
// space-separated decimal reals. The writer emits 17 significant digits so
// doubles round-trip exactly.

Matrixd read_matrix(const std::string& path);
void write_matrix(const std::string& path, const Matrixd& M);

// Vector files use the same layout with a single value per row.
Vectord read_vector(const std::string& path);
void write_vector(const std::string& path, const Vectord& v);

}  // namespace netctrl

#endif  // NETCTRL_MATRIX_IO_HPP_
