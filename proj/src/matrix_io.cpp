#include "netctrl/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "netctrl/errors.hpp"

namespace netctrl {

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  return in;
}

Index read_header(std::istream& in, const std::string& path) {
  long long n = 0;
  if (!(in >> n) || n < 1)
    throw Error("'" + path + "': expected a positive size header");
  return static_cast<Index>(n);
}

}  // namespace

Matrixd read_matrix(const std::string& path) {
  auto in = open_in(path);
  const Index n = read_header(in, path);
  Matrixd M(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (!(in >> M(i, j)))
        throw Error("'" + path + "': truncated matrix data at row " +
                    std::to_string(i + 1));
  validate_weight_matrix(M);
  return M;
}

void write_matrix(const std::string& path, const Matrixd& M) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << M.rows() << "\n";
  char buf[64];
  for (Index i = 0; i < M.rows(); ++i) {
    for (Index j = 0; j < M.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", M(i, j));
      out << (j ? " " : "") << buf;
    }
    out << "\n";
  }
  if (!out) throw Error("write failed for '" + path + "'");
}

Vectord read_vector(const std::string& path) {
  auto in = open_in(path);
  const Index n = read_header(in, path);
  Vectord v(n);
  for (Index i = 0; i < n; ++i)
    if (!(in >> v(i)))
      throw Error("'" + path + "': truncated vector data at entry " +
                  std::to_string(i + 1));
  return v;
}

void write_vector(const std::string& path, const Vectord& v) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << v.size() << "\n";
  char buf[64];
  for (Index i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", v(i));
    out << buf << "\n";
  }
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace netctrl
