#include "kacmix/matrix_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kacmix {

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void write_matrix(std::ostream& out, const GroupElement& x) {
  const int n = x.dim();
  out << "n " << n << ' '
      << (x.is_real() ? "real-orthogonal" : "complex-unitary") << '\n';
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (c) out << ' ';
      if (x.is_real()) {
        out << format_double(x.real()(r, c));
      } else {
        out << format_double(x.cplx()(r, c).real()) << ' '
            << format_double(x.cplx()(r, c).imag());
      }
    }
    out << '\n';
  }
}

void write_matrix_file(const std::filesystem::path& path, const GroupElement& x) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  write_matrix(out, x);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

GroupElement read_matrix(std::istream& in) {
  std::string tag;
  int n = 0;
  std::string field;
  if (!(in >> tag >> n >> field) || tag != "n" || n < 1)
    throw std::runtime_error("malformed matrix header");
  if (field == "real-orthogonal") {
    Eigen::MatrixXd m(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        if (!(in >> m(r, c))) throw std::runtime_error("malformed matrix body");
    return GroupElement::from_real(std::move(m));
  }
  if (field == "complex-unitary") {
    Eigen::MatrixXcd m(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        double re = 0.0;
        double im = 0.0;
        if (!(in >> re >> im)) throw std::runtime_error("malformed matrix body");
        m(r, c) = std::complex<double>(re, im);
      }
    return GroupElement::from_complex(std::move(m));
  }
  throw std::runtime_error("unknown field tag: " + field);
}

GroupElement read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  return read_matrix(in);
}

std::vector<GroupElement> read_matrix_directory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw std::runtime_error("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file()) files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<GroupElement> samples;
  samples.reserve(files.size());
  for (const auto& f : files) samples.push_back(read_matrix_file(f));
  if (samples.empty()) throw std::runtime_error("no matrix files in " + dir.string());
  return samples;
}

}  // namespace kacmix
