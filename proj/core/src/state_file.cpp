#include "qcmi/state_file.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "qcmi/error.hpp"

namespace qcmi {

namespace {

constexpr double kFileTol = 1e-8;

bool next_content_line(std::istream& in, std::string& line, int& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

[[noreturn]] void fail_at(int lineno, const std::string& what) {
  std::ostringstream os;
  os << "line " << lineno << ": " << what;
  throw Error(ErrorKind::parse, os.str());
}

}  // namespace

StateFile parse_state(std::istream& in) {
  std::string line;
  int lineno = 0;
  if (!next_content_line(in, line, lineno)) throw Error(ErrorKind::parse, "empty state file");
  std::istringstream head(line);
  int nx = 0, ny = 0;
  std::string extra;
  if (!(head >> nx >> ny) || (head >> extra)) fail_at(lineno, "expected 'nx ny'");
  if (nx < 1 || ny < 1) fail_at(lineno, "dimensions must be >= 1");
  const int d = nx * ny;
  Matrix m(d, d);
  for (int k = 0; k < d * d; ++k) {
    if (!next_content_line(in, line, lineno)) {
      std::ostringstream os;
      os << "expected " << d * d << " entries, found " << k;
      throw Error(ErrorKind::parse, os.str());
    }
    std::istringstream row(line);
    double re = 0.0, im = 0.0;
    if (!(row >> re >> im) || (row >> extra)) fail_at(lineno, "expected 're im'");
    m(k / d, k % d) = Complex(re, im);
  }
  if (next_content_line(in, line, lineno)) fail_at(lineno, "trailing content after matrix entries");

  const double herm = hermitian_defect(m);
  if (herm > kFileTol) {
    std::ostringstream os;
    os << "max |m_ij - conj(m_ji)| = " << herm << " exceeds " << kFileTol;
    throw Error(ErrorKind::not_hermitian, os.str());
  }
  HermitianMatrix rho = HermitianMatrix::hermitize(m);
  const Spectrum s = eig_hermitian(rho);
  if (s.min() < -kFileTol) {
    std::ostringstream os;
    os << "min eigenvalue " << s.min() << " below -" << kFileTol;
    throw Error(ErrorKind::not_psd, os.str());
  }
  if (std::abs(rho.trace() - 1.0) > kFileTol) {
    std::ostringstream os;
    os << "trace " << rho.trace() << " differs from 1 by more than " << kFileTol;
    throw Error(ErrorKind::not_density_matrix, os.str());
  }
  return StateFile{BipartiteDims{nx, ny}, std::move(rho)};
}

StateFile read_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path);
  return parse_state(in);
}

void write_state(std::ostream& out, const StateFile& s) {
  if (s.rho.dim() != s.dims.total()) throw Error(ErrorKind::dimension_mismatch, "rho dim != nx*ny");
  out << s.dims.nx << ' ' << s.dims.ny << '\n';
  char buf[96];
  const Matrix& m = s.rho.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g %.17g\n", m(i, j).real(), m(i, j).imag());
      out << buf;
    }
}

void write_state_file(const std::string& path, const StateFile& s) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path);
  write_state(out, s);
  if (!out) throw Error(ErrorKind::io, "write failed: " + path);
}

}  // namespace qcmi
