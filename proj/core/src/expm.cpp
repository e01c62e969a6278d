#include <array>
#include <cmath>

#include "qcmi/hermitian.hpp"

namespace qcmi {

namespace {

// Padé [13/13] coefficients for exp (Higham 2005).
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};
constexpr double kTheta13 = 5.371920351148152;

double norm_one(const Matrix& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); }

}  // namespace

Matrix expm_pade(const Matrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::dimension_mismatch, "expm_pade");
  const Eigen::Index n = m.rows();
  if (n == 0) return m;
  const double nrm = norm_one(m);
  int squarings = 0;
  if (nrm > kTheta13) squarings = static_cast<int>(std::ceil(std::log2(nrm / kTheta13)));
  const Matrix a = m / std::ldexp(1.0, squarings);

  const Matrix id = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  const auto& b = kPade13;
  const Matrix u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id;
  const Matrix u = a * u_inner;
  const Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;

  Matrix r = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) r = r * r;
  return r;
}

Matrix expm_neg_pade(const Matrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::dimension_mismatch, "expm_neg_pade");
  const Eigen::Index n = a.rows();
  if (n == 0) return a;
  // Gershgorin lower bound; a - shift·1 is PSD.
  double shift = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double off = a.row(i).cwiseAbs().sum() - std::abs(a(i, i));
    const double lo = a(i, i).real() - off;
    shift = i == 0 ? lo : std::min(shift, lo);
  }
  const Matrix shifted = a - shift * Matrix::Identity(n, n);
  return std::exp(-shift) * expm_pade(-shifted);
}

}  // namespace qcmi
