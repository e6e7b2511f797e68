#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace nsflab {

// Matrix exponential for small dense matrices by Pade(13) with scaling and
// squaring. Eigendecomposition is deliberately avoided: the mode matrix has
// defective points where the acoustic pair meets the thermal branch.
inline Eigen::Matrix3d matrix_exponential(const Eigen::Matrix3d& A) {
  using M3 = Eigen::Matrix3d;
  static const double b[14] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                               1187353796428800.0,  129060195264000.0,   10559470521600.0,
                               670442572800.0,      33522128640.0,       1323241920.0,
                               40840800.0,          960960.0,            16380.0,
                               182.0,               1.0};
  const double theta13 = 5.371920351148152;

  const double nrm = A.cwiseAbs().colwise().sum().maxCoeff();  // 1-norm
  if (nrm == 0.0) return M3::Identity();
  int squarings = 0;
  if (nrm > theta13) squarings = std::max(0, static_cast<int>(std::ceil(std::log2(nrm / theta13))));
  const M3 As = A / std::ldexp(1.0, squarings);

  const M3 A2 = As * As;
  const M3 A4 = A2 * A2;
  const M3 A6 = A4 * A2;
  const M3 I = M3::Identity();

  const M3 U = As * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 +
                     b[3] * A2 + b[1] * I);
  const M3 V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 + b[4] * A4 + b[2] * A2 +
               b[0] * I;

  M3 R = (V - U).partialPivLu().solve(V + U);
  for (int i = 0; i < squarings; ++i) R = R * R;
  return R;
}

// Spectral 2-norm of a small matrix.
inline double operator_two_norm(const Eigen::Matrix3d& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(M.transpose() * M);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

}  // namespace nsflab
