#ifndef FLUXHERM_FDWEIGHTS_HPP
#define FLUXHERM_FDWEIGHTS_HPP

#include <Eigen/Core>
#include <algorithm>

// Finite-difference weights on arbitrary nodes (Fornberg's recurrence).
// Column k of the result holds the weights w such that
//   f^(k)(z) ~= sum_i w[i] f(x[i]),
// exact for polynomials of degree < x.size().

namespace fluxherm {

inline Eigen::MatrixXd fdWeights(double z, const Eigen::VectorXd& x, int max_order) {
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, max_order + 1);
  double c1 = 1.0;
  double c4 = x[0] - z;
  C(0, 0) = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, max_order);
    double c2 = 1.0;
    double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          C(i, k) = c1 * (k * C(i - 1, k - 1) - c5 * C(i - 1, k)) / c2;
        C(i, 0) = -c1 * c5 * C(i - 1, 0) / c2;
      }
      for (int k = mn; k >= 1; --k)
        C(j, k) = (c4 * C(j, k) - k * C(j, k - 1)) / c3;
      C(j, 0) = c4 * C(j, 0) / c3;
    }
    c1 = c2;
  }
  return C;
}

}  // namespace fluxherm

#endif  // FLUXHERM_FDWEIGHTS_HPP
