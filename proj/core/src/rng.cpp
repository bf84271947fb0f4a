#include "dyncoh/rng.hpp"

namespace dyncoh {

ComplexMatrix random_unitary(Eigen::Index d, Rng& rng) {
  ComplexMatrix g = rng.ginibre(d, d);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix phases so the distribution is Haar, not just QR-dependent.
  for (Eigen::Index k = 0; k < d; ++k) {
    Complex rk = r(k, k);
    double a = std::abs(rk);
    q.col(k) *= (a > 0 ? rk / a : Complex(1, 0));
  }
  return q;
}

ComplexVector random_pure_ket(Eigen::Index d, Rng& rng) {
  ComplexVector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = rng.cgauss();
  v.normalize();
  return v;
}

ComplexMatrix random_density(Eigen::Index d, Rng& rng, Eigen::Index rank) {
  if (rank <= 0) rank = d;
  ComplexMatrix g = rng.ginibre(d, rank);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace();
  return symmetrize(rho);
}

}  // namespace dyncoh
