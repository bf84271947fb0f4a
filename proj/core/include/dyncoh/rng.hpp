#pragma once

// Seeded sampling of states, unitaries and channels. Gaussian draws use an
// explicit Box-Muller so that a given seed yields the same stream on every
// platform and standard library.

#include <cstdint>
#include <random>

#include "dyncoh/matrix.hpp"

namespace dyncoh {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() {
    // 53-bit mantissa draw in [0,1)
    return (gen_() >> 11) * (1.0 / 9007199254740992.0);
  }

  double gauss() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 <= 1e-300) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double th = 6.283185307179586476925287 * u2;
    spare_ = r * std::sin(th);
    have_spare_ = true;
    return r * std::cos(th);
  }

  Complex cgauss() { return Complex(gauss(), gauss()); }

  std::uint64_t integer(std::uint64_t bound) { return gen_() % bound; }

  // Ginibre matrix: i.i.d. standard complex Gaussians.
  ComplexMatrix ginibre(Eigen::Index rows, Eigen::Index cols) {
    ComplexMatrix g(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = cgauss();
    return g;
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Haar-distributed unitary via QR of a Ginibre matrix with phase fix.
ComplexMatrix random_unitary(Eigen::Index d, Rng& rng);

// Normalized Ginibre vector as a pure-state ket.
ComplexVector random_pure_ket(Eigen::Index d, Rng& rng);

ComplexMatrix random_density(Eigen::Index d, Rng& rng, Eigen::Index rank = 0);

}  // namespace dyncoh
