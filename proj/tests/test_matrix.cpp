#include <doctest.h>

#include "dyncoh/matrix.hpp"
#include "dyncoh/rng.hpp"

using namespace dyncoh;

namespace {

ComplexMatrix diagm(std::initializer_list<double> v) {
  ComplexMatrix m = zeros(v.size(), v.size());
  int i = 0;
  for (double x : v) m(i, i) = x, ++i;
  return m;
}

ComplexMatrix random_herm(int d, Rng& rng) { return symmetrize(rng.ginibre(d, d)); }

// whitened max eigenvalue, the textbook D_max optimizer for full-rank sigma
double dmax_lambda(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  auto eg = eig_hermitian(sigma);
  ComplexMatrix isqrt = zeros(sigma.rows(), sigma.cols());
  for (Eigen::Index k = 0; k < eg.values.size(); ++k)
    isqrt += (1.0 / std::sqrt(eg.values(k))) * eg.vectors.col(k) * eg.vectors.col(k).adjoint();
  auto ew = eig_hermitian(ComplexMatrix(isqrt * rho * isqrt), 1e-7);
  return ew.values(ew.values.size() - 1);
}

}  // namespace

TEST_SUITE("matcore") {

TEST_CASE("kron basics") {
  CHECK((kron(identity(2), identity(2)) - identity(4)).cwiseAbs().maxCoeff() == 0.0);
  ComplexMatrix d12 = diagm({1, 2}), d13 = diagm({1, 3});
  ComplexMatrix expect = diagm({1, 3, 2, 6});
  CHECK((kron(d12, d13) - expect).cwiseAbs().maxCoeff() == 0.0);

  ComplexMatrix p = kron(matrix_unit(2, 0, 0), matrix_unit(2, 1, 1));
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      CHECK(p(r, c) == (r == 1 && c == 1 ? Complex(1, 0) : Complex(0, 0)));
}

TEST_CASE("kron associativity and mixed product") {
  Rng rng(42);
  for (int rep = 0; rep < 5; ++rep) {
    ComplexMatrix a = rng.ginibre(2, 2), b = rng.ginibre(3, 3), c = rng.ginibre(2, 2);
    CHECK((kron(kron(a, b), c) - kron(a, kron(b, c))).cwiseAbs().maxCoeff() <= 1e-12);
    ComplexMatrix d = rng.ginibre(2, 2);
    ComplexMatrix lhs = kron(a, b) * kron(c, ComplexMatrix(b));
    // mixed product on conformable squares
    ComplexMatrix rhs = kron(ComplexMatrix(a * c), ComplexMatrix(b * b));
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, rhs.cwiseAbs().maxCoeff()));
    (void)d;
  }
}

TEST_CASE("partial trace") {
  // maximally entangled marginal
  ComplexVector phi = ComplexVector::Zero(4);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  ComplexMatrix rho = phi * phi.adjoint();
  ComplexMatrix marg = partial_trace(rho, {2, 2}, {0});
  CHECK((marg - identity(2) * 0.5).cwiseAbs().maxCoeff() <= 1e-14);

  Rng rng(7);
  ComplexMatrix a = rng.ginibre(2, 3);
  ComplexMatrix pa = a * a.adjoint();
  ComplexMatrix b = rng.ginibre(3, 2);
  ComplexMatrix pb = b * b.adjoint();
  // product case: tracing A leaves Tr(A) * B
  ComplexMatrix tr_a = partial_trace(kron(pa, pb), {2, 3}, {1});
  CHECK((tr_a - pa.trace() * pb).cwiseAbs().maxCoeff() <= 1e-12);
  // trace preservation
  CHECK(partial_trace(kron(pa, pb), {2, 3}, {0}).trace().real() ==
        doctest::Approx((kron(pa, pb)).trace().real()).epsilon(1e-12));

  CHECK_THROWS_AS(partial_trace(identity(6), {2, 2}, {0}), DimensionError);
}

TEST_CASE("reorder subsystems") {
  Rng rng(3);
  ComplexMatrix a = rng.ginibre(2, 2), b = rng.ginibre(3, 3);
  ComplexMatrix sw = reorder_subsystems(kron(a, b), {2, 3}, {1, 0});
  CHECK((sw - kron(b, a)).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("hermitian eigensolver") {
  auto eg = eig_hermitian(diagm({3, 1}));
  CHECK(eg.values(0) == doctest::Approx(1.0));
  CHECK(eg.values(1) == doctest::Approx(3.0));

  ComplexVector plus(2);
  plus << Complex(1, 0), Complex(1, 0);
  plus /= std::sqrt(2.0);
  auto ep = eig_hermitian(ComplexMatrix(plus * plus.adjoint()));
  CHECK(ep.values(0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(ep.values(1) == doctest::Approx(1.0).epsilon(1e-12));

  Rng rng(11);
  for (int rep = 0; rep < 4; ++rep) {
    ComplexMatrix m = random_herm(8, rng);
    auto e = eig_hermitian(m);
    ComplexMatrix rec = e.vectors * e.values.asDiagonal() * e.vectors.adjoint();
    double scale = m.cwiseAbs().maxCoeff();
    CHECK((rec - m).cwiseAbs().maxCoeff() <= 1e-9 * scale);
    for (Eigen::Index k = 1; k < e.values.size(); ++k) CHECK(e.values(k) >= e.values(k - 1));
  }

  CHECK_THROWS(eig_hermitian(rng.ginibre(3, 3)));
}

TEST_CASE("psd check") {
  CHECK(psd_check(identity(3)));
  CHECK_FALSE(psd_check(ComplexMatrix(-identity(3))));

  Rng rng(5);
  ComplexMatrix rho = random_density(3, rng);
  ComplexMatrix sigma = random_density(3, rng);
  double lam = dmax_lambda(rho, sigma);
  CHECK(psd_check(ComplexMatrix(lam * sigma - rho), 1e-8));
  CHECK_FALSE(psd_check(ComplexMatrix(0.9 * lam * sigma - rho), 1e-8));
}

TEST_CASE("trace norm") {
  Rng rng(9);
  ComplexMatrix u = random_unitary(4, rng);
  CHECK(trace_norm(u) == doctest::Approx(4.0).epsilon(1e-10));
  ComplexMatrix rho = random_density(3, rng);
  CHECK(trace_norm(ComplexMatrix(rho - rho)) == doctest::Approx(0.0));
  ComplexMatrix diff = matrix_unit(2, 0, 0) - matrix_unit(2, 1, 1);
  CHECK(trace_norm(diff) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("fidelity and Fuchs-van Graaf") {
  Rng rng(13);
  ComplexMatrix rho = random_density(3, rng);
  CHECK(fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(fidelity(matrix_unit(2, 0, 0), matrix_unit(2, 1, 1)) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(fidelity(matrix_unit(2, 0, 0), ComplexMatrix(identity(2) * 0.5)) ==
        doctest::Approx(0.5).epsilon(1e-10));
  CHECK_THROWS(fidelity(ComplexMatrix(2 * identity(2)), ComplexMatrix(identity(2) * 0.5)));

  for (int rep = 0; rep < 8; ++rep) {
    ComplexMatrix a = random_density(4, rng, 2), b = random_density(4, rng);
    double f = fidelity(a, b);
    double t = 0.5 * trace_norm(a - b);
    CHECK(t >= 1.0 - std::sqrt(f) - 1e-9);
    CHECK(t <= std::sqrt(1.0 - f) + 1e-9);
  }
}

}  // TEST_SUITE
