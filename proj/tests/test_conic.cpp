#include <doctest.h>

#include "dyncoh/conic.hpp"
#include "dyncoh/rng.hpp"

using namespace dyncoh;
using namespace dyncoh::conic;

TEST_SUITE("conic") {

TEST_CASE("svec round trip is isometric") {
  Rng rng(1);
  ComplexMatrix m = symmetrize(rng.ginibre(5, 5));
  std::vector<double> s(svec_size(5));
  svec_pack(m, s.data());
  ComplexMatrix back = svec_unpack(s.data(), 5);
  CHECK((back - m).cwiseAbs().maxCoeff() <= 1e-14);
  double dot = 0;
  for (double x : s) dot += x * x;
  CHECK(dot == doctest::Approx((m * m).trace().real()).epsilon(1e-12));
}

TEST_CASE("max eigenvalue as an SDP") {
  // min lambda s.t. lambda I - diag(1,3) >= 0
  Program p;
  auto lam = p.add_free(1);
  ComplexMatrix a = zeros(2, 2);
  a(0, 0) = 1;
  a(1, 1) = 3;
  p.require_psd(2, {}, {{lam, 0, identity(2)}}, ComplexMatrix(-a));
  p.add_objective_scalar(lam, 0, 1.0);
  auto rep = p.solve();
  CHECK(rep.status == SolveStatus::Optimal);
  CHECK(p.scalar_value(lam, 0) == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("positive part as an SDP") {
  // min Tr X s.t. X >= rho, X >= 0, for an indefinite Hermitian rho
  Rng rng(2);
  ComplexMatrix rho = symmetrize(rng.ginibre(3, 3));
  Program p;
  auto x = p.add_psd(3);
  p.require_psd(3, {{x, [](const ComplexMatrix& m) { return m; }}}, {},
                ComplexMatrix(-rho));
  p.add_objective(x, identity(3));
  auto rep = p.solve();
  CHECK(rep.status == SolveStatus::Optimal);

  auto eg = eig_hermitian(rho);
  double expect = eg.values.cwiseMax(0.0).sum();
  CHECK(rep.objective == doctest::Approx(expect).epsilon(1e-6));

  // feasible-point extraction: X - rho stays PSD at 10x solver tolerance
  ComplexMatrix xv = p.value(x);
  CHECK(min_eigenvalue(ComplexMatrix(xv - rho)) >= -1e-7);
  CHECK(herm_deviation(xv) <= 1e-9);
}

TEST_CASE("state log-robustness program for |+><+|") {
  // min t1+t2 s.t. diag(t) >= |+><+|; determinant condition gives 2
  ComplexMatrix plus(2, 2);
  plus.setConstant(Complex(0.5, 0));
  Program p;
  auto t = p.add_nonneg(2);
  p.require_psd(2, {},
                {{t, 0, matrix_unit(2, 0, 0)}, {t, 1, matrix_unit(2, 1, 1)}},
                ComplexMatrix(-plus));
  p.add_objective_scalar(t, 0, 1.0);
  p.add_objective_scalar(t, 1, 1.0);
  auto rep = p.solve();
  CHECK(rep.status == SolveStatus::Optimal);
  CHECK(rep.objective == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("bisect feasibility threshold") {
  ComplexMatrix tgt = matrix_unit(2, 0, 0);
  auto feasible = [&](double lam) {
    return min_eigenvalue(ComplexMatrix(lam * 0.5 * identity(2) - tgt)) >= 0.0;
  };
  double lam = bisect_feasibility(feasible, 0.0, 16.0, 1e-7);
  CHECK(lam == doctest::Approx(2.0).epsilon(1e-6));

  auto never = [](double) { return false; };
  CHECK_THROWS_AS(bisect_feasibility(never, 0.0, 16.0, 1e-7), SolverError);
}

TEST_CASE("infeasible program is reported") {
  Program p;
  auto x = p.add_nonneg(1);
  p.row().scalar(x, 0, 1.0).equals(-1.0);
  SolverOptions opts;
  opts.max_iter = 120000;
  auto rep = p.solve(opts);
  CHECK(rep.status == SolveStatus::Infeasible);
}

TEST_CASE("complex data yields Hermitian solutions") {
  Rng rng(3);
  ComplexMatrix rho = random_density(4, rng);
  Program p;
  auto x = p.add_psd(4);
  p.require_psd(4, {{x, [](const ComplexMatrix& m) { return m; }}}, {},
                ComplexMatrix(-rho));
  p.add_objective(x, identity(4));
  auto rep = p.solve();
  CHECK(rep.status == SolveStatus::Optimal);
  CHECK(rep.objective == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(herm_deviation(p.value(x)) <= 1e-9);
}

}  // TEST_SUITE
