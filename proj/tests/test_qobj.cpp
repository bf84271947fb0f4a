#include <doctest.h>

#include "dyncoh/qobj.hpp"
#include "dyncoh/rng.hpp"

using namespace dyncoh;

namespace {

ComplexMatrix plus_state() {
  ComplexMatrix m(2, 2);
  m.setConstant(Complex(0.5, 0));
  return m;
}

}  // namespace

TEST_SUITE("qobj") {

TEST_CASE("choi of kraus") {
  // identity channel -> phi+, rank 1
  QuantumChannel id2 = identity_channel(2);
  ComplexMatrix phi = QuantumState::maximally_entangled(2).density;
  CHECK((id2.choi() - phi).cwiseAbs().maxCoeff() <= 1e-14);
  auto eg = eig_hermitian(id2.choi());
  CHECK(eg.values(eg.values.size() - 1) == doctest::Approx(1.0));
  CHECK(eg.values(eg.values.size() - 2) == doctest::Approx(0.0));

  // completely dephasing qubit channel: diag(1/2, 0, 0, 1/2)
  QuantumChannel deph = dephasing_channel(2);
  ComplexMatrix expect = zeros(4, 4);
  expect(0, 0) = 0.5;
  expect(3, 3) = 0.5;
  CHECK((deph.choi() - expect).cwiseAbs().maxCoeff() <= 1e-14);

  // unitary channels have pure Choi matrices
  QuantumChannel f2 = qft_channel(2);
  CHECK((f2.choi() * f2.choi()).trace().real() == doctest::Approx(1.0).epsilon(1e-12));

  // non trace preserving Kraus set is rejected
  CHECK_THROWS(choi_of_kraus({ComplexMatrix(0.5 * identity(2))}, 2, 2));
}

TEST_CASE("apply") {
  QuantumState plus(plus_state());
  QuantumState out = dephasing_channel(2).apply(plus);
  CHECK((out.density - identity(2) * 0.5).cwiseAbs().maxCoeff() <= 1e-12);

  Rng rng(3);
  ComplexMatrix rho = random_density(2, rng);
  QuantumState same = identity_channel(2).apply(QuantumState(rho));
  CHECK((same.density - rho).cwiseAbs().maxCoeff() <= 1e-12);

  // F_2 |0><0| = |+><+|
  QuantumState zero = QuantumState::basis(2, 0);
  QuantumState mapped = qft_channel(2).apply(zero);
  CHECK((mapped.density - plus_state()).cwiseAbs().maxCoeff() <= 1e-12);

  CHECK_THROWS_AS(qft_channel(3).apply(zero), DimensionError);
}

TEST_CASE("qft channel") {
  ComplexMatrix f2 = qft_matrix(2);
  ComplexMatrix expect(2, 2);
  expect << 1, 1, 1, -1;
  expect /= std::sqrt(2.0);
  CHECK((f2 - expect).cwiseAbs().maxCoeff() <= 1e-14);

  for (int d = 2; d <= 5; ++d) {
    ComplexMatrix f = qft_matrix(d);
    CHECK((ComplexMatrix(f * f.adjoint()) - identity(d)).cwiseAbs().maxCoeff() <= 1e-12);
  }

  // classical overlap: Tr(J^F J^Q) = 1/d^2 for every deterministic Q
  for (int d = 2; d <= 3; ++d) {
    ComplexMatrix jf = qft_channel(d).choi();
    for (const auto& q : deterministic_channels(d, d))
      CHECK(std::abs((jf * q.choi()).trace().real() - 1.0 / (d * d)) <= 1e-12);
  }

  CHECK_THROWS(qft_channel(1));
}

TEST_CASE("fixed channel constructions") {
  ComplexMatrix rho(2, 2);
  rho << Complex(0.5, 0), Complex(0.4, 0), Complex(0.4, 0), Complex(0.5, 0);
  ComplexMatrix dep = dephasing_channel(2).apply_raw(rho);
  CHECK((dep - ComplexMatrix(identity(2) * 0.5)).cwiseAbs().maxCoeff() <= 1e-12);

  QuantumState zero = QuantumState::basis(2, 0);
  QuantumState r = replacement_channel(2).apply(zero);
  CHECK((r.density - plus_state()).cwiseAbs().maxCoeff() <= 1e-12);

  QuantumChannel det = deterministic_channel({0, 0}, 2, 2);
  ComplexMatrix expect = zeros(4, 4);
  expect(0, 0) = 0.5;
  expect(2, 2) = 0.5;
  CHECK((det.choi() - expect).cwiseAbs().maxCoeff() <= 1e-14);

  CHECK_THROWS(deterministic_channel({0, 5}, 2, 2));
  CHECK_THROWS(deterministic_channel({0}, 2, 2));
}

TEST_CASE("classical check") {
  CHECK(classical_check(dephasing_channel(3)).pass);
  auto v = classical_check(identity_channel(2));
  CHECK_FALSE(v.pass);
  CHECK(v.witness.has_value());
  CHECK(v.residual > 1e-3);
  for (const auto& q : deterministic_channels(2, 2)) CHECK(classical_check(q).pass);

  // classical <=> diagonal Choi, both directions
  Rng rng(9);
  ComplexMatrix diag = zeros(4, 4);
  diag(0, 0) = 0.3;
  diag(1, 1) = 0.2;
  diag(2, 2) = 0.25;
  diag(3, 3) = 0.25;
  CHECK(classical_check(QuantumChannel(2, 2, diag)).pass);
  QuantumChannel generic = random_channel(2, 2, 2, rng);
  CHECK(classical_check(generic).pass ==
        ((generic.choi() - choi_pinch(generic.choi())).cwiseAbs().maxCoeff() <= 1e-9));
}

TEST_CASE("class hierarchy checks") {
  QuantumChannel deph = dephasing_channel(2);
  CHECK(mio_check(deph).pass);
  CHECK(dio_check(deph).pass);
  CHECK(di_check(deph).pass);

  auto v = mio_check(qft_channel(2));
  CHECK_FALSE(v.pass);
  CHECK(v.witness_index >= 0);

  // set inclusions on samples: DIO subset MIO, classical subset DI/DIO/MIO
  Rng rng(21);
  for (int rep = 0; rep < 6; ++rep) {
    QuantumChannel n = random_channel(2, 2, 2, rng);
    if (dio_check(n).pass) CHECK(mio_check(n).pass);
  }
  for (const auto& q : deterministic_channels(2, 2)) {
    CHECK(di_check(q).pass);
    CHECK(dio_check(q).pass);
    CHECK(mio_check(q).pass);
  }
}

TEST_CASE("tensor and compose") {
  QuantumChannel ii = tensor(identity_channel(2), identity_channel(2));
  CHECK((ii.choi() - QuantumState::maximally_entangled(4).density).cwiseAbs().maxCoeff() <=
        1e-13);

  // dephasing is idempotent under composition
  QuantumChannel dd = compose(dephasing_channel(2), dephasing_channel(2));
  CHECK((dd.choi() - dephasing_channel(2).choi()).cwiseAbs().maxCoeff() <= 1e-13);

  // product action on product states
  Rng rng(4);
  ComplexMatrix rho = random_density(2, rng), sigma = random_density(2, rng);
  QuantumChannel ff = tensor(qft_channel(2), qft_channel(2));
  ComplexMatrix lhs = ff.apply_raw(kron(rho, sigma));
  ComplexMatrix f = qft_matrix(2);
  ComplexMatrix rhs = kron(ComplexMatrix(f * rho * f.adjoint()),
                           ComplexMatrix(f * sigma * f.adjoint()));
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);

  // tensor Choi equals the leg-permuted Kronecker product exactly
  QuantumChannel a = random_channel(2, 2, 2, rng), b = random_channel(2, 2, 2, rng);
  ComplexMatrix perm = reorder_subsystems(kron(a.choi(), b.choi()), {2, 2, 2, 2},
                                          {0, 2, 1, 3});
  CHECK((tensor(a, b).choi() - perm).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(compose(qft_channel(3), qft_channel(2)), DimensionError);
}

TEST_CASE("constructors validate CPTP") {
  Rng rng(17);
  for (int rep = 0; rep < 4; ++rep) {
    QuantumChannel n = random_channel(2, 3, 2, rng);
    CHECK(n.cptp_residual() <= 1e-10);
    CHECK(cptp_check(n).pass);
  }
  ComplexMatrix bad = identity(4) / 4.0;
  bad(0, 0) = 0.5;  // breaks the marginal
  CHECK_THROWS(QuantumChannel(2, 2, bad));
}

TEST_CASE("kraus round trip") {
  Rng rng(23);
  QuantumChannel n = random_channel(3, 2, 2, rng);
  QuantumChannel back = choi_of_kraus(n.kraus(), 3, 2);
  CHECK((back.choi() - n.choi()).cwiseAbs().maxCoeff() <= 1e-10);
}

}  // TEST_SUITE
