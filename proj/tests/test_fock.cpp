#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cvrsp/channels.hpp"
#include "cvrsp/fock.hpp"
#include "cvrsp/states.hpp"
#include "test_util.hpp"

using namespace cvrsp;

TEST_CASE("basis states") {
  const PureState vac = basis_state(0, 10);
  CHECK(vac.dim() == 10);
  CHECK(vac[0] == cplx(1.0));
  CHECK(vac.amplitudes().tail(9).norm() == 0.0);
  CHECK(basis_state(1, 10)[1] == cplx(1.0));
  CHECK_THROWS_AS(basis_state(10, 10), std::out_of_range);
  CHECK_THROWS_AS(basis_state(-1, 10), std::out_of_range);
  CHECK_THROWS_AS(basis_state(0, 1), std::invalid_argument);
}

TEST_CASE("PureState normalizes and rejects zero vectors") {
  Vector v(3);
  v << 3.0, 4.0, 0.0;
  const PureState s(v);
  CHECK(s.amplitudes().norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s[0].real() == doctest::Approx(0.6));
  CHECK_THROWS_AS(PureState(Vector::Zero(4)), NumericalError);
}

TEST_CASE("MixedState rejects non-states") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.5;
  m(1, 1) = -0.5;
  CHECK_THROWS_AS(MixedState{m}, std::invalid_argument);
  m = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(MixedState{m}, std::invalid_argument);  // trace 2
  m = Matrix::Identity(2, 2) * 0.5;
  m(0, 1) = cplx(0.0, 0.3);
  CHECK_THROWS_AS(MixedState{m}, std::invalid_argument);  // not Hermitian
}

TEST_CASE("annihilation") {
  SUBCASE("a|1> = |0>") {
    const Vector out = annihilate(basis_state(1, 10).amplitudes());
    CHECK(out(0) == cplx(1.0));
    CHECK(out.tail(9).norm() == 0.0);
  }
  SUBCASE("a|0> = 0") { CHECK(annihilate(basis_state(0, 10).amplitudes()).norm() == 0.0); }
  SUBCASE("coherent eigenstate") {
    const PureState alpha = coherent(0.7, 30);
    const Vector diff = annihilate(alpha.amplitudes()) - 0.7 * alpha.amplitudes();
    CHECK(diff.cwiseAbs().maxCoeff() <= 1e-10);
  }
  SUBCASE("output norm is sqrt(<n>)") {
    std::mt19937_64 rng(7);
    const PureState psi = testing::random_pure(rng, 12, 8);
    CHECK(annihilate(psi.amplitudes()).norm() ==
          doctest::Approx(std::sqrt(mean_photon_number(psi))).epsilon(1e-13));
  }
}

TEST_CASE("ladder adjointness <phi|a psi> = <a^dag phi|psi>") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    // support below the top level so create() loses nothing
    const Vector phi = testing::random_pure(rng, 16, 15).amplitudes();
    const Vector psi = testing::random_pure(rng, 16).amplitudes();
    const cplx lhs = phi.dot(annihilate(psi));
    const cplx rhs = create(phi).dot(psi);
    CHECK(std::abs(lhs - rhs) <= 1e-12);
  }
}

TEST_CASE("tensor and partial trace") {
  SUBCASE("two-mode vacuum") {
    const TwoModeState v = tensor(basis_state(0, 3), basis_state(0, 4));
    REQUIRE(v.ket());
    CHECK((*v.ket())(0) == cplx(1.0));
    CHECK(v.ket()->tail(11).norm() == 0.0);
  }
  SUBCASE("index convention nA * dimB + nB") {
    const TwoModeState s = tensor(basis_state(1, 3), basis_state(2, 4));
    CHECK(std::abs((*s.ket())(1 * 4 + 2)) == doctest::Approx(1.0));
  }
  SUBCASE("round trip on random products") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
      const MixedState a = testing::random_mixed(rng, 4, 2);
      const MixedState b = testing::random_mixed(rng, 5, 3);
      const TwoModeState ab = tensor(a, b);
      CHECK((partial_trace(ab, Mode::A).matrix() - a.matrix()).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK((partial_trace(ab, Mode::B).matrix() - b.matrix()).cwiseAbs().maxCoeff() <= 1e-12);
      // purity multiplicative
      CHECK(ab.matrix().squaredNorm() == doctest::Approx(purity(a) * purity(b)).epsilon(1e-12));
    }
  }
  SUBCASE("pure round trip fidelity") {
    std::mt19937_64 rng(5);
    const PureState a = testing::random_pure(rng, 4);
    const PureState b = testing::random_pure(rng, 6);
    CHECK(fidelity(partial_trace(tensor(a, b), Mode::A), a) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("Tr_B[|0><0| x rho_B] = |0><0|") {
    std::mt19937_64 rng(9);
    const MixedState rb = testing::random_mixed(rng, 5);
    const MixedState ra = partial_trace(tensor(MixedState(basis_state(0, 3)), rb), Mode::A);
    CHECK(std::abs(ra(0, 0) - 1.0) <= 1e-12);
    CHECK(ra.matrix().cwiseAbs().sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("entangled states: reduced states have equal purity and unit trace") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 10; ++trial) {
      const TwoModeState s(testing::random_ket(rng, 3 * 4), 3, 4);
      const MixedState ra = partial_trace(s, Mode::A);
      const MixedState rb = partial_trace(s, Mode::B);
      CHECK(ra.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(purity(ra) == doctest::Approx(purity(rb)).epsilon(1e-12));
      CHECK(check_density_matrix(ra.matrix()).ok());
      CHECK(check_density_matrix(rb.matrix()).ok());
    }
  }
}

TEST_CASE("fidelity") {
  std::mt19937_64 rng(1);
  const PureState psi = testing::random_pure(rng, 6);
  CHECK(fidelity(MixedState(psi), psi) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fidelity(MixedState(basis_state(0, 5)), basis_state(1, 5)) == 0.0);

  Matrix half = Matrix::Zero(4, 4);
  half(0, 0) = half(1, 1) = 0.5;
  const MixedState mixed(half);
  for (int trial = 0; trial < 5; ++trial) {
    CHECK(fidelity(mixed, testing::random_pure(rng, 4, 2)) == doctest::Approx(0.5).epsilon(1e-12));
  }

  SUBCASE("global phase invariance") {
    const MixedState rho = testing::random_mixed(rng, 6);
    const PureState phased(psi.amplitudes() * std::polar(1.0, 1.234));
    CHECK(fidelity(rho, psi) == doctest::Approx(fidelity(rho, phased)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(fidelity(mixed, psi), std::invalid_argument);
}

TEST_CASE("purity") {
  std::mt19937_64 rng(2);
  CHECK(purity(MixedState(testing::random_pure(rng, 7))) == doctest::Approx(1.0).epsilon(1e-12));
  Matrix half = Matrix::Zero(2, 2);
  half(0, 0) = half(1, 1) = 0.5;
  CHECK(purity(MixedState(half)) == doctest::Approx(0.5));
  // Bernoulli loss of one photon at eta = 1/2 is the equal mixture of |0>, |1>
  const MixedState lost = loss_channel(MixedState(basis_state(1, 6)), Efficiency(0.5));
  CHECK(purity(lost) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("constructors satisfy the state invariants") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const MixedState rho = testing::random_mixed(rng, 10, 1 + trial % 4);
    CHECK(check_density_matrix(rho.matrix()).ok());
    const PureState psi = testing::random_pure(rng, 10);
    CHECK(std::abs(psi.amplitudes().squaredNorm() - 1.0) <= 1e-12);
  }
}
