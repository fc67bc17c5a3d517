#include <doctest.h>

#include <cmath>
#include <random>

#include "hybell/errors.hpp"
#include "hybell/fock.hpp"

using namespace hybell;

TEST_SUITE("fock") {

TEST_CASE("coherent state amplitudes follow the Poisson law") {
  const cplx alpha(0.7, -1.1);
  const FockVector c = coherent_state(alpha, 40);
  CHECK(c.norm() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(number_expectation(c) == doctest::Approx(std::norm(alpha)).epsilon(1e-10));
  for (int n = 0; n <= 10; ++n) {
    const double p = std::exp(-std::norm(alpha) + n * std::log(std::norm(alpha)) - std::lgamma(n + 1.0));
    CHECK(std::norm(c[n]) == doctest::Approx(p).epsilon(1e-10).scale(1e-14));
  }
}

TEST_CASE("even cat has only even photon numbers and the right mean") {
  const cplx alpha(0.0, 2.2);
  const FockVector cat = even_cat_state(alpha, 64);
  CHECK(cat.norm() == doctest::Approx(1.0).epsilon(1e-14));
  for (int n = 1; n <= 64; n += 2) CHECK(std::abs(cat[n]) == 0.0);
  const double a2 = std::norm(alpha);
  CHECK(number_expectation(cat) == doctest::Approx(a2 * std::tanh(a2)).epsilon(1e-10));
}

TEST_CASE("coherent truncation guard") {
  CHECK_THROWS_AS(coherent_state(cplx(5.0, 0.0), 20), DomainError);
  // Inside the |alpha|^2 <= n_max / 4 precondition but with a visible Poisson tail.
  CHECK_THROWS_AS(coherent_state(cplx(1.0, 0.0), 4), TruncationError);
}

TEST_CASE("hermiticity is enforced") {
  CMatrix m = CMatrix::Zero(3, 3);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(FockOperator{m}, NonHermitianError);
  m(1, 0) = 1.0;
  CHECK_NOTHROW(FockOperator{m});
}

TEST_CASE("max eigenpair with phase convention and degeneracy flag") {
  Eigen::Matrix3cd m;
  m << 2, cplx(0, 1), 0, cplx(0, -1), 2, 0, 0, 0, -1;
  const EigenPair p = max_eigenpair(m);
  CHECK(p.value == doctest::Approx(3.0));
  CHECK(!p.degenerate);
  CHECK(p.vector[0].imag() == doctest::Approx(0.0));
  CHECK(p.vector[0].real() > 0.0);
  CHECK((m * p.vector - 3.0 * p.vector).norm() < 1e-12);

  const EigenPair d = max_eigenpair(CMatrix(CMatrix::Identity(3, 3)));
  CHECK(d.degenerate);
  CHECK(std::abs(d.vector[0] - 1.0) < 1e-12);
}

TEST_CASE("hybrid state layouts and swap") {
  CVector v = CVector::Zero(4);
  v[1] = 1.0;  // (0, Xi)
  const HybridState s(StateLayout::PhotonPhotonRestricted, v);
  CHECK(s.basis_labels()[1] == "0,Xi");
  CHECK(std::abs(s.swapped().amplitudes()[2] - 1.0) < 1e-15);
  CHECK_THROWS_AS(HybridState(StateLayout::AtomPhotonRestricted, v).swapped(), DimensionError);
  CHECK_THROWS_AS(HybridState(StateLayout::AtomPhoton, CVector::Zero(5)), DimensionError);
}

TEST_CASE("kron matches index convention i * second + j") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  CMatrix a(2, 2), b(3, 3);
  for (int i = 0; i < 4; ++i) a(i / 2, i % 2) = g(rng);
  for (int i = 0; i < 9; ++i) b(i / 3, i % 3) = g(rng);
  const CMatrix k = kron(a, b);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j)
      for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 3; ++q) CHECK(std::abs(k(i * 3 + j, p * 3 + q) - a(i, p) * b(j, q)) < 1e-15);
}

}
