#include <doctest.h>

#include <cmath>

#include "hybell/binning.hpp"
#include "hybell/errors.hpp"
#include "hybell/special.hpp"
#include "oracle.hpp"

using namespace hybell;

TEST_SUITE("binning") {

TEST_CASE("grammar") {
  const BinningSet s = BinningSet::parse(" sym : 1.5 ");
  REQUIRE(s.intervals().size() == 1);
  CHECK(s.intervals()[0].lo == -1.5);
  CHECK(s.intervals()[0].hi == 1.5);

  const BinningSet h = BinningSet::parse("halfline:-0.25");
  CHECK(h.intervals()[0].lo == -0.25);
  CHECK(std::isinf(h.intervals()[0].hi));

  const BinningSet u = BinningSet::parse("set:[-inf,-2];[1, 3]");
  REQUIRE(u.intervals().size() == 2);
  CHECK(std::isinf(u.intervals()[0].lo));
  CHECK(u.contains(-5.0));
  CHECK(!u.contains(0.0));
  CHECK(u.contains(2.0));

  CHECK(BinningSet::parse("sym:erfinv(0.5)").intervals()[0].hi == erf_inverse(0.5));

  for (const char* bad : {"", "sym:", "sym:abc", "halfline", "set:[2,1]", "set:[0,2];[1,3]", "box:1", "sym:erfinv(1)"})
    CHECK_THROWS_AS(BinningSet::parse(bad), DomainError);
}

TEST_CASE("canonical string round trips exactly") {
  const BinningSet a = BinningSet::parse("set:[-1.2345678901234567,0.1];[2,inf]");
  const BinningSet b = BinningSet::parse(a.to_string());
  REQUIRE(a.intervals().size() == b.intervals().size());
  for (std::size_t i = 0; i < a.intervals().size(); ++i) {
    CHECK(a.intervals()[i].lo == b.intervals()[i].lo);
    CHECK(a.intervals()[i].hi == b.intervals()[i].hi);
  }
}

TEST_CASE("complement and sign") {
  const BinningSet a = BinningSet::symmetric(1.0);
  const BinningSet c = a.complement();
  for (double x : {-3.0, -0.5, 0.0, 0.9, 2.0}) CHECK(a.sign(x) == -c.sign(x));
}

TEST_CASE("binning angle") {
  CHECK(binning_angle(BinningSet::halfline(0.0)).theta == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(binning_angle(BinningSet::symmetric(erf_inverse(0.5))).cos_theta == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  for (double th : {0.05, 0.7, 1.9, 3.0}) {
    CHECK(binning_angle(BinningSet::halfline_for_angle(th)).theta == doctest::Approx(th).epsilon(1e-12));
    CHECK(binning_angle(BinningSet::symmetric_for_angle(th)).theta == doctest::Approx(th).epsilon(1e-12));
  }
  CHECK_THROWS_AS(binning_angle(BinningSet::full_line()), DegenerateBinningError);
  CHECK_THROWS_AS(binning_angle(BinningSet::halfline(12.0)), DegenerateBinningError);
  CHECK(std::cos(BinningAngle::golden().theta / 2) == doctest::Approx((std::sqrt(5.0) - 1) / 2).epsilon(1e-15));
}

TEST_CASE("overlaps against 50-digit quadrature") {
  const BinningSet a = BinningSet::parse("set:[-1.3,0.4];[0.9,2.6]");
  for (int m : {0, 1, 3, 8, 15})
    for (int n : {0, 2, 3, 8, 20}) {
      long double ref = 0.0L;
      for (const auto& iv : a.intervals()) ref += oracle::overlap(m, n, iv.lo, iv.hi);
      CHECK(std::abs(overlap_integral(m, n, a) - static_cast<double>(ref)) <= 1e-12);
    }
}

TEST_CASE("unbounded intervals use completeness") {
  const BinningSet a = BinningSet::halfline(0.35);
  const BinningSet c = a.complement();
  for (int m : {0, 2, 7})
    for (int n : {0, 2, 7, 30}) {
      const double both = overlap_integral(m, n, a) + overlap_integral(m, n, c);
      CHECK(both == doctest::Approx(m == n ? 1.0 : 0.0).scale(1.0).epsilon(1e-12));
    }
  // The vacuum overlap has a closed form.
  CHECK(overlap_integral(0, 0, a) == doctest::Approx(0.5 * std::erfc(0.35)).epsilon(1e-14));
}

TEST_CASE("vacuum overlaps agree with the matrix") {
  const BinningSet a = BinningSet::symmetric(0.8);
  const Eigen::MatrixXd m = overlap_matrix(a, 40);
  const Eigen::VectorXd v = vacuum_overlaps(a, 40);
  CHECK((m.row(0).transpose() - v).cwiseAbs().maxCoeff() <= 1e-13);
  CHECK((m - m.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("binned quadrature is a dichotomic observable in the limit") {
  const BinningSet a = BinningSet::halfline(0.0);
  const FockOperator q = binned_quadrature_operator(a, 60);
  CHECK(q.matrix()(0, 0).real() == doctest::Approx(binning_cos_theta(a)).scale(1.0).epsilon(1e-14));
  // <0|Q^2|0> = cos^2 + sin^2 (1 - discarded |Xi> weight) on the truncated space.
  const CMatrix sq = q.matrix() * q.matrix();
  const double w = xi_state(a, 60, 1.0).truncation_weight();
  CHECK(sq(0, 0).real() == doctest::Approx(1.0 - w).epsilon(1e-12));
}

TEST_CASE("xi state: orthogonal to vacuum, parity for symmetric binning") {
  const FockVector xi = xi_state(BinningSet::symmetric(erf_inverse(0.5)), 400, 0.05);
  CHECK(std::abs(xi[0]) == 0.0);
  CHECK(xi.norm() == doctest::Approx(1.0).epsilon(1e-14));
  for (int n = 1; n <= 400; n += 2) CHECK(std::abs(xi[n]) < 1e-14);
  CHECK(xi.truncation_weight() > 0.0);
  CHECK(xi.truncation_weight() < 0.05);
  CHECK_THROWS_AS(xi_state(BinningSet::halfline(0.0), 8), TruncationError);
}

TEST_CASE("restricted quadrature") {
  const QubitOperator q = restricted_quadrature(BinningAngle::from_theta(1.1));
  const auto ev = q.eigenvalues();
  CHECK(ev.minCoeff() == doctest::Approx(-1.0));
  CHECK(ev.maxCoeff() == doctest::Approx(1.0));
}

}
