#include <doctest.h>

#include "helpers.hpp"
#include "weylscope/error.hpp"
#include "weylscope/numrange.hpp"
#include "weylscope/parallel.hpp"

using namespace weylscope;

TEST_CASE("Pauli samples lie on the unit sphere") {
  auto m = sample_range(tuples::pauli(), 20000, 1);
  CHECK(m.hermitian);
  for (Eigen::Index i = 0; i < m.points.rows(); ++i) CHECK(std::abs(m.points.row(i).norm() - 1.0) < 1e-12);
}

TEST_CASE("scalar tuples give a point mass") {
  MatrixTuple A({Eigen::MatrixXcd::Constant(1, 1, 0.25), Eigen::MatrixXcd::Constant(1, 1, -2.0)});
  auto m = sample_range(A, 100, 3);
  for (Eigen::Index i = 0; i < m.points.rows(); ++i) {
    CHECK(m.points(i, 0).real() == doctest::Approx(0.25));
    CHECK(m.points(i, 1).real() == doctest::Approx(-2.0));
  }
}

TEST_CASE("coordinate means estimate tr(A_j)/N") {
  CounterRng rng(21);
  auto s = rng.stream(0);
  MatrixTuple A({wt::random_hermitian(4, s), wt::random_hermitian(4, s)});
  const std::int64_t M = 100000;
  auto m = sample_range(A, M, 5);
  for (int j = 0; j < 2; ++j) {
    Eigen::VectorXd col = m.points.col(j).real();
    double mean = col.mean();
    double sd = std::sqrt((col.array() - mean).square().sum() / (M - 1));
    CHECK(std::abs(mean - A[j].trace().real() / 4.0) < 3.0 * sd / std::sqrt(double(M)));
  }
}

TEST_CASE("samples respect the support function") {
  auto A = tuples::example63();
  auto m = sample_range(A, 5000, 9);
  for (const auto& s : sphere_directions(2, 16)) {
    double h = support_function(A, s);
    for (Eigen::Index i = 0; i < m.points.rows(); ++i) CHECK(m.points.row(i).real().dot(s) <= h + 1e-10);
  }
}

TEST_CASE("first and second moments are unitarily invariant") {
  CounterRng rng(22);
  auto s = rng.stream(0);
  MatrixTuple A({wt::random_hermitian(3, s), wt::random_hermitian(3, s)});
  Eigen::MatrixXcd U = wt::random_unitary(3, s);
  MatrixTuple B({U.adjoint() * A[0] * U, U.adjoint() * A[1] * U});
  const std::int64_t M = 50000;
  auto ma = sample_range(A, M, 1), mb = sample_range(B, M, 2);
  for (int j = 0; j < 2; ++j) {
    Eigen::ArrayXd a = ma.points.col(j).real(), b = mb.points.col(j).real();
    for (int p = 1; p <= 2; ++p) {
      Eigen::ArrayXd ap = a.pow(p), bp = b.pow(p);
      double se = std::sqrt(((ap - ap.mean()).square().sum() + (bp - bp.mean()).square().sum()) / (M - 1) / M);
      CHECK(std::abs(ap.mean() - bp.mean()) < 3.0 * se);
    }
  }
}

TEST_CASE("sampling is independent of the thread count") {
  const int saved = thread_count();
  set_thread_count(1);
  auto a = sample_range(tuples::pauli(), 3000, 77);
  set_thread_count(3);
  auto b = sample_range(tuples::pauli(), 3000, 77);
  set_thread_count(saved);
  CHECK((a.points - b.points).norm() == 0.0);
}

TEST_CASE("non-hermitian tuples record complex values") {
  auto m = sample_range(tuples::nil_pair(), 100, 4);
  CHECK_FALSE(m.hermitian);
  CHECK(m.points.imag().norm() > 0.0);
}

TEST_CASE("Kolmogorov-Smirnov basics") {
  CHECK(ks_uniform({0.5}, 0.0, 1.0).statistic == doctest::Approx(0.5));
  CHECK(kolmogorov_p_value(0.0, 100) == doctest::Approx(1.0));
  CHECK(kolmogorov_p_value(0.5, 1000) < 1e-10);
  std::vector<double> bad(1000, 0.1);
  CHECK(ks_uniform(bad, 0.0, 1.0).p_value < 1e-10);
}

TEST_CASE("Pauli pushforward is uniform on the sphere") {
  const std::int64_t M = 100000;
  auto u = nu_pauli_uniformity(sample_range(tuples::pauli(), M, 2024));
  CHECK(u.height.statistic < 1.95 / std::sqrt(double(M)));
  CHECK(u.azimuth.statistic < 1.95 / std::sqrt(double(M)));
  MESSAGE("height p = " << u.height.p_value << ", azimuth p = " << u.azimuth.p_value);
}

TEST_CASE("sigma3 padded with zeros has a uniform third marginal") {
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(2, 2);
  auto p = tuples::pauli();
  auto m = sample_range(MatrixTuple({z, z, p[2]}), 50000, 8);
  std::vector<double> x3;
  for (Eigen::Index i = 0; i < m.points.rows(); ++i) x3.push_back(m.points(i, 2).real());
  CHECK(ks_uniform(x3, -1.0, 1.0).statistic < 1.95 / std::sqrt(50000.0));
}

TEST_CASE("single sample statistics are computed") {
  auto u = nu_pauli_uniformity(sample_range(tuples::pauli(), 1, 1));
  CHECK(u.height.statistic > 0.0);
}

TEST_CASE("pauli2 closed form against the quadrature oracle") {
  const Eigen::Vector2d a(2.0, 0.0);
  // Hand-evaluated integrals: roots 1/6 and 1/2 at x = (1.5, 0), and x = 0.
  CHECK(pauli2_E_oracle(a, Eigen::Vector2d(1.5, 0.0)) == doctest::Approx(M_PI / std::sqrt(3.0)).epsilon(1e-9));
  CHECK(pauli2_E_closed(a, Eigen::Vector2d(1.5, 0.0)) == doctest::Approx(M_PI / std::sqrt(3.0)).epsilon(1e-12));
  CHECK(pauli2_E_oracle(a, Eigen::Vector2d(0.0, 0.0)) == doctest::Approx(M_PI / 3.0 / std::sqrt(3.0)).epsilon(1e-9));
  CHECK(pauli2_E_closed(a, Eigen::Vector2d(0.0, 0.0)) == doctest::Approx(M_PI / 3.0 / std::sqrt(3.0)).epsilon(1e-12));
  // Empty positivity set.
  CHECK(pauli2_E_closed(a, Eigen::Vector2d(0.0, 5.0)) == 0.0);
  CHECK(pauli2_E_oracle(a, Eigen::Vector2d(0.0, 5.0)) == 0.0);
  CHECK_THROWS_AS(pauli2_E_closed(Eigen::Vector2d(0.5, 0.0), Eigen::Vector2d(0.0, 0.0)), DomainError);
  CHECK_THROWS_AS(pauli2_E_closed(a, Eigen::Vector2d(2.5, 0.0)), UnresolvedRegime);
}

TEST_CASE("pauli2 closed form agrees with the oracle on random resolved inputs") {
  auto s = CounterRng(64).stream(0);
  int checked = 0, pi_regime = 0;
  for (int t = 0; t < 5000 && checked < 200; ++t) {
    double ra = 1.1 + 2.0 * s.uniform(), ta = 2.0 * M_PI * s.uniform();
    Eigen::Vector2d a(ra * std::cos(ta), ra * std::sin(ta));
    Eigen::Vector2d x(4.0 * s.uniform() - 2.0, 4.0 * s.uniform() - 2.0);
    double closed;
    try {
      closed = pauli2_E_closed(a, x);
    } catch (const UnresolvedRegime&) {
      continue;
    }
    ++checked;
    if (x.norm() > 1.0 && closed > 0.0) ++pi_regime;
    CHECK(std::abs(closed - pauli2_E_oracle(a, x)) < 1e-6);
  }
  CHECK(checked == 200);
  CHECK(pi_regime > 0);
}
