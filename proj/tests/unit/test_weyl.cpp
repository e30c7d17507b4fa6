#include <doctest.h>

#include "helpers.hpp"
#include "weylscope/error.hpp"
#include "weylscope/weyl.hpp"

using namespace weylscope;

namespace {

double opnorm(const Eigen::MatrixXcd& m) { return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0); }

Eigen::MatrixXcd hermitian_calc(const Eigen::MatrixXcd& A, const std::function<cplx(double)>& f) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A);
  Eigen::VectorXcd d(A.rows());
  for (int i = 0; i < A.rows(); ++i) d[i] = f(es.eigenvalues()[i]);
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

GridFunction gauss_grid(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, int pts, const Eigen::VectorXd& c,
                        double w) {
  GridGeometry g = box_grid(lo, hi, pts);
  return GridFunction::sample(g, gaussian(c, w).value);
}

}  // namespace

TEST_CASE("plateau and bump") {
  CHECK(plateau(0.5, 1.0, 2.0) == 1.0);
  CHECK(plateau(2.5, 1.0, 2.0) == 0.0);
  CHECK(plateau(1.5, 1.0, 2.0) == doctest::Approx(0.5));
  double prev = 1.0;
  for (int i = 1; i < 100; ++i) {
    double v = plateau(1.0 + i / 100.0, 1.0, 2.0);
    CHECK(v <= prev);
    prev = v;
  }
  Eigen::Vector2d c(0.3, -0.1);
  CHECK(bump(c, c, 0.5) == doctest::Approx(1.0));
  CHECK(bump(c + Eigen::Vector2d(0.5, 0.0), c, 0.5) == 0.0);
  CHECK(bump(c + Eigen::Vector2d(0.2, 0.1), c, 0.5) > 0.0);
}

TEST_CASE("n = 1 reduces to the functional calculus") {
  CounterRng rng(31);
  auto s = rng.stream(0);
  Eigen::MatrixXcd H = 0.5 * wt::random_hermitian(3, s);
  MatrixTuple A({H});
  auto [lo, hi] = numerical_range_box(A);
  Eigen::VectorXd c = Eigen::VectorXd::Constant(1, 0.1);
  auto f = gauss_grid((lo.array() - 4.0).matrix(), (hi.array() + 4.0).matrix(), 1024, c, 0.6);
  auto r = weyl_apply(A, f);
  auto ref = hermitian_calc(H, [&](double x) { return std::exp(-(x - 0.1) * (x - 0.1) / 0.72); });
  CHECK(opnorm(r.value - ref) < 1e-8);
  CHECK(std::isfinite(r.error_estimate));
  CHECK(r.error_estimate < 1e-6);
  CHECK_FALSE(r.decay_warning);
}

TEST_CASE("commuting diagonal pair evaluates f at the joint eigenvalues") {
  auto A = tuples::diag_pair();
  Eigen::Vector2d c(0.4, 0.3);
  auto f = gauss_grid(Eigen::Vector2d(-3, -3), Eigen::Vector2d(4, 4), 128, c, 0.5);
  auto r = weyl_apply(A, f);
  auto fv = gaussian(c, 0.5).value;
  Eigen::MatrixXcd ref = Eigen::MatrixXcd::Zero(2, 2);
  ref(0, 0) = fv(Eigen::Vector2d(1, 0));
  ref(1, 1) = fv(Eigen::Vector2d(0, 1));
  CHECK(opnorm(r.value - ref) < 1e-8);
}

TEST_CASE("Pauli triple: Fourier route agrees with the surface formula") {
  auto A = tuples::pauli();
  Eigen::Vector3d c(0.2, -0.1, 0.3);
  auto f = gauss_grid(Eigen::Vector3d::Constant(-4.5), Eigen::Vector3d::Constant(4.5), 48, c, 0.7);
  auto r = weyl_apply(A, f);
  auto surf = weyl_pauli_surface(1.0, gaussian(c, 0.7));
  CHECK(opnorm(r.value - surf) < 1e-6);
}

TEST_CASE("surface formula for f = x_3 returns sigma_3") {
  TestFunction f;
  f.value = [](const Eigen::VectorXd& x) { return cplx(x[2]); };
  f.gradient = [](const Eigen::VectorXd&) { return Eigen::VectorXcd(Eigen::Vector3cd(0, 0, 1)); };
  Eigen::MatrixXcd s3 = tuples::pauli()[2];
  CHECK(opnorm(weyl_pauli_surface(1.0, f) - s3) < 1e-12);
  CHECK(opnorm(weyl_pauli_surface(2.0, f) - 2.0 * s3) < 1e-12);
}

TEST_CASE("Nelson sampling agrees with the surface formula") {
  Eigen::Vector3d c(0.3, 0.0, -0.2);
  auto f = gaussian(c, 0.8);
  auto surf = weyl_pauli_surface(1.0, f);
  auto mc = nelson_pauli_pairing(1.0, f, 100000, 7);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double d = std::max(std::abs(mc.value(i, j).real() - surf(i, j).real()),
                          std::abs(mc.value(i, j).imag() - surf(i, j).imag()));
      CHECK(d <= 3.0 * mc.standard_error(i, j) + 1e-12);
    }
}

TEST_CASE("translation covariance") {
  CounterRng rng(32);
  auto s = rng.stream(0);
  MatrixTuple A({0.4 * wt::random_hermitian(2, s), 0.4 * wt::random_hermitian(2, s)});
  Eigen::Vector2d a(0.7, -0.4);
  MatrixTuple B({A[0] + a[0] * Eigen::MatrixXcd::Identity(2, 2), A[1] + a[1] * Eigen::MatrixXcd::Identity(2, 2)});
  Eigen::Vector2d c(0.2, 0.1);
  auto fa = gauss_grid(Eigen::Vector2d(-4, -4), Eigen::Vector2d(4, 4), 128, c, 0.6);
  auto fb = gauss_grid(Eigen::Vector2d(-4, -4) + a, Eigen::Vector2d(4, 4) + a, 128, c + a, 0.6);
  CHECK(opnorm(weyl_apply(A, fa).value - weyl_apply(B, fb).value) < 1e-8);
}

TEST_CASE("unitary covariance") {
  CounterRng rng(33);
  auto s = rng.stream(0);
  MatrixTuple A({0.4 * wt::random_hermitian(3, s), 0.4 * wt::random_hermitian(3, s)});
  Eigen::MatrixXcd U = wt::random_unitary(3, s);
  MatrixTuple B({U.adjoint() * A[0] * U, U.adjoint() * A[1] * U});
  auto f = gauss_grid(Eigen::Vector2d(-4, -4), Eigen::Vector2d(4, 4), 128, Eigen::Vector2d(0.1, -0.2), 0.6);
  auto wa = weyl_apply(A, f).value, wb = weyl_apply(B, f).value;
  CHECK(opnorm(U.adjoint() * wa * U - wb) < 1e-8);
}

TEST_CASE("symmetrized monomials") {
  auto P = tuples::pauli_pair();
  CHECK(opnorm(symmetrized_monomial(P, {1, 1})) < 1e-14);
  CHECK(opnorm(symmetrized_monomial(P, {2, 0}) - Eigen::MatrixXcd::Identity(2, 2)) < 1e-14);
  CHECK(opnorm(symmetrized_monomial(P, {0, 0}) - Eigen::MatrixXcd::Identity(2, 2)) < 1e-14);
  CHECK(opnorm(symmetrized_monomial(P, {1, 0}) - P[0]) < 1e-14);
  CHECK_THROWS_AS(symmetrized_monomial(P, {13, 0}), DomainError);
  CHECK_THROWS_AS(symmetrized_monomial(P, {1}), DimensionError);
}

TEST_CASE("moments of the Weyl calculus match symmetrized monomials") {
  CounterRng rng(34);
  auto s = rng.stream(0);
  for (auto A : {tuples::pauli_pair(), tuples::diag_pair(),
                 MatrixTuple({0.5 * wt::random_hermitian(2, s), 0.5 * wt::random_hermitian(2, s)})}) {
    double R = A.norm();
    double L = R + 2.2;
    GridGeometry g = box_grid(Eigen::Vector2d(-L, -L), Eigen::Vector2d(L, L), 128);
    for (int k1 = 0; k1 <= 2; ++k1)
      for (int k2 = 0; k1 + k2 <= 2; ++k2) {
        auto f = GridFunction::sample(g, [&](const Eigen::VectorXd& x) {
          return cplx(plateau(x.norm(), R + 1.0, R + 2.0) * std::pow(x[0], k1) * std::pow(x[1], k2));
        });
        auto r = weyl_apply(A, f);
        CHECK(opnorm(r.value - symmetrized_monomial(A, {k1, k2})) < 1e-4);
      }
  }
}

TEST_CASE("preconditions") {
  auto f = gauss_grid(Eigen::Vector2d(-3, -3), Eigen::Vector2d(3, 3), 64, Eigen::Vector2d(0, 0), 0.5);
  auto f1 = gauss_grid(Eigen::VectorXd::Constant(1, -3), Eigen::VectorXd::Constant(1, 3), 64,
                       Eigen::VectorXd::Zero(1), 0.5);
  CHECK_THROWS_AS(weyl_apply(tuples::skew(), f1), RefusedError);
  auto small = gauss_grid(Eigen::Vector2d(-0.5, -0.5), Eigen::Vector2d(0.5, 0.5), 64, Eigen::Vector2d(0, 0), 0.1);
  CHECK_THROWS_AS(weyl_apply(tuples::pauli_pair(), small), DomainError);
  CHECK_THROWS_AS(weyl_apply(tuples::pauli(), f), DimensionError);
  auto wide = gauss_grid(Eigen::Vector2d(-1.5, -1.5), Eigen::Vector2d(1.5, 1.5), 64, Eigen::Vector2d(0, 0), 1.0);
  CHECK(weyl_apply(tuples::pauli_pair(), wide).decay_warning);
}

TEST_CASE("support probes for the Pauli pair") {
  auto A = tuples::pauli_pair();
  auto inside = support_probe(A, Eigen::Vector2d(0.2, 0.1), 0.3);
  CHECK(inside.value > 1e-3);
  auto outside = support_probe(A, Eigen::Vector2d(2.0, 0.0), 0.5);
  CHECK(outside.value < 1e-3);
}

TEST_CASE("support probes for the Pauli triple") {
  auto A = tuples::pauli();
  std::vector<Eigen::VectorXd> off = {Eigen::Vector3d(0.0, 0.0, 0.0), Eigen::Vector3d(1.8, 0.0, 0.0)};
  for (const auto& c : off) {
    double d = std::abs(c.norm() - 1.0);
    CHECK(support_probe(A, c, std::min(0.5, 0.9 * d)).value < 1e-3);
  }
  CHECK(support_probe(A, Eigen::Vector3d(0.0, 0.6, 0.8), 0.2).value > 1e-3);
}
