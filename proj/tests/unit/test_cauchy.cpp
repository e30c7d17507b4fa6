#include <doctest.h>

#include "helpers.hpp"
#include "weylscope/cauchy.hpp"
#include "weylscope/error.hpp"
#include "weylscope/parallel.hpp"

using namespace weylscope;

namespace {

double block_diff(const CliffordMatrix& a, const CliffordMatrix& b) {
  double d = 0.0;
  for (Mask s = 0; s < a.size(); ++s) d = std::max(d, (a[s] - b[s]).cwiseAbs().maxCoeff());
  return d;
}

// sum over joint eigenvalues of E(x - lambda) P_lambda for commuting hermitian tuples.
CliffordMatrix spectral_sum(const std::vector<Eigen::VectorXd>& lambdas, const std::vector<Eigen::MatrixXcd>& projs,
                            const PairedVector& x) {
  const int n = x.dim();
  const int N = static_cast<int>(projs.front().rows());
  CliffordMatrix out(n, N);
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    CliffordElement E = cauchy_kernel_E(PairedVector{x.x0, x.xvec - lambdas[i]});
    for (Mask s = 0; s < (1u << n); ++s) out[s] += E[s] * projs[i];
  }
  return out;
}

}  // namespace

TEST_CASE("zero tuple reproduces the Cauchy kernel") {
  for (int n : {1, 2, 3}) {
    MatrixTuple Z(std::vector<Eigen::MatrixXcd>(static_cast<std::size_t>(n), Eigen::MatrixXcd::Zero(1, 1)));
    for (double x0 : {-0.7, 0.4}) {
      PairedVector x{x0, Eigen::VectorXd::LinSpaced(n, 0.3, 0.9)};
      auto G = plane_wave_kernel(Z, x, default_sphere_rule(n, 1));
      auto E = cauchy_kernel_E(x);
      for (Mask s = 0; s < (1u << n); ++s) CHECK(std::abs(G[s](0, 0) - E[s]) < 1e-12);
    }
  }
}

TEST_CASE("single hermitian matrix: kernel is the spectral sum") {
  CounterRng rng(41);
  auto st = rng.stream(0);
  Eigen::MatrixXcd H = wt::random_hermitian(3, st);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  std::vector<Eigen::VectorXd> lam;
  std::vector<Eigen::MatrixXcd> proj;
  for (int i = 0; i < 3; ++i) {
    lam.push_back(Eigen::VectorXd::Constant(1, es.eigenvalues()[i]));
    proj.push_back(es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint());
  }
  PairedVector x{0.3, Eigen::VectorXd::Constant(1, 0.2)};
  CHECK(block_diff(plane_wave_kernel(MatrixTuple({H}), x, point_pair_rule()), spectral_sum(lam, proj, x)) < 1e-12);
}

TEST_CASE("commuting diagonal pair: kernel is the spectral sum") {
  auto A = tuples::diag_pair();
  std::vector<Eigen::VectorXd> lam = {Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)};
  Eigen::MatrixXcd P0 = Eigen::MatrixXcd::Zero(2, 2), P1 = Eigen::MatrixXcd::Zero(2, 2);
  P0(0, 0) = 1.0;
  P1(1, 1) = 1.0;
  for (double x0 : {0.5, -0.3}) {
    PairedVector x{x0, Eigen::Vector2d(0.2, 0.7)};
    auto r = plane_wave_kernel_estimated(A, x, 1);
    double d = block_diff(r.value, spectral_sum(lam, {P0, P1}, x));
    CHECK(d < 1e-6);
    CHECK(r.quad_error < 1e-6);
  }
}

TEST_CASE("prefactor parts add up to the full kernel") {
  CounterRng rng(42);
  auto st = rng.stream(0);
  MatrixTuple A({wt::random_hermitian(2, st), wt::random_hermitian(2, st), wt::random_hermitian(2, st)});
  PlaneWaveEvaluator ev(A, default_sphere_rule(3, 0));
  PairedVector x{0.6, Eigen::Vector3d(0.1, -0.2, 0.3)};
  auto full = ev.kernel(x), a = ev.kernel(x, Prefactor::e0_only), b = ev.kernel(x, Prefactor::is_only);
  CHECK(block_diff(full, a + b) < 1e-12 * (1.0 + full.norm()));
}

TEST_CASE("operator kernel is monogenic in x") {
  CounterRng rng(43);
  auto st = rng.stream(0);
  MatrixTuple A({0.5 * wt::random_hermitian(2, st), 0.5 * wt::random_hermitian(2, st)});
  PlaneWaveEvaluator ev(A, circle_rule(2048));
  auto f = [&](const PairedVector& y) { return ev.kernel(y); };
  PairedVector x{0.8, Eigen::Vector2d(0.2, -0.1)};
  double prev = 0.0;
  for (double h : {0.04, 0.02, 0.01}) {
    double r = dirac_residual(f, x, h).norm();
    if (prev > 0.0) {
      CHECK(prev / r > 3.5);
      CHECK(prev / r < 4.5);
    }
    prev = r;
  }
}

TEST_CASE("kernel rejects x0 = 0 and non-hyperbolic tuples") {
  PairedVector x{0.0, Eigen::Vector2d(0.1, 0.1)};
  CHECK_THROWS_AS(plane_wave_kernel(tuples::pauli_pair(), x, circle_rule(64)), DomainError);
  PairedVector y{0.5, Eigen::VectorXd::Constant(1, 0.1)};
  CHECK_THROWS_AS(plane_wave_kernel(tuples::skew(), y, point_pair_rule()), RefusedError);
}

TEST_CASE("classification of synthetic jump sequences") {
  ScanOptions o;
  std::vector<double> eps = o.eps, flat, grow, decay, zero;
  for (double e : eps) {
    flat.push_back(0.3 + 0.1 * e);
    grow.push_back(1.0 / e);
    decay.push_back(e * e);
    zero.push_back(0.0);
  }
  CHECK(classify_jumps(eps, flat, o) == JumpClass::convergent_density);
  CHECK(classify_jumps(eps, grow, o) == JumpClass::divergent);
  CHECK(classify_jumps(eps, decay, o) == JumpClass::vanishing);
  CHECK(classify_jumps(eps, zero, o) == JumpClass::vanishing);
}

TEST_CASE("extrapolation is exact for quadratics in eps") {
  std::vector<double> eps = {0.2, 0.1, 0.05};
  std::vector<CliffordMatrix> jumps;
  for (double e : eps) {
    CliffordMatrix J(2, 1);
    for (Mask s = 0; s < 4; ++s) J[s](0, 0) = cplx(1.0 + s, -2.0) + cplx(0.5, s) * e - 3.0 * e * e;
    jumps.push_back(J);
  }
  auto J0 = extrapolate_jump(eps, jumps);
  for (Mask s = 0; s < 4; ++s) CHECK(std::abs(J0[s](0, 0) - cplx(1.0 + s, -2.0)) < 1e-12);
}

TEST_CASE("Pauli pair jump density inside the disk") {
  auto P = tuples::pauli_pair();
  for (double r : {0.0, 0.5}) {
    auto J = jump_density(P, Eigen::Vector2d(r, 0.0));
    REQUIRE(J.classification == JumpClass::convergent_density);
    REQUIRE(J.extrapolated_density.has_value());
    double expect = -1.0 / (2.0 * M_PI * std::pow(1.0 - r * r, 1.5));
    for (int i = 0; i < 2; ++i) CHECK(std::abs((*J.extrapolated_density)(i, i) - expect) < 1e-3 * std::abs(expect));
  }
}

TEST_CASE("Pauli pair jump density is rotation covariant") {
  // exp(-i t sigma_3 / 2) rotates (sigma_1, sigma_2) by angle t.
  auto P = tuples::pauli_pair();
  const double t = 0.9;
  Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(2, 2);
  U(0, 0) = std::exp(cplx(0.0, -t / 2.0));
  U(1, 1) = std::exp(cplx(0.0, t / 2.0));
  Eigen::Vector2d x(0.5, 0.2), y(std::cos(t) * x[0] - std::sin(t) * x[1], std::sin(t) * x[0] + std::cos(t) * x[1]);
  auto dx = *jump_density(P, x).extrapolated_density, dy = *jump_density(P, y).extrapolated_density;
  CHECK((U * dx * U.adjoint() - dy).norm() < 1e-4 * dy.norm());
}

TEST_CASE("Pauli pair classification off the disk") {
  auto P = tuples::pauli_pair();
  CHECK(jump_density(P, Eigen::Vector2d(1.5, 0.0)).classification == JumpClass::vanishing);
  CHECK(jump_density(P, Eigen::Vector2d(0.0, 1.0)).classification == JumpClass::divergent);
}

TEST_CASE("Pauli triple classification along a ray") {
  auto T = tuples::pauli();
  CHECK(jump_density(T, Eigen::Vector3d(0.3, 0, 0)).classification == JumpClass::vanishing);
  CHECK(jump_density(T, Eigen::Vector3d(1.0, 0, 0)).classification == JumpClass::divergent);
  CHECK(jump_density(T, Eigen::Vector3d(1.6, 0, 0)).classification == JumpClass::vanishing);
}

TEST_CASE("batched jumps match single jumps and ignore the thread count") {
  auto P = tuples::pauli_pair();
  PlaneWaveEvaluator ev(P, circle_rule(1024));
  std::vector<Eigen::VectorXd> pts;
  for (int i = 0; i < 70; ++i) pts.push_back(Eigen::Vector2d(-1.2 + 0.035 * i, 0.3 - 0.01 * i));
  int saved = thread_count();
  set_thread_count(1);
  auto one = ev.jumps(pts, 0.1);
  set_thread_count(4);
  auto four = ev.jumps(pts, 0.1);
  set_thread_count(saved);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(block_diff(one[i], four[i]) == 0.0);
    CHECK(block_diff(one[i], ev.jump(pts[i], 0.1)) < 1e-12 * (1.0 + one[i].norm()));
  }
}

TEST_CASE("singular scan agrees with pointwise densities") {
  auto P = tuples::pauli_pair();
  std::vector<Eigen::VectorXd> pts = {Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(1.5, 0.0), Eigen::Vector2d(0.0, 1.0)};
  auto rows = singular_scan(P, pts);
  CHECK(rows[0].classification == JumpClass::convergent_density);
  CHECK(rows[0].extrapolated_density_norm == doctest::Approx(1.0 / (2.0 * M_PI)).epsilon(1e-3));
  CHECK(rows[1].classification == JumpClass::vanishing);
  CHECK(std::isnan(rows[1].extrapolated_density_norm));
  CHECK(rows[2].classification == JumpClass::divergent);
}

TEST_CASE("jump density pairing matches the Weyl calculus") {
  auto A = tuples::pauli_pair();
  auto g = box_grid(Eigen::Vector2d::Constant(-1.5), Eigen::Vector2d::Constant(1.5), 64);
  auto cc = jump_vs_weyl_crosscheck(A, GridFunction::sample(g, gaussian(Eigen::Vector2d(0.3, -0.2), 0.1).value));
  CHECK(cc.support_points > 0);
  CHECK(cc.discrepancy < 1e-4 * (1.0 + cc.rhs.norm()));
  CHECK_THROWS_AS(jump_vs_weyl_crosscheck(A, GridFunction::sample(g, gaussian(Eigen::Vector2d(0, 0), 0.2).value)),
                  RefusedError);
}
