#include "weylscope/pencil.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "weylscope/error.hpp"
#include "weylscope/rng.hpp"

namespace weylscope {

namespace {

constexpr double kHermitianTol = 1e-12;

double op_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0);
}

}  // namespace

MatrixTuple::MatrixTuple(std::vector<Eigen::MatrixXcd> matrices, std::string name)
    : mats_(std::move(matrices)), name_(std::move(name)) {
  if (mats_.empty()) throw DimensionError("matrix tuple must contain at least one matrix");
  N_ = static_cast<int>(mats_[0].rows());
  if (N_ < 1) throw DimensionError("matrices must be at least 1x1");
  hermitian_ = true;
  for (const auto& m : mats_) {
    if (m.rows() != N_ || m.cols() != N_) throw DimensionError("all matrices in a tuple must be N x N with the same N");
    double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol * scale) hermitian_ = false;
  }
}

double MatrixTuple::norm() const {
  double acc = 0.0;
  for (const auto& m : mats_) {
    double v = op_norm(m);
    acc += v * v;
  }
  return std::sqrt(acc);
}

Eigen::MatrixXcd pencil_eval(const MatrixTuple& A, const Eigen::VectorXd& xi) {
  if (xi.size() != A.n()) throw DimensionError("pencil_eval: direction length does not match tuple length");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(A.N(), A.N());
  for (int j = 0; j < A.n(); ++j) out += xi[j] * A[j];
  return out;
}

Eigen::MatrixXcd pencil_eval(const MatrixTuple& A, const Eigen::VectorXcd& xi) {
  if (xi.size() != A.n()) throw DimensionError("pencil_eval: direction length does not match tuple length");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(A.N(), A.N());
  for (int j = 0; j < A.n(); ++j) out += xi[j] * A[j];
  return out;
}

cplx det_poly_eval(const MatrixTuple& A, const Eigen::VectorXcd& zeta) {
  if (zeta.size() != A.n() + 1) throw DimensionError("det_poly_eval: expected n+1 coordinates");
  Eigen::MatrixXcd m = pencil_eval(A, Eigen::VectorXcd(zeta.tail(A.n())));
  m.diagonal().array() += zeta[0];
  return m.partialPivLu().determinant();
}

double det_poly_eval(const MatrixTuple& A, const Eigen::VectorXd& zeta) {
  return det_poly_eval(A, Eigen::VectorXcd(zeta.cast<cplx>())).real();
}

const char* to_string(Hyperbolicity h) {
  switch (h) {
    case Hyperbolicity::hyperbolic: return "hyperbolic";
    case Hyperbolicity::not_hyperbolic: return "not_hyperbolic";
    case Hyperbolicity::inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::vector<Eigen::VectorXd> sphere_directions(int n, int count) {
  std::vector<Eigen::VectorXd> dirs;
  if (n < 1 || count < 1) return dirs;
  dirs.reserve(static_cast<std::size_t>(count));
  if (n == 1) {
    for (int k = 0; k < count; ++k) dirs.push_back(Eigen::VectorXd::Constant(1, k % 2 == 0 ? 1.0 : -1.0));
  } else if (n == 2) {
    for (int k = 0; k < count; ++k) {
      double t = 2.0 * M_PI * k / count;
      dirs.push_back((Eigen::VectorXd(2) << std::cos(t), std::sin(t)).finished());
    }
  } else if (n == 3) {
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < count; ++k) {
      double z = 1.0 - (2.0 * k + 1.0) / count;
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      double phi = golden * k;
      dirs.push_back((Eigen::VectorXd(3) << r * std::cos(phi), r * std::sin(phi), z).finished());
    }
  } else {
    CounterRng rng(0x5eed5eedULL);
    for (int k = 0; k < count; ++k) {
      auto stream = rng.stream(static_cast<std::uint64_t>(k));
      Eigen::VectorXd v(n);
      for (int j = 0; j < n; ++j) v[j] = stream.normal();
      dirs.push_back(v / v.norm());
    }
  }
  return dirs;
}

HyperbolicityVerdict hyperbolicity_check(const MatrixTuple& A, int direction_count, double tol) {
  if (direction_count < 1) throw DomainError("hyperbolicity_check: direction_count must be >= 1");
  if (!(tol > 0.0)) throw DomainError("hyperbolicity_check: tol must be positive");
  HyperbolicityVerdict v;
  v.worst_direction = Eigen::VectorXd::Zero(A.n());
  v.worst_direction[0] = 1.0;
  if (A.hermitian()) {
    v.verdict = Hyperbolicity::hyperbolic;
    return v;
  }
  auto dirs = sphere_directions(A.n(), direction_count);
  for (const auto& s : dirs) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(pencil_eval(A, s), false);
    double worst = es.eigenvalues().imag().cwiseAbs().maxCoeff();
    if (worst > v.worst_imag) {
      v.worst_imag = worst;
      v.worst_direction = s;
    }
  }
  v.directions_tested = static_cast<int>(dirs.size());
  v.verdict = v.worst_imag > tol ? Hyperbolicity::not_hyperbolic : Hyperbolicity::inconclusive;
  return v;
}

void require_hyperbolic(const MatrixTuple& A) {
  if (A.hermitian()) return;
  auto v = hyperbolicity_check(A);
  if (v.verdict == Hyperbolicity::not_hyperbolic)
    throw RefusedError("tuple is not hyperbolic: eigenvalue with |Im| = " + std::to_string(v.worst_imag) +
                       " found");
}

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  Eigen::VectorXd ev = es.eigenvalues().reverse();
  return ev;
}

double support_function(const MatrixTuple& A, const Eigen::VectorXd& s) {
  if (!A.hermitian()) throw DomainError("support_function requires a hermitian tuple");
  return hermitian_eigenvalues(pencil_eval(A, s))[0];
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> numerical_range_box(const MatrixTuple& A) {
  Eigen::VectorXd lo(A.n()), hi(A.n());
  for (int j = 0; j < A.n(); ++j) {
    Eigen::MatrixXcd h = 0.5 * (A[j] + A[j].adjoint());
    Eigen::VectorXd ev = hermitian_eigenvalues(h);
    hi[j] = ev[0];
    lo[j] = ev[ev.size() - 1];
  }
  return {lo, hi};
}

std::vector<double> line_polynomial(const MatrixTuple& A, const Eigen::VectorXd& xi, const Eigen::VectorXd& zeta) {
  if (xi.size() != A.n() + 1 || zeta.size() != A.n() + 1)
    throw DimensionError("localisation: expected (n+1)-vectors");
  const int N = A.N();
  const double scale = 1.0 / (1.0 + xi.norm());
  // Fit q(tau) = P(xi + tau*scale*zeta) at Chebyshev nodes, then undo the scaling.
  Eigen::MatrixXd V(N + 1, N + 1);
  Eigen::VectorXd rhs(N + 1);
  for (int k = 0; k <= N; ++k) {
    double tau = std::cos(M_PI * (2.0 * k + 1.0) / (2.0 * (N + 1)));
    double p = 1.0;
    for (int j = 0; j <= N; ++j) {
      V(k, j) = p;
      p *= tau;
    }
    rhs[k] = det_poly_eval(A, Eigen::VectorXd(xi + tau * scale * zeta));
  }
  Eigen::VectorXd d = V.partialPivLu().solve(rhs);
  std::vector<double> c(static_cast<std::size_t>(N + 1));
  for (int j = 0; j <= N; ++j) c[static_cast<std::size_t>(j)] = d[j];
  return c;  // scaled coefficients; caller rescales
}

namespace {

LocalisationValue lowest_term(const MatrixTuple& A, const Eigen::VectorXd& xi, const Eigen::VectorXd& zeta) {
  std::vector<double> d = line_polynomial(A, xi, zeta);
  double l1 = 0.0;
  for (double v : d) l1 += std::abs(v);
  if (!(l1 > 0.0)) throw NumericalError("localisation: P^A vanishes identically along the line");
  const double scale = 1.0 / (1.0 + xi.norm());
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (std::abs(d[k]) > kLocalisationEps * l1) {
      return {static_cast<int>(k), d[k] / std::pow(scale, static_cast<double>(k))};
    }
  }
  throw NumericalError("localisation: P^A vanishes identically along the line");
}

}  // namespace

LocalisationValue localisation(const MatrixTuple& A, const Eigen::VectorXd& xi, const Eigen::VectorXd& zeta) {
  return lowest_term(A, xi, zeta);
}

Localisation::Localisation(MatrixTuple A, Eigen::VectorXd xi) : A_(std::move(A)), xi_(std::move(xi)) {
  // The multiplicity is the smallest order seen along a few generic directions.
  CounterRng rng(0x10ca115eULL);
  mu_ = A_.N();
  for (int trial = 0; trial < 4; ++trial) {
    auto stream = rng.stream(static_cast<std::uint64_t>(trial));
    Eigen::VectorXd zeta(xi_.size());
    for (int j = 0; j < zeta.size(); ++j) zeta[j] = stream.normal();
    mu_ = std::min(mu_, lowest_term(A_, xi_, zeta).mu);
  }
}

double Localisation::operator()(const Eigen::VectorXd& zeta) const {
  std::vector<double> d = line_polynomial(A_, xi_, zeta);
  const double scale = 1.0 / (1.0 + xi_.norm());
  return d[static_cast<std::size_t>(mu_)] / std::pow(scale, static_cast<double>(mu_));
}

namespace tuples {

namespace {
const cplx I(0.0, 1.0);
}

MatrixTuple pauli() {
  Eigen::MatrixXcd s1(2, 2), s2(2, 2), s3(2, 2);
  s1 << 0, 1, 1, 0;
  s2 << 0, -I, I, 0;
  s3 << 1, 0, 0, -1;
  return MatrixTuple({s1, s2, s3}, "pauli");
}

MatrixTuple pauli_pair() {
  auto p = pauli();
  return MatrixTuple({p[0], p[1]}, "pauli_pair");
}

MatrixTuple diag_pair() {
  Eigen::MatrixXcd a(2, 2), b(2, 2);
  a << 1, 0, 0, 0;
  b << 0, 0, 0, 1;
  return MatrixTuple({a, b}, "diagpair");
}

MatrixTuple nil_pair() {
  Eigen::MatrixXcd a(2, 2), b(2, 2);
  a << 0, 1, 0, 0;
  b << 0, 1, 0, 1;
  return MatrixTuple({a, b}, "nilpair");
}

MatrixTuple example63() {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(3, 3), b = Eigen::MatrixXcd::Zero(3, 3);
  a.diagonal() << 1, -1, -1;
  b << 0, 0, 1, 0, 0, 1, 1, 1, 0;
  return MatrixTuple({a, b}, "example63");
}

MatrixTuple pauli2(double a1, double a2) {
  auto p = pauli();
  Eigen::MatrixXcd m1 = Eigen::MatrixXcd::Zero(3, 3), m2 = Eigen::MatrixXcd::Zero(3, 3);
  m1(0, 0) = a1;
  m2(0, 0) = a2;
  m1.bottomRightCorner(2, 2) = p[0];
  m2.bottomRightCorner(2, 2) = p[1];
  return MatrixTuple({m1, m2}, "pauli2");
}

MatrixTuple skew() {
  Eigen::MatrixXcd a(2, 2);
  a << 0, 1, -1, 0;
  return MatrixTuple({a}, "skew");
}

}  // namespace tuples

}  // namespace weylscope
