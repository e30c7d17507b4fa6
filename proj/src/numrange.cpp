#include "weylscope/numrange.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "weylscope/error.hpp"
#include "weylscope/parallel.hpp"

namespace weylscope {

Eigen::VectorXcd random_unit_vector(int N, CounterRng::Stream& stream) {
  Eigen::VectorXcd h(N);
  for (int i = 0; i < N; ++i) {
    double re = stream.normal();
    double im = stream.normal();
    h[i] = cplx(re, im);
  }
  return h / h.norm();
}

Eigen::VectorXcd numerical_range_map(const MatrixTuple& A, const Eigen::VectorXcd& h) {
  Eigen::VectorXcd out(A.n());
  for (int j = 0; j < A.n(); ++j) out[j] = h.dot(A[j] * h);  // conj(h)^T A h
  return out;
}

EmpiricalMeasure sample_range(const MatrixTuple& A, std::int64_t M, std::uint64_t seed) {
  if (M < 1) throw DomainError("sample_range: M must be >= 1");
  EmpiricalMeasure m;
  m.seed = seed;
  m.N = A.N();
  m.M = M;
  m.hermitian = A.hermitian();
  m.points.resize(M, A.n());
  CounterRng rng(seed);
  parallel_for(static_cast<std::size_t>(M), [&](std::size_t i) {
    auto stream = rng.stream(i);
    Eigen::VectorXcd h = random_unit_vector(A.N(), stream);
    Eigen::VectorXcd v = numerical_range_map(A, h);
    if (m.hermitian) v = v.real().cast<cplx>();
    m.points.row(static_cast<Eigen::Index>(i)) = v.transpose();
  });
  return m;
}

double kolmogorov_p_value(double statistic, std::int64_t M) {
  double sq = std::sqrt(static_cast<double>(M));
  double lambda = (sq + 0.12 + 0.11 / sq) * statistic;
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

KsResult ks_uniform(std::vector<double> samples, double lo, double hi) {
  KsResult r;
  if (samples.empty()) return r;
  std::sort(samples.begin(), samples.end());
  const double M = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double F = std::clamp((samples[i] - lo) / (hi - lo), 0.0, 1.0);
    d = std::max({d, (i + 1) / M - F, F - i / M});
  }
  r.statistic = d;
  r.p_value = kolmogorov_p_value(d, static_cast<std::int64_t>(samples.size()));
  return r;
}

PauliUniformity nu_pauli_uniformity(const EmpiricalMeasure& m) {
  if (m.points.cols() != 3) throw DimensionError("nu_pauli_uniformity expects samples of a triple");
  std::vector<double> z, az;
  z.reserve(static_cast<std::size_t>(m.points.rows()));
  az.reserve(static_cast<std::size_t>(m.points.rows()));
  for (Eigen::Index i = 0; i < m.points.rows(); ++i) {
    z.push_back(m.points(i, 2).real());
    double a = std::atan2(m.points(i, 1).real(), m.points(i, 0).real());
    az.push_back(a < 0.0 ? a + 2.0 * M_PI : a);
  }
  return {ks_uniform(std::move(z), -1.0, 1.0), ks_uniform(std::move(az), 0.0, 2.0 * M_PI)};
}

namespace {

struct Pauli2Quadratic {
  // p(y) = y^2 - |x - (1-y) a|^2 = -(alpha y^2 + beta y + gamma)
  double a2, ax, axa, xa2, disc;
};

Pauli2Quadratic pauli2_quadratic(const Eigen::Vector2d& a, const Eigen::Vector2d& x) {
  Pauli2Quadratic q;
  q.a2 = a.squaredNorm();
  q.ax = a.dot(x);
  q.axa = a.dot(x - a);
  q.xa2 = (x - a).squaredNorm();
  q.disc = q.axa * q.axa - (q.a2 - 1.0) * q.xa2;
  return q;
}

}  // namespace

double pauli2_E_closed(const Eigen::Vector2d& a, const Eigen::Vector2d& x) {
  if (!(a.norm() > 1.0)) throw DomainError("pauli2_E_closed: need |a| > 1");
  const Pauli2Quadratic q = pauli2_quadratic(a, x);
  const double k = 1.0 / std::sqrt(q.a2 - 1.0);
  const double r = x.norm();
  if (r <= 1.0) {
    if (!(q.disc > 0.0)) throw UnresolvedRegime("pauli2_E_closed: degenerate discriminant inside the unit disk");
    double s = std::clamp((q.ax - 1.0) / std::sqrt(q.disc), -1.0, 1.0);
    return k * (0.5 * M_PI + std::asin(s));
  }
  if (q.disc < 0.0) return 0.0;
  if (std::abs(q.axa) > q.a2 - 1.0) return 0.0;
  if (q.axa < 0.0 && q.disc > 0.0 && std::abs(q.axa) < q.a2 - 1.0) return k * M_PI;
  throw UnresolvedRegime("pauli2_E_closed: point outside the regimes with a closed form");
}

double pauli2_E_oracle(const Eigen::Vector2d& a, const Eigen::Vector2d& x) {
  if (!(a.norm() > 1.0)) throw DomainError("pauli2_E_oracle: need |a| > 1");
  // y^2 - |x - (1-y) a|^2 = -(alpha y^2 + beta y + gamma) = alpha (y - r1)(r2 - y).
  const Pauli2Quadratic q = pauli2_quadratic(a, x);
  const double alpha = q.a2 - 1.0, beta = 2.0 * q.axa, gamma = q.xa2;
  const double D = beta * beta - 4.0 * alpha * gamma;
  if (D <= 0.0) return 0.0;
  const double sq = std::sqrt(D);
  const double qq = -0.5 * (beta + std::copysign(sq, beta));
  double r1 = qq / alpha, r2 = gamma / qq;
  if (r1 > r2) std::swap(r1, r2);
  const double lo = std::max(0.0, r1), hi = std::min(1.0, r2);
  if (!(hi > lo)) return 0.0;

  using boost::math::quadrature::gauss_kronrod;
  auto integrand = [&](double y) {
    double v = alpha * (y - r1) * (r2 - y);
    return v > 0.0 ? 1.0 / std::sqrt(v) : 0.0;
  };
  // y = root + u^2 near a root endpoint removes the inverse square root.
  auto near_root = [&](double u) { return 2.0 / std::sqrt(alpha * (r2 - r1 - u * u)); };
  const double mid = 0.5 * (lo + hi);
  double err = 0.0, total = 0.0;
  if (r1 >= 0.0)
    total += gauss_kronrod<double, 31>::integrate(near_root, 0.0, std::sqrt(mid - r1), 20, 1e-14, &err);
  else
    total += gauss_kronrod<double, 31>::integrate(integrand, lo, mid, 20, 1e-14, &err);
  if (r2 <= 1.0)
    total += gauss_kronrod<double, 31>::integrate(near_root, 0.0, std::sqrt(r2 - mid), 20, 1e-14, &err);
  else
    total += gauss_kronrod<double, 31>::integrate(integrand, mid, hi, 20, 1e-14, &err);
  return total;
}

}  // namespace weylscope
