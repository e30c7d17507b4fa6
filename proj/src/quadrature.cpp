#include "weylscope/quadrature.hpp"

#include <cmath>

#include "weylscope/error.hpp"

namespace weylscope {

std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int m) {
  if (m < 1) throw DomainError("gauss_legendre: need at least one node");
  Eigen::VectorXd x(m), w(m);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= m; ++k) {
        double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (m == 1) p0 = 1.0;
      dp = m * (z * p1 - p0) / (z * z - 1.0);
      double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = -z;
    x[m - 1 - i] = z;
    w[i] = w[m - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

SphericalQuadrature point_pair_rule() {
  SphericalQuadrature q;
  q.n = 1;
  q.nodes.resize(1, 2);
  q.nodes << 1.0, -1.0;
  q.weights = Eigen::VectorXd::Ones(2);
  q.exactness = 1000;
  q.kind = "point-pair";
  return q;
}

SphericalQuadrature circle_rule(int M) {
  if (M < 1) throw DomainError("circle_rule: need at least one node");
  SphericalQuadrature q;
  q.n = 2;
  q.nodes.resize(2, M);
  for (int k = 0; k < M; ++k) {
    double t = 2.0 * M_PI * k / M;
    q.nodes(0, k) = std::cos(t);
    q.nodes(1, k) = std::sin(t);
  }
  q.weights = Eigen::VectorXd::Constant(M, 2.0 * M_PI / M);
  q.exactness = M - 1;
  q.kind = "circle-trapezoid";
  return q;
}

SphericalQuadrature product_sphere_rule(int polar, int azimuth, const Eigen::Vector3d& axis) {
  if (polar < 1 || azimuth < 1) throw DomainError("product_sphere_rule: need positive node counts");
  Eigen::Vector3d e3 = axis.normalized();
  Eigen::Vector3d helper = std::abs(e3.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  Eigen::Vector3d e1 = (helper - helper.dot(e3) * e3).normalized();
  Eigen::Vector3d e2 = e3.cross(e1);
  auto [u, wu] = gauss_legendre(polar);
  SphericalQuadrature q;
  q.n = 3;
  q.nodes.resize(3, polar * azimuth);
  q.weights.resize(polar * azimuth);
  int k = 0;
  for (int i = 0; i < polar; ++i) {
    double st = std::sqrt(std::max(0.0, 1.0 - u[i] * u[i]));
    for (int j = 0; j < azimuth; ++j, ++k) {
      double ph = 2.0 * M_PI * (j + 0.5) / azimuth;
      q.nodes.col(k) = st * std::cos(ph) * e1 + st * std::sin(ph) * e2 + u[i] * e3;
      q.weights[k] = wu[i] * 2.0 * M_PI / azimuth;
    }
  }
  q.exactness = std::min(2 * polar - 1, azimuth - 1);
  q.kind = "gauss-legendre-x-uniform";
  return q;
}

SphericalQuadrature default_sphere_rule(int n, int level) {
  const int f = 1 << level;
  switch (n) {
    case 1: return point_pair_rule();
    case 2: return circle_rule(512 * f);
    case 3: return product_sphere_rule(48 * f, 96 * f);
    default: throw DimensionError("no spherical rule for n > 3");
  }
}

}  // namespace weylscope
