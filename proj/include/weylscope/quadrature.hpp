#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>

namespace weylscope {

// Nodes on S^{n-1} (columns of `nodes`) with weights summing to its area.
struct SphericalQuadrature {
  int n = 0;
  Eigen::MatrixXd nodes;
  Eigen::VectorXd weights;
  int exactness = 0;  // polynomial degree integrated exactly
  std::string kind;

  int size() const { return static_cast<int>(weights.size()); }
};

// Gauss-Legendre nodes and weights on [-1, 1].
std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int m);

// n = 1: the two points +-1 with counting measure.
SphericalQuadrature point_pair_rule();

// n = 2: M equispaced points on the unit circle.
SphericalQuadrature circle_rule(int M);

// n = 3: Gauss-Legendre in cos(theta) times uniform azimuth, polar axis `axis`.
SphericalQuadrature product_sphere_rule(int polar, int azimuth, const Eigen::Vector3d& axis = Eigen::Vector3d::UnitZ());

// Default rule for dimension n; `level` doubles the node count per step.
SphericalQuadrature default_sphere_rule(int n, int level = 0);

}  // namespace weylscope
