#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "weylscope/clifford.hpp"
#include "weylscope/pencil.hpp"
#include "weylscope/quadrature.hpp"
#include "weylscope/weyl.hpp"

namespace weylscope {

// Which Clifford prefactor multiplies (B - x0 s)^{-n} in the plane-wave integrand.
enum class Prefactor { full, e0_only, is_only };

// Plane-wave integral over S^{n-1} for the operator Cauchy kernel G_x(A).
class PlaneWaveEvaluator {
 public:
  PlaneWaveEvaluator(const MatrixTuple& A, SphericalQuadrature quad);

  const SphericalQuadrature& quadrature() const { return quad_; }

  // G_x(A) for x0 != 0.
  CliffordMatrix kernel(const PairedVector& x, Prefactor pre = Prefactor::full) const;

  // G_{x + eps e0}(A) - G_{x - eps e0}(A).
  CliffordMatrix jump(const Eigen::VectorXd& xvec, double eps) const;

  // Batched jumps; points are processed in fixed blocks so results do not depend on threads.
  std::vector<CliffordMatrix> jumps(const std::vector<Eigen::VectorXd>& points, double eps) const;

 private:
  // Inverse powers (z - lambda_m)^{-n} per node and eigenvalue, or general LU path.
  Eigen::MatrixXcd resolvent_power(int node, cplx z) const;

  MatrixTuple A_;
  SphericalQuadrature quad_;
  int n_;
  int N_;
  bool hermitian_;
  cplx prefactor_;
  Eigen::MatrixXd lambda_;  // N x K eigenvalues
  Eigen::MatrixXcd table_;  // (K*N) x N^2, row (k, m) = w_k vec(P_m(s_k))
  std::vector<Eigen::MatrixXcd> pencils_;  // <A, s_k> for the LU path
};

// Convenience wrapper: G_x(A) with the given rule.
CliffordMatrix plane_wave_kernel(const MatrixTuple& A, const PairedVector& x, const SphericalQuadrature& quad);

struct KernelWithError {
  CliffordMatrix value;
  double quad_error = 0.0;  // difference to the next coarser rule
};

// G_x(A) with the default rule at `level`, error from the rule one level coarser.
KernelWithError plane_wave_kernel_estimated(const MatrixTuple& A, const PairedVector& x, int level = 0);

enum class JumpClass { vanishing, convergent_density, divergent };
const char* to_string(JumpClass c);

struct ScanOptions {
  std::vector<double> eps = {0.2, 0.1, 0.05, 0.025, 0.0125};
  double resolution = 16.0;  // nodes per unit of (|x| + |A|)/eps along the critical direction
  int min_nodes = 512;       // circle rule floor (n = 2); polar floor is min_nodes/8 (n = 3)
  int azimuth = 64;          // azimuthal nodes for n = 3
  double quad_tol = 1e-10;
  double vanish_ratio = 0.6;   // per-halving decay bound for vanishing
  double diverge_growth = 1.8;  // per-halving growth bound for divergent
};

struct JumpScanResult {
  Eigen::VectorXd point;
  std::vector<double> epsilons;
  std::vector<CliffordMatrix> jump_values;
  std::vector<double> norms;
  JumpClass classification = JumpClass::vanishing;
  std::optional<Eigen::MatrixXcd> extrapolated_density;  // e0 block of the extrapolated jump
};

// Classification from the jump norms alone.
JumpClass classify_jumps(const std::vector<double>& eps, const std::vector<double>& norms, const ScanOptions& opts);

// Polynomial extrapolation to eps = 0 through the three smallest eps.
CliffordMatrix extrapolate_jump(const std::vector<double>& eps, const std::vector<CliffordMatrix>& jumps);

// Rule used for the jump at eps around a point of norm `radius`.
SphericalQuadrature jump_rule(int n, double eps, double radius, const ScanOptions& opts,
                              const Eigen::VectorXd& axis = Eigen::VectorXd());

JumpScanResult jump_density(const MatrixTuple& A, const Eigen::VectorXd& xvec, const ScanOptions& opts = {});

struct ScanRow {
  Eigen::VectorXd point;
  JumpClass classification = JumpClass::vanishing;
  double jump_norm_at_eps_min = 0.0;
  double extrapolated_density_norm = 0.0;  // NaN unless convergent
  Eigen::MatrixXcd density;                // empty unless convergent
};

std::vector<ScanRow> singular_scan(const MatrixTuple& A, const std::vector<Eigen::VectorXd>& points,
                                   const ScanOptions& opts = {});

struct CrossCheck {
  Eigen::MatrixXcd lhs;
  Eigen::MatrixXcd rhs;
  double discrepancy = 0.0;
  std::size_t support_points = 0;
};

// Pairs the extrapolated jump density with f on its grid and compares with weyl_apply.
CrossCheck jump_vs_weyl_crosscheck(const MatrixTuple& A, const GridFunction& f, const ScanOptions& opts = {},
                                   double support_tol = 1e-8);

}  // namespace weylscope
