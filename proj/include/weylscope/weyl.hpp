#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "weylscope/pencil.hpp"

namespace weylscope {

// Regular lattice origin + k * spacing, k_j in [0, shape_j).
struct GridGeometry {
  Eigen::VectorXd origin;
  Eigen::VectorXd spacing;
  std::vector<int> shape;

  int dim() const { return static_cast<int>(shape.size()); }
  std::size_t size() const;
  Eigen::VectorXd point(std::size_t flat) const;
  Eigen::VectorXd upper() const;  // origin + (shape - 1) * spacing
};

// Grid with `points` samples per axis spanning [lo, hi].
GridGeometry box_grid(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, int points);

struct GridFunction {
  GridGeometry grid;
  std::vector<cplx> values;  // row-major, last axis fastest

  int dim() const { return grid.dim(); }
  static GridFunction sample(const GridGeometry& g, const std::function<cplx(const Eigen::VectorXd&)>& f);
};

struct WeylOptions {
  double xi_cutoff = 0.0;  // <= 0 picks the cutoff where |f^| drops below 1e-8 of its peak
  bool estimate_error = true;
  double decay_tol = 1e-6;
};

struct WeylResult {
  Eigen::MatrixXcd value;
  std::vector<int> shape;
  double xi_cutoff = 0.0;
  double error_estimate = 0.0;
  bool decay_warning = false;
};

// Precomputed exp(i<A, xi>) on the Fourier nodes of a grid inside the cutoff.
class WeylPlan {
 public:
  WeylPlan(const MatrixTuple& A, GridGeometry grid, double xi_cutoff);

  Eigen::MatrixXcd apply(const std::vector<cplx>& values) const;
  double xi_cutoff() const { return cutoff_; }
  std::size_t node_count() const { return index_.size(); }

 private:
  int N_;
  GridGeometry grid_;
  double cutoff_;
  std::vector<std::size_t> index_;  // flat FFT index of each node
  std::vector<cplx> weight_;        // quadrature weight times origin phase
  Eigen::MatrixXcd exps_;           // column k: vec(exp(i<A, xi_k>))
};

// Largest |xi| (infinity norm) on the natural Fourier nodes of the grid.
double nyquist_cutoff(const GridGeometry& g);

// Smallest cutoff outside which |f^| < rel_tol * max |f^| on the grid's Fourier nodes.
double auto_xi_cutoff(const GridFunction& f, double rel_tol = 1e-8);

WeylResult weyl_apply(const MatrixTuple& A, const GridFunction& f, const WeylOptions& opts = {});

// Complex test function on R^n with gradient.
struct TestFunction {
  std::function<cplx(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXcd(const Eigen::VectorXd&)> gradient;
};

TestFunction gaussian(const Eigen::VectorXd& center, double width, cplx amplitude = 1.0);

// Pauli-triple closed form on the sphere of radius t.
Eigen::MatrixXcd weyl_pauli_surface(double t, const TestFunction& f, int polar = 64, int azimuth = 128);

struct MonteCarloMatrix {
  Eigen::MatrixXcd value;
  Eigen::MatrixXd standard_error;  // entrywise, max over real/imag parts
};

// Same pairing estimated by sampling the numerical range distribution of t*sigma.
MonteCarloMatrix nelson_pauli_pairing(double t, const TestFunction& f, std::int64_t samples, std::uint64_t seed);

constexpr int kMaxMonomialDegree = 12;

// (k1!...kn!/|k|!) sum over words with letter j used k_j times.
Eigen::MatrixXcd symmetrized_monomial(const MatrixTuple& A, const std::vector<int>& k);

// C-infinity step: 1 for r <= r1, 0 for r >= r2.
double plateau(double r, double r1, double r2);

// exp(1 - 1/(1 - rho^2)) with rho = |x - c|/radius, zero outside.
double bump(const Eigen::VectorXd& x, const Eigen::VectorXd& center, double radius);

struct ProbeOptions {
  int points = 0;  // per axis; 0 picks a default for the dimension
};

struct ProbeResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

ProbeResult support_probe(const MatrixTuple& A, const Eigen::VectorXd& center, double radius,
                          const ProbeOptions& opts = {});

// Batched probes sharing one grid and one exponential table.
std::vector<ProbeResult> support_probe_many(const MatrixTuple& A, const std::vector<Eigen::VectorXd>& centers,
                                            double radius, const ProbeOptions& opts = {});

}  // namespace weylscope
