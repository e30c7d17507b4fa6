#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "weylscope/pencil.hpp"
#include "weylscope/rng.hpp"

namespace weylscope {

// Uniform point on the unit sphere of C^N (normalized complex Gaussian).
Eigen::VectorXcd random_unit_vector(int N, CounterRng::Stream& stream);

// n_A(h) = (<A_1 h, h>, ..., <A_n h, h>).
Eigen::VectorXcd numerical_range_map(const MatrixTuple& A, const Eigen::VectorXcd& h);

struct EmpiricalMeasure {
  Eigen::MatrixXcd points;  // M x n; imaginary parts vanish up to rounding for hermitian tuples
  std::uint64_t seed = 0;
  int N = 0;
  std::int64_t M = 0;
  bool hermitian = true;
};

EmpiricalMeasure sample_range(const MatrixTuple& A, std::int64_t M, std::uint64_t seed);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// One-sample Kolmogorov-Smirnov test against Uniform[lo, hi].
KsResult ks_uniform(std::vector<double> samples, double lo, double hi);

// Asymptotic Kolmogorov survival function P(sqrt(M) D > lambda) with Stephens' correction.
double kolmogorov_p_value(double statistic, std::int64_t M);

struct PauliUniformity {
  KsResult height;   // x_3 against Uniform[-1, 1]
  KsResult azimuth;  // atan2(x_2, x_1) against Uniform[0, 2 pi)
};

PauliUniformity nu_pauli_uniformity(const EmpiricalMeasure& m);

// Integral over y in [0,1] of (y^2 - |x - (1-y) a|^2)_+^{-1/2}, closed form.
double pauli2_E_closed(const Eigen::Vector2d& a, const Eigen::Vector2d& x);

// Same integral by adaptive quadrature.
double pauli2_E_oracle(const Eigen::Vector2d& a, const Eigen::Vector2d& x);

}  // namespace weylscope
