#pragma once

#include <Eigen/Dense>

#include "weylscope/clifford.hpp"
#include "weylscope/pencil.hpp"
#include "weylscope/rng.hpp"

namespace wt {

using weylscope::cplx;

inline weylscope::CliffordElement random_element(int n, weylscope::CounterRng::Stream& s) {
  weylscope::CliffordElement u(n);
  for (weylscope::Mask m = 0; m < (1u << n); ++m) u[m] = cplx(s.normal(), s.normal());
  return u;
}

inline Eigen::MatrixXcd random_hermitian(int N, weylscope::CounterRng::Stream& s) {
  Eigen::MatrixXcd M(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) M(i, j) = cplx(s.normal(), s.normal());
  return 0.5 * (M + M.adjoint());
}

inline Eigen::MatrixXcd random_unitary(int N, weylscope::CounterRng::Stream& s) {
  Eigen::MatrixXcd M(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) M(i, j) = cplx(s.normal(), s.normal());
  return Eigen::HouseholderQR<Eigen::MatrixXcd>(M).householderQ();
}

inline double max_diff(const weylscope::CliffordElement& a, const weylscope::CliffordElement& b) {
  double d = 0.0;
  for (weylscope::Mask m = 0; m < a.size(); ++m) d = std::max(d, std::abs(a[m] - b[m]));
  return d;
}

}  // namespace wt
