#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace weylscope {

using cplx = std::complex<double>;
using Mask = std::uint32_t;

constexpr int kMaxCliffordDim = 8;

struct BladeProduct {
  int sign;
  Mask mask;
};

// e_S e_R = sign * e_{S xor R}, with e_j^2 = -1 and anticommuting generators.
// Bit j-1 of a mask stands for e_j.
BladeProduct blade_product(Mask s, Mask r, int n);

// Sign c with conj(e_S) = c * e_S.
int blade_conj_sign(Mask s);

// Element of the complexified Clifford algebra C_(n), stored densely.
class CliffordElement {
 public:
  explicit CliffordElement(int n);

  static CliffordElement scalar(int n, cplx value);
  static CliffordElement blade(int n, Mask s, cplx value = 1.0);

  int dim() const { return n_; }
  std::size_t size() const { return coeffs_.size(); }
  const cplx& operator[](Mask s) const { return coeffs_[s]; }
  cplx& operator[](Mask s) { return coeffs_[s]; }

  double norm() const;

  CliffordElement& operator+=(const CliffordElement& o);
  CliffordElement& operator-=(const CliffordElement& o);
  CliffordElement& operator*=(cplx a);

 private:
  int n_;
  std::vector<cplx> coeffs_;
};

CliffordElement operator+(CliffordElement a, const CliffordElement& b);
CliffordElement operator-(CliffordElement a, const CliffordElement& b);
CliffordElement operator*(cplx a, CliffordElement b);
CliffordElement operator*(const CliffordElement& a, const CliffordElement& b);

CliffordElement cl_mul(const CliffordElement& u, const CliffordElement& v);
CliffordElement cl_conj(const CliffordElement& u);

// x = x0 e0 + sum_j xvec_j e_j.
struct PairedVector {
  double x0 = 0.0;
  Eigen::VectorXd xvec;

  int dim() const { return static_cast<int>(xvec.size()); }
  double norm() const;
  CliffordElement element() const;
};

CliffordElement kelvin_inverse(const PairedVector& x);

// chi_{+-}(x) = (e0 +- i x/|x|)/2 for a nonzero vector x.
CliffordElement chi_plus(const Eigen::VectorXd& xvec);
CliffordElement chi_minus(const Eigen::VectorXd& xvec);

// f(|x|) chi_+(x) + f(-|x|) chi_-(x); f(0) e0 at xvec = 0.
CliffordElement vector_func_calc(const std::function<cplx(double)>& f, const Eigen::VectorXd& xvec);

// Surface area of the unit sphere S^n in R^{n+1}.
double unit_sphere_area(int n);

// E(x) = xbar / (Sigma_n |x|^{n+1}).
CliffordElement cauchy_kernel_E(const PairedVector& x);

// Partial derivatives d/dx_j E(x) for j = 0..n.
std::vector<CliffordElement> cauchy_kernel_E_gradient(const PairedVector& x);

// Operator with one N x N block per blade.
class CliffordMatrix {
 public:
  CliffordMatrix() = default;
  CliffordMatrix(int n, int N);

  int dim() const { return n_; }
  int rows() const { return N_; }
  const Eigen::MatrixXcd& operator[](Mask s) const { return blocks_[s]; }
  Eigen::MatrixXcd& operator[](Mask s) { return blocks_[s]; }
  std::size_t size() const { return blocks_.size(); }

  double norm() const;

  CliffordMatrix& operator+=(const CliffordMatrix& o);
  CliffordMatrix& operator-=(const CliffordMatrix& o);
  CliffordMatrix& operator*=(cplx a);

 private:
  int n_ = 0;
  int N_ = 0;
  std::vector<Eigen::MatrixXcd> blocks_;
};

CliffordMatrix operator+(CliffordMatrix a, const CliffordMatrix& b);
CliffordMatrix operator-(CliffordMatrix a, const CliffordMatrix& b);
CliffordMatrix operator*(cplx a, CliffordMatrix b);

// u * T and T * u with u acting on the blade index.
CliffordMatrix left_mul(const CliffordElement& u, const CliffordMatrix& t);
CliffordMatrix right_mul(const CliffordMatrix& t, const CliffordElement& u);

// Scalar element times the identity matrix.
CliffordMatrix embed(const CliffordElement& u, int N);

// Central-difference left Dirac operator sum_{j=0}^n e_j d_j F at x.
CliffordMatrix dirac_residual(const std::function<CliffordMatrix(const PairedVector&)>& f,
                              const PairedVector& x, double h);

}  // namespace weylscope
