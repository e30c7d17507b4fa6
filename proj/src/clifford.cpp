#include "weylscope/clifford.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <string>

#include "weylscope/error.hpp"

namespace weylscope {

namespace {

constexpr int kCachedDim = 5;
constexpr std::size_t kCachedBlades = std::size_t{1} << kCachedDim;

BladeProduct compute_blade_product(Mask s, Mask r) {
  // Move each generator of r leftwards past the higher generators of s.
  int swaps = 0;
  for (Mask rest = r; rest != 0; rest &= rest - 1) {
    Mask low = rest & (~rest + 1);
    swaps += std::popcount(s & ~(low | (low - 1)));
  }
  swaps += std::popcount(s & r);  // e_j^2 = -1
  return {(swaps & 1) ? -1 : 1, s ^ r};
}

struct SignTable {
  std::array<std::array<signed char, kCachedBlades>, kCachedBlades> sign{};
  SignTable() {
    for (Mask s = 0; s < kCachedBlades; ++s)
      for (Mask r = 0; r < kCachedBlades; ++r) sign[s][r] = static_cast<signed char>(compute_blade_product(s, r).sign);
  }
};

const SignTable& sign_table() {
  static const SignTable table;
  return table;
}

void check_dim(int n) {
  if (n < 1 || n > kMaxCliffordDim)
    throw DimensionError("Clifford dimension must be in [1, " + std::to_string(kMaxCliffordDim) + "], got " +
                         std::to_string(n));
}

}  // namespace

BladeProduct blade_product(Mask s, Mask r, int n) {
  if (n <= kCachedDim) return {sign_table().sign[s][r], s ^ r};
  return compute_blade_product(s, r);
}

int blade_conj_sign(Mask s) {
  // conj(e_{s1}...e_{sk}) = (-1)^k e_{sk}...e_{s1} = (-1)^k (-1)^{k(k-1)/2} e_S
  int k = std::popcount(s);
  int p = k + k * (k - 1) / 2;
  return (p & 1) ? -1 : 1;
}

CliffordElement::CliffordElement(int n) : n_(n) {
  check_dim(n);
  coeffs_.assign(std::size_t{1} << n, cplx(0.0));
}

CliffordElement CliffordElement::scalar(int n, cplx value) {
  CliffordElement u(n);
  u[0] = value;
  return u;
}

CliffordElement CliffordElement::blade(int n, Mask s, cplx value) {
  CliffordElement u(n);
  u[s] = value;
  return u;
}

double CliffordElement::norm() const {
  double acc = 0.0;
  for (const auto& c : coeffs_) acc += std::norm(c);
  return std::sqrt(acc);
}

CliffordElement& CliffordElement::operator+=(const CliffordElement& o) {
  if (o.n_ != n_) throw DimensionError("Clifford dimension mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

CliffordElement& CliffordElement::operator-=(const CliffordElement& o) {
  if (o.n_ != n_) throw DimensionError("Clifford dimension mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

CliffordElement& CliffordElement::operator*=(cplx a) {
  for (auto& c : coeffs_) c *= a;
  return *this;
}

CliffordElement operator+(CliffordElement a, const CliffordElement& b) { return a += b; }
CliffordElement operator-(CliffordElement a, const CliffordElement& b) { return a -= b; }
CliffordElement operator*(cplx a, CliffordElement b) { return b *= a; }

CliffordElement cl_mul(const CliffordElement& u, const CliffordElement& v) {
  if (u.dim() != v.dim()) throw DimensionError("Clifford dimension mismatch");
  const int n = u.dim();
  const Mask blades = Mask{1} << n;
  CliffordElement out(n);
  for (Mask s = 0; s < blades; ++s) {
    if (u[s] == cplx(0.0)) continue;
    for (Mask r = 0; r < blades; ++r) {
      if (v[r] == cplx(0.0)) continue;
      BladeProduct p = blade_product(s, r, n);
      out[p.mask] += static_cast<double>(p.sign) * u[s] * v[r];
    }
  }
  return out;
}

CliffordElement operator*(const CliffordElement& a, const CliffordElement& b) { return cl_mul(a, b); }

CliffordElement cl_conj(const CliffordElement& u) {
  CliffordElement out(u.dim());
  for (Mask s = 0; s < u.size(); ++s) out[s] = static_cast<double>(blade_conj_sign(s)) * u[s];
  return out;
}

double PairedVector::norm() const { return std::sqrt(x0 * x0 + xvec.squaredNorm()); }

CliffordElement PairedVector::element() const {
  CliffordElement u(dim());
  u[0] = x0;
  for (int j = 0; j < dim(); ++j) u[Mask{1} << j] = xvec[j];
  return u;
}

CliffordElement kelvin_inverse(const PairedVector& x) {
  double r2 = x.x0 * x.x0 + x.xvec.squaredNorm();
  if (!(r2 > 0.0)) throw DomainError("kelvin_inverse: zero vector");
  return (1.0 / r2) * cl_conj(x.element());
}

namespace {

CliffordElement chi(const Eigen::VectorXd& xvec, double sign) {
  const int n = static_cast<int>(xvec.size());
  double r = xvec.norm();
  if (r == 0.0) throw DomainError("chi: zero vector");
  CliffordElement u(n);
  u[0] = 0.5;
  for (int j = 0; j < n; ++j) u[Mask{1} << j] = cplx(0.0, 0.5 * sign * xvec[j] / r);
  return u;
}

}  // namespace

CliffordElement chi_plus(const Eigen::VectorXd& xvec) { return chi(xvec, 1.0); }
CliffordElement chi_minus(const Eigen::VectorXd& xvec) { return chi(xvec, -1.0); }

CliffordElement vector_func_calc(const std::function<cplx(double)>& f, const Eigen::VectorXd& xvec) {
  const int n = static_cast<int>(xvec.size());
  double r = xvec.norm();
  if (r == 0.0) return CliffordElement::scalar(n, f(0.0));
  return f(r) * chi_plus(xvec) + f(-r) * chi_minus(xvec);
}

double unit_sphere_area(int n) {
  const double a = 0.5 * (n + 1);
  return 2.0 * std::pow(M_PI, a) / std::tgamma(a);
}

CliffordElement cauchy_kernel_E(const PairedVector& x) {
  const int n = x.dim();
  double r = x.norm();
  if (!(r > 0.0)) throw DomainError("cauchy_kernel_E: zero vector");
  double scale = 1.0 / (unit_sphere_area(n) * std::pow(r, n + 1));
  return scale * cl_conj(x.element());
}

std::vector<CliffordElement> cauchy_kernel_E_gradient(const PairedVector& x) {
  // E = xbar * g with g = 1/(Sigma |x|^{n+1}); d_j g = -(n+1) x_j g / |x|^2.
  const int n = x.dim();
  double r2 = x.x0 * x.x0 + x.xvec.squaredNorm();
  if (!(r2 > 0.0)) throw DomainError("cauchy_kernel_E_gradient: zero vector");
  double g = 1.0 / (unit_sphere_area(n) * std::pow(r2, 0.5 * (n + 1)));
  CliffordElement xbar = cl_conj(x.element());
  std::vector<CliffordElement> grad;
  grad.reserve(n + 1);
  for (int j = 0; j <= n; ++j) {
    double xj = j == 0 ? x.x0 : x.xvec[j - 1];
    CliffordElement d = (-(n + 1) * xj * g / r2) * xbar;
    Mask blade = j == 0 ? Mask{0} : Mask{1} << (j - 1);
    d[blade] += (j == 0 ? 1.0 : -1.0) * g;
    grad.push_back(std::move(d));
  }
  return grad;
}

CliffordMatrix::CliffordMatrix(int n, int N) : n_(n), N_(N) {
  check_dim(n);
  blocks_.assign(std::size_t{1} << n, Eigen::MatrixXcd::Zero(N, N));
}

double CliffordMatrix::norm() const {
  double acc = 0.0;
  for (const auto& b : blocks_) {
    if (b.size() == 0) continue;
    double op = Eigen::JacobiSVD<Eigen::MatrixXcd>(b).singularValues()(0);
    acc += op * op;
  }
  return std::sqrt(acc);
}

CliffordMatrix& CliffordMatrix::operator+=(const CliffordMatrix& o) {
  if (o.n_ != n_ || o.N_ != N_) throw DimensionError("CliffordMatrix shape mismatch");
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] += o.blocks_[i];
  return *this;
}

CliffordMatrix& CliffordMatrix::operator-=(const CliffordMatrix& o) {
  if (o.n_ != n_ || o.N_ != N_) throw DimensionError("CliffordMatrix shape mismatch");
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] -= o.blocks_[i];
  return *this;
}

CliffordMatrix& CliffordMatrix::operator*=(cplx a) {
  for (auto& b : blocks_) b *= a;
  return *this;
}

CliffordMatrix operator+(CliffordMatrix a, const CliffordMatrix& b) { return a += b; }
CliffordMatrix operator-(CliffordMatrix a, const CliffordMatrix& b) { return a -= b; }
CliffordMatrix operator*(cplx a, CliffordMatrix b) { return b *= a; }

CliffordMatrix left_mul(const CliffordElement& u, const CliffordMatrix& t) {
  if (u.dim() != t.dim()) throw DimensionError("Clifford dimension mismatch");
  const int n = t.dim();
  CliffordMatrix out(n, t.rows());
  for (Mask s = 0; s < u.size(); ++s) {
    if (u[s] == cplx(0.0)) continue;
    for (Mask r = 0; r < t.size(); ++r) {
      BladeProduct p = blade_product(s, r, n);
      out[p.mask] += (static_cast<double>(p.sign) * u[s]) * t[r];
    }
  }
  return out;
}

CliffordMatrix right_mul(const CliffordMatrix& t, const CliffordElement& u) {
  if (u.dim() != t.dim()) throw DimensionError("Clifford dimension mismatch");
  const int n = t.dim();
  CliffordMatrix out(n, t.rows());
  for (Mask r = 0; r < t.size(); ++r) {
    for (Mask s = 0; s < u.size(); ++s) {
      if (u[s] == cplx(0.0)) continue;
      BladeProduct p = blade_product(r, s, n);
      out[p.mask] += (static_cast<double>(p.sign) * u[s]) * t[r];
    }
  }
  return out;
}

CliffordMatrix embed(const CliffordElement& u, int N) {
  CliffordMatrix out(u.dim(), N);
  for (Mask s = 0; s < u.size(); ++s) out[s] = u[s] * Eigen::MatrixXcd::Identity(N, N);
  return out;
}

CliffordMatrix dirac_residual(const std::function<CliffordMatrix(const PairedVector&)>& f, const PairedVector& x,
                              double h) {
  const int n = x.dim();
  CliffordMatrix acc;
  for (int j = 0; j <= n; ++j) {
    PairedVector xp = x, xm = x;
    if (j == 0) {
      xp.x0 += h;
      xm.x0 -= h;
    } else {
      xp.xvec[j - 1] += h;
      xm.xvec[j - 1] -= h;
    }
    CliffordMatrix d = (1.0 / (2.0 * h)) * (f(xp) - f(xm));
    Mask blade = j == 0 ? Mask{0} : Mask{1} << (j - 1);
    CliffordMatrix term = left_mul(CliffordElement::blade(n, blade), d);
    if (j == 0)
      acc = term;
    else
      acc += term;
  }
  return acc;
}

}  // namespace weylscope
