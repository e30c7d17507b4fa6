#include "weylscope/cauchy.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "weylscope/error.hpp"
#include "weylscope/parallel.hpp"

namespace weylscope {

namespace {

const cplx kI(0.0, 1.0);
constexpr std::size_t kBlock = 32;

double factorial(int k) { return std::tgamma(k + 1.0); }

cplx inv_pow(cplx w, int n) {
  cplx inv = 1.0 / w, p = inv;
  for (int i = 1; i < n; ++i) p *= inv;
  return p;
}

double opnorm(const Eigen::MatrixXcd& m) { return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0); }

}  // namespace

PlaneWaveEvaluator::PlaneWaveEvaluator(const MatrixTuple& A, SphericalQuadrature quad)
    : A_(A), quad_(std::move(quad)), n_(A.n()), N_(A.N()), hermitian_(A.hermitian()) {
  if (quad_.n != n_) throw DimensionError("quadrature dimension does not match tuple length");
  prefactor_ = factorial(n_ - 1) / 2.0 * std::pow(kI / (2.0 * M_PI), n_);
  const int K = quad_.size();
  if (hermitian_) {
    lambda_.resize(N_, K);
    table_.resize(static_cast<Eigen::Index>(K) * N_, static_cast<Eigen::Index>(N_) * N_);
    parallel_for(static_cast<std::size_t>(K), [&](std::size_t kk) {
      const int k = static_cast<int>(kk);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(pencil_eval(A_, Eigen::VectorXd(quad_.nodes.col(k))));
      lambda_.col(k) = es.eigenvalues();
      for (int m = 0; m < N_; ++m) {
        Eigen::MatrixXcd P = es.eigenvectors().col(m) * es.eigenvectors().col(m).adjoint();
        table_.row(static_cast<Eigen::Index>(k) * N_ + m) =
            quad_.weights[k] * Eigen::Map<Eigen::RowVectorXcd>(P.data(), P.size());
      }
    });
  } else {
    pencils_.resize(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) pencils_[static_cast<std::size_t>(k)] = pencil_eval(A_, Eigen::VectorXd(quad_.nodes.col(k)));
  }
}

Eigen::MatrixXcd PlaneWaveEvaluator::resolvent_power(int node, cplx z) const {
  if (hermitian_) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(N_, N_);
    const double w = quad_.weights[node];
    for (int m = 0; m < N_; ++m) {
      Eigen::RowVectorXcd row = table_.row(static_cast<Eigen::Index>(node) * N_ + m) / w;
      out += inv_pow(z - lambda_(m, node), n_) * Eigen::Map<const Eigen::MatrixXcd>(row.data(), N_, N_);
    }
    return out;
  }
  Eigen::MatrixXcd M = -pencils_[static_cast<std::size_t>(node)];
  M.diagonal().array() += z;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
  if (!(std::abs(lu.determinant()) > 0.0)) throw NumericalError("plane-wave kernel: singular shifted pencil");
  Eigen::MatrixXcd R = Eigen::MatrixXcd::Identity(N_, N_);
  for (int i = 0; i < n_; ++i) R = lu.solve(R);
  if (!R.allFinite()) throw NumericalError("plane-wave kernel: non-finite resolvent");
  return R;
}

CliffordMatrix PlaneWaveEvaluator::kernel(const PairedVector& x, Prefactor pre) const {
  if (x.dim() != n_) throw DimensionError("point dimension does not match tuple length");
  if (x.x0 == 0.0) throw DomainError("plane_wave_kernel: x0 must be nonzero");
  CliffordMatrix G(n_, N_);
  for (int k = 0; k < quad_.size(); ++k) {
    const Eigen::VectorXd s = quad_.nodes.col(k);
    const double a = x.xvec.dot(s);
    const double w = quad_.weights[k];
    Eigen::MatrixXcd Rp = resolvent_power(k, cplx(a, x.x0));
    Eigen::MatrixXcd even, odd;  // coefficients of e0 and of s
    switch (pre) {
      case Prefactor::full:
        even = Rp;
        odd = kI * Rp;
        break;
      case Prefactor::e0_only: {
        Eigen::MatrixXcd Rm = resolvent_power(k, cplx(a, -x.x0));
        even = 0.5 * (Rp + Rm);
        odd = 0.5 * kI * (Rp - Rm);
        break;
      }
      case Prefactor::is_only: {
        Eigen::MatrixXcd Rm = resolvent_power(k, cplx(a, -x.x0));
        even = 0.5 * (Rp - Rm);
        odd = 0.5 * kI * (Rp + Rm);
        break;
      }
    }
    G[0] += w * even;
    for (int j = 0; j < n_; ++j) G[Mask{1} << j] += (w * s[j]) * odd;
  }
  double sign = (x.x0 > 0.0 || (n_ % 2 == 1)) ? 1.0 : -1.0;
  return (sign * prefactor_) * G;
}

CliffordMatrix PlaneWaveEvaluator::jump(const Eigen::VectorXd& xvec, double eps) const {
  return jumps({xvec}, eps).front();
}

std::vector<CliffordMatrix> PlaneWaveEvaluator::jumps(const std::vector<Eigen::VectorXd>& points, double eps) const {
  if (!(eps > 0.0)) throw DomainError("jump: eps must be positive");
  for (const auto& p : points)
    if (p.size() != n_) throw DimensionError("point dimension does not match tuple length");
  const int K = quad_.size();
  const double other = (n_ % 2 == 0) ? 1.0 : -1.0;  // (-1)^n
  std::vector<CliffordMatrix> out(points.size());
  const std::size_t blocks = (points.size() + kBlock - 1) / kBlock;

  parallel_for(blocks, [&](std::size_t blk) {
    const std::size_t begin = blk * kBlock, end = std::min(points.size(), begin + kBlock);
    const Eigen::Index B = static_cast<Eigen::Index>(end - begin);
    if (hermitian_) {
      Eigen::MatrixXcd U(static_cast<Eigen::Index>(K) * N_, B * (n_ + 1));
      for (Eigen::Index b = 0; b < B; ++b) {
        const Eigen::VectorXd& x = points[begin + static_cast<std::size_t>(b)];
        for (int k = 0; k < K; ++k) {
          const double a = x.dot(quad_.nodes.col(k));
          for (int m = 0; m < N_; ++m) {
            const double d = a - lambda_(m, k);
            cplx c = inv_pow(cplx(d, eps), n_) + other * inv_pow(cplx(d, -eps), n_);
            const Eigen::Index row = static_cast<Eigen::Index>(k) * N_ + m;
            U(row, b * (n_ + 1)) = c;
            for (int j = 0; j < n_; ++j) U(row, b * (n_ + 1) + 1 + j) = kI * quad_.nodes(j, k) * c;
          }
        }
      }
      Eigen::MatrixXcd G = table_.transpose() * U;
      for (Eigen::Index b = 0; b < B; ++b) {
        CliffordMatrix J(n_, N_);
        for (int part = 0; part <= n_; ++part) {
          Eigen::VectorXcd col = G.col(b * (n_ + 1) + part);
          Mask blade = part == 0 ? Mask{0} : Mask{1} << (part - 1);
          J[blade] = prefactor_ * Eigen::Map<Eigen::MatrixXcd>(col.data(), N_, N_);
        }
        out[begin + static_cast<std::size_t>(b)] = std::move(J);
      }
    } else {
      for (std::size_t p = begin; p < end; ++p) {
        CliffordMatrix J(n_, N_);
        for (int k = 0; k < K; ++k) {
          const Eigen::VectorXd s = quad_.nodes.col(k);
          const double a = points[p].dot(s);
          Eigen::MatrixXcd R = resolvent_power(k, cplx(a, eps)) + other * resolvent_power(k, cplx(a, -eps));
          const double w = quad_.weights[k];
          J[0] += w * R;
          for (int j = 0; j < n_; ++j) J[Mask{1} << j] += (kI * w * s[j]) * R;
        }
        out[p] = prefactor_ * J;
      }
    }
  });
  return out;
}

CliffordMatrix plane_wave_kernel(const MatrixTuple& A, const PairedVector& x, const SphericalQuadrature& quad) {
  if (x.x0 == 0.0) throw DomainError("plane_wave_kernel: x0 must be nonzero");
  require_hyperbolic(A);
  return PlaneWaveEvaluator(A, quad).kernel(x);
}

KernelWithError plane_wave_kernel_estimated(const MatrixTuple& A, const PairedVector& x, int level) {
  KernelWithError r;
  r.value = plane_wave_kernel(A, x, default_sphere_rule(A.n(), level + 1));
  if (A.n() == 1) return r;
  CliffordMatrix coarse = plane_wave_kernel(A, x, default_sphere_rule(A.n(), level));
  r.quad_error = (r.value - coarse).norm();
  return r;
}

const char* to_string(JumpClass c) {
  switch (c) {
    case JumpClass::vanishing: return "vanishing";
    case JumpClass::convergent_density: return "convergent_density";
    case JumpClass::divergent: return "divergent";
  }
  return "unknown";
}

JumpClass classify_jumps(const std::vector<double>& eps, const std::vector<double>& norms, const ScanOptions& opts) {
  const std::size_t K = norms.size();
  if (K < 3 || eps.size() != K) throw DomainError("classification needs at least three eps values");
  if (norms[K - 1] < 10.0 * opts.quad_tol && norms[K - 2] < 10.0 * opts.quad_tol) return JumpClass::vanishing;
  // Growth factor normalized to one halving of eps.
  auto growth = [&](std::size_t i) {
    double e = std::log(2.0) / std::log(eps[i] / eps[i + 1]);
    return std::pow(norms[i + 1] / norms[i], e);
  };
  const double g1 = growth(K - 3), g2 = growth(K - 2);
  if (g1 >= opts.diverge_growth && g2 >= opts.diverge_growth) return JumpClass::divergent;
  if (g1 <= opts.vanish_ratio && g2 <= opts.vanish_ratio) return JumpClass::vanishing;
  return JumpClass::convergent_density;
}

CliffordMatrix extrapolate_jump(const std::vector<double>& eps, const std::vector<CliffordMatrix>& jumps) {
  const std::size_t K = jumps.size();
  if (K == 0) throw DomainError("extrapolate_jump: no values");
  const std::size_t use = std::min<std::size_t>(3, K);
  CliffordMatrix L;
  bool first = true;
  for (std::size_t i = K - use; i < K; ++i) {
    double w = 1.0;
    for (std::size_t j = K - use; j < K; ++j)
      if (j != i) w *= (0.0 - eps[j]) / (eps[i] - eps[j]);
    if (first) {
      L = w * jumps[i];
      first = false;
    } else {
      L += w * jumps[i];
    }
  }
  return L;
}

SphericalQuadrature jump_rule(int n, double eps, double radius, const ScanOptions& opts, const Eigen::VectorXd& axis) {
  const double want = std::ceil(opts.resolution * radius / eps);
  switch (n) {
    case 1: return point_pair_rule();
    case 2: {
      int M = std::max(opts.min_nodes, static_cast<int>(want));
      M = (M + 7) / 8 * 8;
      return circle_rule(M);
    }
    case 3: {
      int polar = std::max(opts.min_nodes / 8, static_cast<int>(want));
      Eigen::Vector3d ax = Eigen::Vector3d::UnitZ();
      if (axis.size() == 3 && axis.norm() > 0.0) ax = axis.normalized();
      return product_sphere_rule(polar, opts.azimuth, ax);
    }
    default: throw DimensionError("jump scans support n <= 3");
  }
}

namespace {

void check_eps(const std::vector<double>& eps) {
  if (eps.size() < 3) throw DomainError("eps schedule needs at least three values");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0)) throw DomainError("eps schedule must be positive");
    if (i > 0 && !(eps[i] < eps[i - 1])) throw DomainError("eps schedule must be strictly decreasing");
  }
}

}  // namespace

JumpScanResult jump_density(const MatrixTuple& A, const Eigen::VectorXd& xvec, const ScanOptions& opts) {
  check_eps(opts.eps);
  if (xvec.size() != A.n()) throw DimensionError("point dimension does not match tuple length");
  require_hyperbolic(A);
  JumpScanResult r;
  r.point = xvec;
  r.epsilons = opts.eps;
  const double radius = xvec.norm() + A.norm();
  for (double e : opts.eps) {
    PlaneWaveEvaluator ev(A, jump_rule(A.n(), e, radius, opts, xvec));
    r.jump_values.push_back(ev.jump(xvec, e));
    r.norms.push_back(r.jump_values.back().norm());
  }
  r.classification = classify_jumps(r.epsilons, r.norms, opts);
  if (r.classification == JumpClass::convergent_density)
    r.extrapolated_density = extrapolate_jump(r.epsilons, r.jump_values)[0];
  return r;
}

std::vector<ScanRow> singular_scan(const MatrixTuple& A, const std::vector<Eigen::VectorXd>& points,
                                   const ScanOptions& opts) {
  check_eps(opts.eps);
  require_hyperbolic(A);
  const int n = A.n();
  if (n > 3) throw DimensionError("singular_scan supports n <= 3");
  std::vector<ScanRow> rows(points.size());
  if (n == 3) {
    // Per-point rules aligned with the point direction.
    ScanOptions inner = opts;
    std::vector<JumpScanResult> res(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) res[i] = jump_density(A, points[i], inner);
    for (std::size_t i = 0; i < points.size(); ++i) {
      rows[i].point = points[i];
      rows[i].classification = res[i].classification;
      rows[i].jump_norm_at_eps_min = res[i].norms.back();
      rows[i].extrapolated_density_norm = std::nan("");
      if (res[i].extrapolated_density) {
        rows[i].density = *res[i].extrapolated_density;
        rows[i].extrapolated_density_norm = opnorm(rows[i].density);
      }
    }
    return rows;
  }
  double rmax = 0.0;
  for (const auto& p : points) {
    if (p.size() != n) throw DimensionError("point dimension does not match tuple length");
    rmax = std::max(rmax, p.norm());
  }
  const double radius = rmax + A.norm();
  const std::size_t E = opts.eps.size();
  std::vector<std::vector<double>> norms(points.size(), std::vector<double>(E));
  const std::size_t keep = std::min<std::size_t>(3, E);
  std::vector<std::vector<CliffordMatrix>> tail(points.size(), std::vector<CliffordMatrix>(keep));
  for (std::size_t e = 0; e < E; ++e) {
    PlaneWaveEvaluator ev(A, jump_rule(n, opts.eps[e], radius, opts));
    std::vector<CliffordMatrix> J = ev.jumps(points, opts.eps[e]);
    parallel_for(points.size(), [&](std::size_t i) { norms[i][e] = J[i].norm(); });
    if (e + keep >= E)
      for (std::size_t i = 0; i < points.size(); ++i) tail[i][e + keep - E] = std::move(J[i]);
  }
  std::vector<double> tail_eps(opts.eps.end() - static_cast<std::ptrdiff_t>(keep), opts.eps.end());
  parallel_for(points.size(), [&](std::size_t i) {
    ScanRow& row = rows[i];
    row.point = points[i];
    row.classification = classify_jumps(opts.eps, norms[i], opts);
    row.jump_norm_at_eps_min = norms[i].back();
    row.extrapolated_density_norm = std::nan("");
    if (row.classification == JumpClass::convergent_density) {
      row.density = extrapolate_jump(tail_eps, tail[i])[0];
      row.extrapolated_density_norm = opnorm(row.density);
    }
  });
  return rows;
}

CrossCheck jump_vs_weyl_crosscheck(const MatrixTuple& A, const GridFunction& f, const ScanOptions& opts,
                                   double support_tol) {
  const GridGeometry& g = f.grid;
  if (g.dim() != A.n()) throw DimensionError("grid dimension does not match tuple length");
  double peak = 0.0;
  for (const auto& v : f.values) peak = std::max(peak, std::abs(v));
  std::vector<Eigen::VectorXd> pts;
  std::vector<cplx> vals;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (std::abs(f.values[k]) <= support_tol * peak) continue;
    pts.push_back(g.point(k));
    vals.push_back(f.values[k]);
  }
  CrossCheck out;
  out.support_points = pts.size();
  out.lhs = Eigen::MatrixXcd::Zero(A.N(), A.N());
  if (!pts.empty()) {
    std::vector<ScanRow> rows = singular_scan(A, pts, opts);
    double cell = g.spacing.prod();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].classification == JumpClass::divergent) {
        std::ostringstream msg;
        msg << "jump density does not converge at (" << rows[i].point.transpose()
            << ") inside the support of f; pairing refused";
        throw RefusedError(msg.str());
      }
      if (rows[i].classification == JumpClass::convergent_density) out.lhs += (vals[i] * cell) * rows[i].density;
    }
  }
  out.rhs = weyl_apply(A, f).value;
  out.discrepancy = opnorm(out.lhs - out.rhs);
  return out;
}

}  // namespace weylscope
