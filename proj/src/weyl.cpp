#include "weylscope/weyl.hpp"

#include <fftw3.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <unsupported/Eigen/MatrixFunctions>

#include "weylscope/error.hpp"
#include "weylscope/numrange.hpp"
#include "weylscope/parallel.hpp"
#include "weylscope/quadrature.hpp"

namespace weylscope {

namespace {

const cplx kI(0.0, 1.0);

std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

std::vector<cplx> forward_fft(const GridGeometry& g, const std::vector<cplx>& values) {
  std::vector<cplx> in(values), out(values.size());
  std::vector<int> dims(g.shape.begin(), g.shape.end());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), reinterpret_cast<fftw_complex*>(in.data()),
                         reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

// Symmetric signed frequency range for an axis of M samples (Nyquist excluded).
int max_mode(int M) { return (M - 1) / 2; }

double delta_xi(const GridGeometry& g, int j) { return 2.0 * M_PI / (g.shape[j] * g.spacing[j]); }

template <class Fn>
void for_each_mode(const GridGeometry& g, Fn&& fn) {
  const int n = g.dim();
  std::vector<int> m(n);
  for (int j = 0; j < n; ++j) m[j] = -max_mode(g.shape[j]);
  for (;;) {
    fn(m);
    int j = n - 1;
    while (j >= 0 && ++m[j] > max_mode(g.shape[j])) {
      m[j] = -max_mode(g.shape[j]);
      --j;
    }
    if (j < 0) break;
  }
}

std::size_t flat_index(const GridGeometry& g, const std::vector<int>& m) {
  std::size_t idx = 0;
  for (int j = 0; j < g.dim(); ++j) {
    int M = g.shape[j];
    idx = idx * static_cast<std::size_t>(M) + static_cast<std::size_t>(((m[j] % M) + M) % M);
  }
  return idx;
}

Eigen::MatrixXcd exp_i_pencil(const MatrixTuple& A, const Eigen::VectorXd& xi) {
  Eigen::MatrixXcd P = pencil_eval(A, xi);
  if (A.hermitian()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(P);
    Eigen::VectorXcd phase = (kI * es.eigenvalues().cast<cplx>()).array().exp();
    return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
  }
  Eigen::MatrixXcd iP = kI * P;
  return iP.exp();
}

void check_grid(const GridGeometry& g) {
  if (g.dim() < 1 || g.dim() > 3) throw DimensionError("weyl_apply supports 1 <= n <= 3");
  if (g.origin.size() != g.dim() || g.spacing.size() != g.dim())
    throw DimensionError("grid origin/spacing length mismatch");
  for (int j = 0; j < g.dim(); ++j) {
    if (g.shape[j] < 4) throw DomainError("grid needs at least 4 samples per axis");
    if (!(g.spacing[j] > 0.0)) throw DomainError("grid spacing must be positive");
  }
}

double opnorm(const Eigen::MatrixXcd& m) { return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0); }

}  // namespace

std::size_t GridGeometry::size() const {
  std::size_t s = 1;
  for (int m : shape) s *= static_cast<std::size_t>(m);
  return s;
}

Eigen::VectorXd GridGeometry::point(std::size_t flat) const {
  Eigen::VectorXd x(dim());
  for (int j = dim() - 1; j >= 0; --j) {
    std::size_t M = static_cast<std::size_t>(shape[j]);
    x[j] = origin[j] + spacing[j] * static_cast<double>(flat % M);
    flat /= M;
  }
  return x;
}

Eigen::VectorXd GridGeometry::upper() const {
  Eigen::VectorXd u(dim());
  for (int j = 0; j < dim(); ++j) u[j] = origin[j] + spacing[j] * (shape[j] - 1);
  return u;
}

GridGeometry box_grid(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, int points) {
  GridGeometry g;
  g.origin = lo;
  g.spacing = (hi - lo) / static_cast<double>(points - 1);
  g.shape.assign(static_cast<std::size_t>(lo.size()), points);
  return g;
}

GridFunction GridFunction::sample(const GridGeometry& g, const std::function<cplx(const Eigen::VectorXd&)>& f) {
  GridFunction gf{g, std::vector<cplx>(g.size())};
  parallel_for(g.size(), [&](std::size_t k) { gf.values[k] = f(g.point(k)); });
  return gf;
}

WeylPlan::WeylPlan(const MatrixTuple& A, GridGeometry grid, double xi_cutoff)
    : N_(A.N()), grid_(std::move(grid)), cutoff_(xi_cutoff) {
  check_grid(grid_);
  if (A.n() != grid_.dim()) throw DimensionError("tuple length does not match grid dimension");
  const int n = grid_.dim();
  double cell = 1.0, dual = 1.0;
  for (int j = 0; j < n; ++j) {
    cell *= grid_.spacing[j];
    dual *= delta_xi(grid_, j);
  }
  const double scale = cell * dual / std::pow(2.0 * M_PI, n);
  std::vector<Eigen::VectorXd> xis;
  for_each_mode(grid_, [&](const std::vector<int>& m) {
    Eigen::VectorXd xi(n);
    for (int j = 0; j < n; ++j) xi[j] = m[j] * delta_xi(grid_, j);
    if (xi.cwiseAbs().maxCoeff() > cutoff_ * (1.0 + 1e-12)) return;
    index_.push_back(flat_index(grid_, m));
    weight_.push_back(scale * std::exp(-kI * grid_.origin.dot(xi)));
    xis.push_back(std::move(xi));
  });
  exps_.resize(static_cast<Eigen::Index>(N_) * N_, static_cast<Eigen::Index>(xis.size()));
  parallel_for(xis.size(), [&](std::size_t k) {
    Eigen::MatrixXcd E = exp_i_pencil(A, xis[k]);
    exps_.col(static_cast<Eigen::Index>(k)) = Eigen::Map<Eigen::VectorXcd>(E.data(), E.size());
  });
}

Eigen::MatrixXcd WeylPlan::apply(const std::vector<cplx>& values) const {
  if (values.size() != grid_.size()) throw DimensionError("grid function size does not match plan");
  std::vector<cplx> F = forward_fft(grid_, values);
  Eigen::VectorXcd coef(static_cast<Eigen::Index>(index_.size()));
  for (std::size_t k = 0; k < index_.size(); ++k) coef[static_cast<Eigen::Index>(k)] = weight_[k] * F[index_[k]];
  Eigen::VectorXcd v = exps_ * coef;
  return Eigen::Map<Eigen::MatrixXcd>(v.data(), N_, N_);
}

double nyquist_cutoff(const GridGeometry& g) {
  double c = 0.0;
  for (int j = 0; j < g.dim(); ++j) c = std::max(c, max_mode(g.shape[j]) * delta_xi(g, j));
  return c;
}

double auto_xi_cutoff(const GridFunction& f, double rel_tol) {
  const GridGeometry& g = f.grid;
  check_grid(g);
  std::vector<cplx> F = forward_fft(g, f.values);
  double peak = 0.0;
  for (const auto& v : F) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;
  double cutoff = 0.0, step = 0.0;
  for (int j = 0; j < g.dim(); ++j) step = std::max(step, delta_xi(g, j));
  for_each_mode(g, [&](const std::vector<int>& m) {
    if (std::abs(F[flat_index(g, m)]) < rel_tol * peak) return;
    double r = 0.0;
    for (int j = 0; j < g.dim(); ++j) r = std::max(r, std::abs(m[j] * delta_xi(g, j)));
    cutoff = std::max(cutoff, r);
  });
  return std::min(cutoff + step, nyquist_cutoff(g));
}

WeylResult weyl_apply(const MatrixTuple& A, const GridFunction& f, const WeylOptions& opts) {
  const GridGeometry& g = f.grid;
  check_grid(g);
  if (A.n() != g.dim()) throw DimensionError("tuple length does not match grid dimension");
  if (f.values.size() != g.size()) throw DimensionError("grid function has wrong number of samples");
  require_hyperbolic(A);

  auto [lo, hi] = numerical_range_box(A);
  Eigen::VectorXd up = g.upper();
  for (int j = 0; j < g.dim(); ++j) {
    double tol = 1e-12 * (1.0 + std::abs(lo[j]) + std::abs(hi[j]));
    if (lo[j] < g.origin[j] - tol || hi[j] > up[j] + tol)
      throw DomainError("grid does not cover the numerical range box containing supp W_A");
  }

  WeylResult r;
  r.shape = g.shape;
  double peak = 0.0, edge = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    double v = std::abs(f.values[k]);
    peak = std::max(peak, v);
    Eigen::VectorXd x = g.point(k);
    bool boundary = false;
    for (int j = 0; j < g.dim(); ++j)
      if (std::abs(x[j] - g.origin[j]) < 0.5 * g.spacing[j] || std::abs(x[j] - up[j]) < 0.5 * g.spacing[j])
        boundary = true;
    if (boundary) edge = std::max(edge, v);
  }
  r.decay_warning = peak > 0.0 && edge > opts.decay_tol * peak;

  r.xi_cutoff = opts.xi_cutoff > 0.0 ? std::min(opts.xi_cutoff, nyquist_cutoff(g)) : auto_xi_cutoff(f);
  WeylPlan plan(A, g, r.xi_cutoff);
  r.value = plan.apply(f.values);

  bool even = std::all_of(g.shape.begin(), g.shape.end(), [](int m) { return m % 2 == 0 && m >= 8; });
  if (opts.estimate_error && even) {
    GridGeometry coarse{g.origin, 2.0 * g.spacing, {}};
    for (int m : g.shape) coarse.shape.push_back(m / 2);
    std::vector<cplx> cv(coarse.size());
    for (std::size_t k = 0; k < coarse.size(); ++k) {
      std::size_t rem = k, fine = 0, stride = 1;
      std::vector<std::size_t> idx(static_cast<std::size_t>(g.dim()));
      for (int j = g.dim() - 1; j >= 0; --j) {
        idx[static_cast<std::size_t>(j)] = rem % static_cast<std::size_t>(coarse.shape[j]);
        rem /= static_cast<std::size_t>(coarse.shape[j]);
      }
      for (int j = g.dim() - 1; j >= 0; --j) {
        fine += 2 * idx[static_cast<std::size_t>(j)] * stride;
        stride *= static_cast<std::size_t>(g.shape[j]);
      }
      cv[k] = f.values[fine];
    }
    WeylPlan cplan(A, coarse, std::min(r.xi_cutoff, nyquist_cutoff(coarse)));
    r.error_estimate = opnorm(r.value - cplan.apply(cv));
  } else {
    r.error_estimate = std::nan("");
  }
  return r;
}

TestFunction gaussian(const Eigen::VectorXd& center, double width, cplx amplitude) {
  const double s2 = width * width;
  TestFunction f;
  f.value = [=](const Eigen::VectorXd& x) { return amplitude * std::exp(-(x - center).squaredNorm() / (2.0 * s2)); };
  f.gradient = [=](const Eigen::VectorXd& x) {
    cplx v = amplitude * std::exp(-(x - center).squaredNorm() / (2.0 * s2));
    return Eigen::VectorXcd((-(x - center) / s2).cast<cplx>() * v);
  };
  return f;
}

Eigen::MatrixXcd weyl_pauli_surface(double t, const TestFunction& f, int polar, int azimuth) {
  if (!(t > 0.0)) throw DomainError("weyl_pauli_surface: t must be positive");
  const MatrixTuple sigma = tuples::pauli();
  SphericalQuadrature q = product_sphere_rule(polar, azimuth);
  cplx id(0.0);
  Eigen::Vector3cd grad_sum = Eigen::Vector3cd::Zero();
  for (int k = 0; k < q.size(); ++k) {
    Eigen::VectorXd x = t * q.nodes.col(k);
    double w = q.weights[k] / (4.0 * M_PI);
    Eigen::VectorXcd g = f.gradient(x);
    id += w * (f.value(x) + x.cast<cplx>().dot(g));
    grad_sum += w * g;
  }
  Eigen::MatrixXcd out = id * Eigen::MatrixXcd::Identity(2, 2);
  for (int j = 0; j < 3; ++j) out += t * grad_sum[j] * sigma[j];
  return out;
}

MonteCarloMatrix nelson_pauli_pairing(double t, const TestFunction& f, std::int64_t samples, std::uint64_t seed) {
  if (!(t > 0.0)) throw DomainError("nelson_pauli_pairing: t must be positive");
  if (samples < 2) throw DomainError("nelson_pauli_pairing: need at least two samples");
  const MatrixTuple sigma = tuples::pauli();
  CounterRng rng(seed);
  const std::size_t M = static_cast<std::size_t>(samples);
  // Per-sample coefficients of I, sigma_1, sigma_2, sigma_3.
  std::vector<Eigen::Vector4cd> rows(M);
  parallel_for(M, [&](std::size_t i) {
    auto stream = rng.stream(i);
    Eigen::VectorXcd h = random_unit_vector(2, stream);
    Eigen::VectorXd x = t * numerical_range_map(sigma, h).real();
    Eigen::VectorXcd g = f.gradient(x);
    rows[i] << f.value(x) + x.cast<cplx>().dot(g), t * g[0], t * g[1], t * g[2];
  });
  Eigen::Vector4cd mean = Eigen::Vector4cd::Zero();
  for (const auto& r : rows) mean += r;
  mean /= static_cast<double>(M);
  Eigen::Vector4d var_re = Eigen::Vector4d::Zero(), var_im = Eigen::Vector4d::Zero();
  for (const auto& r : rows) {
    Eigen::Vector4cd d = r - mean;
    var_re += d.real().cwiseAbs2();
    var_im += d.imag().cwiseAbs2();
  }
  Eigen::Vector4d se_re = (var_re / static_cast<double>(M - 1) / static_cast<double>(M)).cwiseSqrt();
  Eigen::Vector4d se_im = (var_im / static_cast<double>(M - 1) / static_cast<double>(M)).cwiseSqrt();

  MonteCarloMatrix out;
  out.value = mean[0] * Eigen::MatrixXcd::Identity(2, 2);
  for (int j = 0; j < 3; ++j) out.value += mean[j + 1] * sigma[j];
  // Entry (r,c) is a linear combination of the four coefficients; bound its error by the sum of
  // |basis entry| * standard error.
  out.standard_error = Eigen::MatrixXd::Zero(2, 2);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      double se = (r == c ? 1.0 : 0.0) * std::max(se_re[0], se_im[0]);
      for (int j = 0; j < 3; ++j) se += std::abs(sigma[j](r, c)) * std::max(se_re[j + 1], se_im[j + 1]);
      out.standard_error(r, c) = se;
    }
  return out;
}

Eigen::MatrixXcd symmetrized_monomial(const MatrixTuple& A, const std::vector<int>& k) {
  if (static_cast<int>(k.size()) != A.n()) throw DimensionError("multi-index length does not match tuple");
  int total = 0;
  for (int v : k) {
    if (v < 0) throw DomainError("multi-index entries must be non-negative");
    total += v;
  }
  if (total > kMaxMonomialDegree) throw DomainError("symmetrized_monomial: |k| exceeds 12");
  std::map<std::vector<int>, Eigen::MatrixXcd> memo;
  std::function<Eigen::MatrixXcd(const std::vector<int>&)> words = [&](const std::vector<int>& rem) {
    auto it = memo.find(rem);
    if (it != memo.end()) return it->second;
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(A.N(), A.N());
    bool empty = true;
    for (int j = 0; j < A.n(); ++j) {
      if (rem[static_cast<std::size_t>(j)] == 0) continue;
      empty = false;
      std::vector<int> next = rem;
      --next[static_cast<std::size_t>(j)];
      acc += A[j] * words(next);
    }
    if (empty) acc = Eigen::MatrixXcd::Identity(A.N(), A.N());
    memo.emplace(rem, acc);
    return acc;
  };
  double coef = std::tgamma(total + 1.0);
  coef = 1.0 / coef;
  for (int v : k) coef *= std::tgamma(v + 1.0);
  return coef * words(k);
}

double plateau(double r, double r1, double r2) {
  if (r <= r1) return 1.0;
  if (r >= r2) return 0.0;
  double t = (r - r1) / (r2 - r1);
  double a = std::exp(-1.0 / (1.0 - t)), b = std::exp(-1.0 / t);
  return a / (a + b);
}

double bump(const Eigen::VectorXd& x, const Eigen::VectorXd& center, double radius) {
  double rho2 = (x - center).squaredNorm() / (radius * radius);
  if (rho2 >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - rho2));
}

std::vector<ProbeResult> support_probe_many(const MatrixTuple& A, const std::vector<Eigen::VectorXd>& centers,
                                            double radius, const ProbeOptions& opts) {
  if (!(radius > 0.0)) throw DomainError("support_probe: radius must be positive");
  const int n = A.n();
  if (n > 3) throw DimensionError("support_probe supports n <= 3");
  require_hyperbolic(A);
  auto [lo, hi] = numerical_range_box(A);
  for (const auto& c : centers) {
    if (c.size() != n) throw DimensionError("probe center has wrong length");
    lo = lo.cwiseMin((c.array() - radius).matrix());
    hi = hi.cwiseMax((c.array() + radius).matrix());
  }
  const double pad = 0.25 * radius + 0.05;
  lo.array() -= pad;
  hi.array() += pad;
  int points = opts.points > 0 ? opts.points : (n == 1 ? 1024 : n == 2 ? 256 : 128);
  points += points % 2;
  GridGeometry g;
  g.origin = lo;
  g.spacing = (hi - lo) / static_cast<double>(points);
  g.shape.assign(static_cast<std::size_t>(n), points);

  GridGeometry coarse{g.origin, 2.0 * g.spacing, std::vector<int>(static_cast<std::size_t>(n), points / 2)};
  WeylPlan fine_plan(A, g, nyquist_cutoff(g));
  WeylPlan coarse_plan(A, coarse, nyquist_cutoff(coarse));

  std::vector<ProbeResult> out;
  out.reserve(centers.size());
  for (const auto& c : centers) {
    auto fn = [&](const Eigen::VectorXd& x) { return cplx(bump(x, c, radius)); };
    GridFunction f = GridFunction::sample(g, fn);
    GridFunction fc = GridFunction::sample(coarse, fn);
    Eigen::MatrixXcd W = fine_plan.apply(f.values);
    Eigen::MatrixXcd Wc = coarse_plan.apply(fc.values);
    out.push_back({opnorm(W), opnorm(W - Wc)});
  }
  return out;
}

ProbeResult support_probe(const MatrixTuple& A, const Eigen::VectorXd& center, double radius,
                          const ProbeOptions& opts) {
  return support_probe_many(A, {center}, radius, opts).front();
}

}  // namespace weylscope
