#include "weylscope/kippenhahn.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>
#include <boost/geometry/geometries/multi_point.hpp>
#include <cmath>
#include <deque>
#include <limits>

#include "weylscope/error.hpp"
#include "weylscope/parallel.hpp"

namespace weylscope {

namespace bg = boost::geometry;
using BgPoint = bg::model::d2::point_xy<double>;
using BgPolygon = bg::model::polygon<BgPoint, false>;  // counterclockwise, closed

namespace {

void require_hermitian_pair(const MatrixTuple& A) {
  if (A.n() != 2) throw DimensionError("expected a pair of matrices (n = 2)");
  if (!A.hermitian()) throw DomainError("expected hermitian matrices");
}

struct ThetaEig {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXcd vectors;  // matching columns
};

ThetaEig eig_at(const MatrixTuple& A, double theta) {
  Eigen::MatrixXcd H = std::cos(theta) * A[0] + std::sin(theta) * A[1];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  ThetaEig r;
  r.values = es.eigenvalues().reverse();
  r.vectors = es.eigenvectors().rowwise().reverse();
  return r;
}

BgPolygon to_bg(const ConvexPolygon& p) {
  BgPolygon out;
  for (const auto& v : p.vertices) bg::append(out.outer(), BgPoint(v.x(), v.y()));
  if (!p.vertices.empty()) bg::append(out.outer(), BgPoint(p.vertices[0].x(), p.vertices[0].y()));
  return out;
}

}  // namespace

std::vector<CurveSample> boundary_curve(const MatrixTuple& A, int theta_count) {
  require_hermitian_pair(A);
  if (theta_count < 2) throw DomainError("theta_count must be at least 2");
  const int N = A.N();
  const auto K = static_cast<std::size_t>(theta_count);
  std::vector<ThetaEig> eig(K);
  parallel_for(K, [&](std::size_t i) { eig[i] = eig_at(A, M_PI * static_cast<double>(i) / theta_count); });

  // Sequential branch continuation by eigenvector overlap.
  std::vector<std::vector<int>> label(K, std::vector<int>(static_cast<std::size_t>(N)));
  for (int k = 0; k < N; ++k) label[0][static_cast<std::size_t>(k)] = k;
  for (std::size_t i = 1; i < K; ++i) {
    Eigen::MatrixXd O = (eig[i - 1].vectors.adjoint() * eig[i].vectors).cwiseAbs();
    std::vector<int> assign(static_cast<std::size_t>(N));
    std::vector<char> used(static_cast<std::size_t>(N), 0);
    bool ok = true;
    for (int q = 0; q < N && ok; ++q) {
      Eigen::Index p;
      double best = O.col(q).maxCoeff(&p);
      if (best < 0.7 || used[static_cast<std::size_t>(p)]) ok = false;
      used[static_cast<std::size_t>(p)] = 1;
      assign[static_cast<std::size_t>(q)] = label[i - 1][static_cast<std::size_t>(p)];
    }
    label[i] = ok ? assign : label[i - 1];
  }

  std::vector<CurveSample> out;
  out.reserve(K * static_cast<std::size_t>(N));
  for (std::size_t i = 0; i < K; ++i) {
    const double theta = M_PI * static_cast<double>(i) / theta_count;
    const double c = std::cos(theta), d = std::sin(theta);
    const Eigen::MatrixXcd dH = -d * A[0] + c * A[1];
    for (int k = 0; k < N; ++k) {
      const Eigen::VectorXcd u = eig[i].vectors.col(k);
      const double lambda = eig[i].values[k];
      CurveSample s;
      s.theta = theta;
      s.rank = k + 1;
      s.branch = label[i][static_cast<std::size_t>(k)] + 1;
      s.point = Eigen::Vector2d(u.dot(A[0] * u).real(), u.dot(A[1] * u).real());
      const double dl = u.dot(dH * u).real();
      s.envelope = lambda * Eigen::Vector2d(c, d) + dl * Eigen::Vector2d(-d, c);
      s.tangent = Eigen::Vector3d(c, d, -lambda);
      double gap = std::numeric_limits<double>::infinity();
      if (k > 0) gap = std::min(gap, eig[i].values[k - 1] - lambda);
      if (k + 1 < N) gap = std::min(gap, lambda - eig[i].values[k + 1]);
      if (gap < kCrossingGap)
        s.flag = CurveFlag::crossing;
      else if ((s.point - s.envelope).norm() > kEnvelopeTol)
        s.flag = CurveFlag::envelope_mismatch;
      out.push_back(s);
    }
  }
  return out;
}

double ConvexPolygon::area() const {
  if (vertices.size() < 3) return 0.0;
  return bg::area(to_bg(*this));
}

double ConvexPolygon::distance(const Eigen::Vector2d& p) const {
  if (vertices.empty()) throw DomainError("empty polygon");
  if (vertices.size() == 1) return (p - vertices[0]).norm();
  return bg::distance(BgPoint(p.x(), p.y()), to_bg(*this));
}

bool ConvexPolygon::contains(const Eigen::Vector2d& p, double tol) const { return distance(p) <= tol; }

ConvexPolygon convex_hull(const std::vector<Eigen::Vector2d>& points) {
  bg::model::multi_point<BgPoint> mp;
  for (const auto& p : points) bg::append(mp, BgPoint(p.x(), p.y()));
  BgPolygon hull;
  bg::convex_hull(mp, hull);
  ConvexPolygon out;
  const auto& ring = hull.outer();
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) out.vertices.emplace_back(ring[i].x(), ring[i].y());
  if (out.vertices.empty() && !points.empty()) out.vertices.push_back(points[0]);
  return out;
}

double hausdorff(const ConvexPolygon& a, const ConvexPolygon& b) {
  double d = 0.0;
  for (const auto& v : a.vertices) d = std::max(d, b.distance(v));
  for (const auto& v : b.vertices) d = std::max(d, a.distance(v));
  return d;
}

double SupportHull::excess(const Eigen::VectorXd& x) const {
  double e = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < directions.size(); ++i) e = std::max(e, x.dot(directions[i]) - support[i]);
  return e;
}

SupportHull numerical_range_hull(const MatrixTuple& A, int direction_count) {
  if (A.n() != 2 && A.n() != 3) throw DimensionError("numerical_range_hull supports n = 2 or 3");
  if (!A.hermitian()) throw DomainError("expected hermitian matrices");
  if (direction_count < 3) throw DomainError("direction_count must be at least 3");
  SupportHull h;
  const auto K = static_cast<std::size_t>(direction_count);
  if (A.n() == 2) {
    for (std::size_t i = 0; i < K; ++i) {
      double phi = 2.0 * M_PI * static_cast<double>(i) / direction_count;
      Eigen::VectorXd s(2);
      s << std::cos(phi), std::sin(phi);
      h.directions.push_back(s);
    }
  } else {
    h.directions = sphere_directions(3, direction_count);
  }
  h.support.resize(K);
  parallel_for(K, [&](std::size_t i) { h.support[i] = support_function(A, h.directions[i]); });

  double diameter = 0.0;
  if (A.n() == 2) {
    for (std::size_t i = 0; i < K; ++i) {
      const std::size_t j = (i + 1) % K;
      Eigen::Matrix2d M;
      M.row(0) = h.directions[i].transpose();
      M.row(1) = h.directions[j].transpose();
      h.polygon.vertices.push_back(M.inverse() * Eigen::Vector2d(h.support[i], h.support[j]));
    }
    for (std::size_t i = 0; i < K / 2; ++i) diameter = std::max(diameter, h.support[i] + h.support[i + K / 2]);
    h.discretization_bound = diameter * std::tan(M_PI / direction_count);
  } else {
    for (std::size_t i = 0; i < K; ++i) {
      double opp = support_function(A, Eigen::VectorXd(-h.directions[i]));
      diameter = std::max(diameter, h.support[i] + opp);
    }
    h.discretization_bound = diameter * std::tan(std::sqrt(4.0 * M_PI / direction_count));
  }
  return h;
}

const char* to_string(PieceKind k) {
  switch (k) {
    case PieceKind::point: return "point";
    case PieceKind::segment: return "segment";
    case PieceKind::unresolved: return "unresolved";
  }
  return "unknown";
}

LocalQuadratic split_quadratic(const Localisation& L, double disc_tol) {
  if (L.multiplicity() != 2) throw DomainError("split_quadratic expects multiplicity 2");
  LocalQuadratic q;
  const Eigen::Matrix3d I = Eigen::Matrix3d::Identity();
  for (int i = 0; i < 3; ++i) q.form(i, i) = L(Eigen::VectorXd(I.col(i)));
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      double v = 0.5 * (L(Eigen::VectorXd(I.col(i) + I.col(j))) - q.form(i, i) - q.form(j, j));
      q.form(i, j) = q.form(j, i) = v;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(q.form);
  const Eigen::Vector3d ev = es.eigenvalues();  // ascending
  const double scale = ev.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) return q;
  // Two real lines: one eigenvalue ~ 0 (the xi direction) and two of opposite sign.
  int zero = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(ev[i]) < std::abs(ev[zero])) zero = i;
  if (std::abs(ev[zero]) > 1e-8 * scale) return q;
  int a = (zero + 1) % 3, b = (zero + 2) % 3;
  if (ev[a] < ev[b]) std::swap(a, b);
  q.discriminant = -ev[a] * ev[b] / (scale * scale);
  if (!(q.discriminant > disc_tol)) return q;
  const Eigen::Vector3d vp = std::sqrt(ev[a]) * es.eigenvectors().col(a);
  const Eigen::Vector3d vm = std::sqrt(-ev[b]) * es.eigenvectors().col(b);
  q.l1 = vp + vm;
  q.l2 = vp - vm;
  q.splits = true;
  return q;
}

namespace {

// Dual point of the linear form zeta0 b0 + <b, zeta>.
bool dual_point(const Eigen::Vector3d& l, Eigen::Vector2d& out) {
  if (std::abs(l[0]) <= 1e-12 * l.norm()) return false;
  out = Eigen::Vector2d(l[1], l[2]) / l[0];
  return true;
}

double golden_min(const std::function<double(double)>& f, double a, double b, double& fmin) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && (b - a) > 1e-15 * (1.0 + std::abs(a)); ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  if (fc <= fd) {
    fmin = fc;
    return c;
  }
  fmin = fd;
  return d;
}

}  // namespace

std::vector<WaveFrontPiece> wave_front(const MatrixTuple& A, const WaveFrontOptions& opts) {
  require_hermitian_pair(A);
  const int K = opts.theta_count;
  if (K < 8) throw DomainError("theta_count must be at least 8");
  const int N = A.N();
  const double R = A.norm();
  auto theta_at = [&](int i) { return M_PI * i / K; };
  std::vector<ThetaEig> eig(static_cast<std::size_t>(K) + 2);  // index i + 1 holds node i, i = -1..K
  parallel_for(eig.size(), [&](std::size_t i) { eig[i] = eig_at(A, theta_at(static_cast<int>(i) - 1)); });
  auto node = [&](int i) -> const ThetaEig& { return eig[static_cast<std::size_t>(i + 1)]; };

  auto xi_of = [](double lambda, double theta) {
    Eigen::Vector3d x(-lambda, std::cos(theta), std::sin(theta));
    return Eigen::Vector3d(x.normalized());
  };

  std::vector<WaveFrontPiece> pieces;
  const double simple_gap = 1e-6 * (1.0 + R);

  // Simple zeros: the dual point is the gradient of P^A.
  std::vector<std::vector<WaveFrontPiece>> simple(static_cast<std::size_t>(K));
  parallel_for(static_cast<std::size_t>(K), [&](std::size_t ii) {
    const int i = static_cast<int>(ii);
    const ThetaEig& e = node(i);
    for (int k = 0; k < N; ++k) {
      double gap = std::numeric_limits<double>::infinity();
      if (k > 0) gap = std::min(gap, e.values[k - 1] - e.values[k]);
      if (k + 1 < N) gap = std::min(gap, e.values[k] - e.values[k + 1]);
      if (gap < simple_gap) continue;
      WaveFrontPiece p;
      p.xi = xi_of(e.values[k], theta_at(i));
      Localisation L(A, Eigen::VectorXd(p.xi));
      p.multiplicity = L.multiplicity();
      Eigen::Vector3d b;
      for (int j = 0; j < 3; ++j) b[j] = L(Eigen::VectorXd(Eigen::Vector3d::Unit(j)));
      if (p.multiplicity == 1 && dual_point(b, p.p)) {
        p.kind = PieceKind::point;
      } else {
        p.kind = PieceKind::unresolved;
        p.note = p.multiplicity == 1 ? "dual point at infinity" : "unexpected multiplicity at a simple eigenvalue";
      }
      simple[ii].push_back(p);
    }
  });
  for (auto& v : simple)
    for (auto& p : v) pieces.push_back(std::move(p));

  // Multiple zeros: eigenvalue crossings of A(theta), refined by golden section on the rank gap.
  std::vector<Eigen::Vector3d> found;
  for (int k = 0; k + 1 < N; ++k) {
    auto gap_at = [&](int i) { return node(i).values[k] - node(i).values[k + 1]; };
    for (int i = 0; i < K; ++i) {
      if (!(gap_at(i) <= gap_at(i - 1) && gap_at(i) <= gap_at(i + 1))) continue;
      double gmin = 0.0;
      auto gap_fn = [&](double t) {
        Eigen::VectorXd v = eig_at(A, t).values;
        return v[k] - v[k + 1];
      };
      double t = golden_min(gap_fn, theta_at(i - 1), theta_at(i + 1), gmin);
      if (gmin > opts.gap_tol * (1.0 + R)) continue;
      Eigen::VectorXd v = eig_at(A, t).values;
      Eigen::Vector3d xi = xi_of(0.5 * (v[k] + v[k + 1]), t);
      bool dup = false;
      for (const auto& f : found)
        if (std::abs(std::abs(f.dot(xi)) - 1.0) < 1e-10) dup = true;
      if (dup) continue;
      found.push_back(xi);

      WaveFrontPiece p;
      p.xi = xi;
      Localisation L(A, Eigen::VectorXd(xi));
      p.multiplicity = L.multiplicity();
      if (p.multiplicity == 2) {
        LocalQuadratic q = split_quadratic(L);
        if (q.splits && dual_point(q.l1, p.p) && dual_point(q.l2, p.q)) {
          p.kind = PieceKind::segment;
        } else {
          p.kind = PieceKind::unresolved;
          p.note = q.splits ? "linear factor with dual point at infinity" : "quadratic localisation does not split";
        }
      } else {
        p.kind = PieceKind::unresolved;
        p.note = "multiplicity " + std::to_string(p.multiplicity) + " not handled";
      }
      pieces.push_back(p);
    }
  }
  return pieces;
}

LacunaScan lacuna_detect(const MatrixTuple& A, const GridGeometry& grid, const ScanOptions& opts) {
  const int n = A.n();
  if (n != 2 && n != 3) throw DimensionError("lacuna_detect supports n = 2 or 3");
  if (grid.dim() != n) throw DimensionError("grid dimension does not match tuple length");
  SupportHull hull = numerical_range_hull(A, n == 2 ? 1024 : 2048);
  const double margin = grid.spacing.maxCoeff() + hull.discretization_bound;

  LacunaScan out;
  const std::size_t total = grid.size();
  out.inside.assign(total, 0);
  out.rows.resize(total);
  out.region.assign(total, -1);
  std::vector<Eigen::VectorXd> pts;
  std::vector<std::size_t> where;
  for (std::size_t k = 0; k < total; ++k) {
    Eigen::VectorXd x = grid.point(k);
    out.rows[k].point = x;
    out.rows[k].extrapolated_density_norm = std::nan("");
    out.rows[k].jump_norm_at_eps_min = std::nan("");
    if (hull.excess(x) < -margin) {
      out.inside[k] = 1;
      pts.push_back(x);
      where.push_back(k);
    }
  }
  if (!pts.empty()) {
    std::vector<ScanRow> rows = singular_scan(A, pts, opts);
    for (std::size_t i = 0; i < rows.size(); ++i) out.rows[where[i]] = std::move(rows[i]);
  }

  std::vector<std::size_t> stride(static_cast<std::size_t>(n));
  stride[static_cast<std::size_t>(n - 1)] = 1;
  for (int j = n - 2; j >= 0; --j)
    stride[static_cast<std::size_t>(j)] = stride[static_cast<std::size_t>(j + 1)] * static_cast<std::size_t>(grid.shape[static_cast<std::size_t>(j + 1)]);
  auto lacunary = [&](std::size_t k) { return out.inside[k] && out.rows[k].classification == JumpClass::vanishing; };
  const double cell = grid.spacing.prod();

  for (std::size_t start = 0; start < total; ++start) {
    if (!lacunary(start) || out.region[start] >= 0) continue;
    const int id = static_cast<int>(out.regions.size());
    LacunaRegion reg;
    reg.centroid = Eigen::VectorXd::Zero(n);
    reg.lo = reg.hi = grid.point(start);
    std::deque<std::size_t> queue{start};
    out.region[start] = id;
    while (!queue.empty()) {
      std::size_t k = queue.front();
      queue.pop_front();
      Eigen::VectorXd x = grid.point(k);
      ++reg.cells;
      reg.centroid += x;
      reg.lo = reg.lo.cwiseMin(x);
      reg.hi = reg.hi.cwiseMax(x);
      for (int j = 0; j < n; ++j) {
        const std::size_t s = stride[static_cast<std::size_t>(j)];
        const int idx = static_cast<int>((k / s) % static_cast<std::size_t>(grid.shape[static_cast<std::size_t>(j)]));
        if (idx > 0 && lacunary(k - s) && out.region[k - s] < 0) {
          out.region[k - s] = id;
          queue.push_back(k - s);
        }
        if (idx + 1 < grid.shape[static_cast<std::size_t>(j)] && lacunary(k + s) && out.region[k + s] < 0) {
          out.region[k + s] = id;
          queue.push_back(k + s);
        }
      }
    }
    reg.centroid /= static_cast<double>(reg.cells);
    reg.area = static_cast<double>(reg.cells) * cell;
    out.regions.push_back(reg);
  }
  return out;
}

}  // namespace weylscope
