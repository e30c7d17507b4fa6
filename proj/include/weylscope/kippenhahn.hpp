#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "weylscope/cauchy.hpp"
#include "weylscope/pencil.hpp"
#include "weylscope/weyl.hpp"

namespace weylscope {

constexpr double kCrossingGap = 1e-6;
constexpr double kEnvelopeTol = 1e-6;

enum class CurveFlag { ok = 0, crossing = 1, envelope_mismatch = 2 };

struct CurveSample {
  double theta = 0.0;
  int branch = 0;  // 1-based label, continued across theta by eigenvector overlap
  int rank = 0;    // 1-based position in the descending eigenvalue order at this theta
  Eigen::Vector2d point;     // (<A1 u, u>, <A2 u, u>)
  Eigen::Vector2d envelope;  // lambda (c, d) + lambda' (-d, c)
  Eigen::Vector3d tangent;   // [c : d : mu] with mu = -lambda
  CurveFlag flag = CurveFlag::ok;
};

// Envelope points of the lines c x1 + d x2 = lambda_k(theta), theta = i pi / theta_count.
std::vector<CurveSample> boundary_curve(const MatrixTuple& A, int theta_count = 2048);

struct ConvexPolygon {
  std::vector<Eigen::Vector2d> vertices;  // counterclockwise, not closed

  double area() const;
  bool contains(const Eigen::Vector2d& p, double tol = 0.0) const;
  double distance(const Eigen::Vector2d& p) const;  // 0 inside
};

ConvexPolygon convex_hull(const std::vector<Eigen::Vector2d>& points);

// Hausdorff distance between two convex regions given by their polygons.
double hausdorff(const ConvexPolygon& a, const ConvexPolygon& b);

struct SupportHull {
  std::vector<Eigen::VectorXd> directions;
  std::vector<double> support;  // lambda_max(<A, s>)
  ConvexPolygon polygon;        // n = 2 only
  double discretization_bound = 0.0;

  // max_i <x, s_i> - h_i; negative inside.
  double excess(const Eigen::VectorXd& x) const;
};

// Intersection of the half-planes <x, s> <= lambda_max(<A, s>) for sampled directions (n = 2 or 3).
SupportHull numerical_range_hull(const MatrixTuple& A, int direction_count = 1024);

enum class PieceKind { point, segment, unresolved };
const char* to_string(PieceKind k);

struct WaveFrontPiece {
  Eigen::Vector3d xi;  // unit vector with P^A(xi) = 0
  int multiplicity = 0;
  PieceKind kind = PieceKind::point;
  Eigen::Vector2d p = Eigen::Vector2d::Zero();
  Eigen::Vector2d q = Eigen::Vector2d::Zero();  // second endpoint for segments
  std::string note;
};

struct LocalQuadratic {
  Eigen::Matrix3d form;  // L(zeta) = zeta^T form zeta
  bool splits = false;
  double discriminant = 0.0;
  Eigen::Vector3d l1 = Eigen::Vector3d::Zero(), l2 = Eigen::Vector3d::Zero();  // L = l1.zeta * l2.zeta
};

// Quadratic localisation at xi and its splitting into real linear factors.
LocalQuadratic split_quadratic(const Localisation& L, double disc_tol = 1e-8);

struct WaveFrontOptions {
  int theta_count = 512;
  double gap_tol = 1e-7;
};

std::vector<WaveFrontPiece> wave_front(const MatrixTuple& A, const WaveFrontOptions& opts = {});

struct LacunaRegion {
  std::size_t cells = 0;
  double area = 0.0;  // cells times cell volume
  Eigen::VectorXd centroid;
  Eigen::VectorXd lo, hi;
};

struct LacunaScan {
  std::vector<char> inside;     // per grid point: strictly inside the hull by one cell
  std::vector<ScanRow> rows;    // per grid point; classification valid where inside
  std::vector<int> region;      // per grid point: region index or -1
  std::vector<LacunaRegion> regions;
};

LacunaScan lacuna_detect(const MatrixTuple& A, const GridGeometry& grid, const ScanOptions& opts = {});

}  // namespace weylscope
