#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace weylscope {

using cplx = std::complex<double>;

// n-tuple of complex N x N matrices.
class MatrixTuple {
 public:
  MatrixTuple() = default;
  explicit MatrixTuple(std::vector<Eigen::MatrixXcd> matrices, std::string name = {});

  int n() const { return static_cast<int>(mats_.size()); }
  int N() const { return N_; }
  const Eigen::MatrixXcd& operator[](int j) const { return mats_[static_cast<std::size_t>(j)]; }
  const std::vector<Eigen::MatrixXcd>& matrices() const { return mats_; }
  bool hermitian() const { return hermitian_; }
  const std::string& name() const { return name_; }

  // (sum_j |A_j|^2)^{1/2} with operator norms.
  double norm() const;

 private:
  std::vector<Eigen::MatrixXcd> mats_;
  int N_ = 0;
  bool hermitian_ = false;
  std::string name_;
};

// <A, xi> = sum_j xi_j A_j.
Eigen::MatrixXcd pencil_eval(const MatrixTuple& A, const Eigen::VectorXd& xi);
Eigen::MatrixXcd pencil_eval(const MatrixTuple& A, const Eigen::VectorXcd& xi);

// P^A(zeta) = det(zeta_0 I + sum_j zeta_j A_j).
cplx det_poly_eval(const MatrixTuple& A, const Eigen::VectorXcd& zeta);
double det_poly_eval(const MatrixTuple& A, const Eigen::VectorXd& zeta);

enum class Hyperbolicity { hyperbolic, not_hyperbolic, inconclusive };
const char* to_string(Hyperbolicity h);

struct HyperbolicityVerdict {
  Hyperbolicity verdict = Hyperbolicity::inconclusive;
  Eigen::VectorXd worst_direction;
  double worst_imag = 0.0;
  int directions_tested = 0;
};

HyperbolicityVerdict hyperbolicity_check(const MatrixTuple& A, int direction_count = 1024, double tol = 1e-9);

// Throws RefusedError unless A is hermitian or sampling finds no complex eigenvalue.
void require_hyperbolic(const MatrixTuple& A);

// Deterministic quasi-uniform unit directions on S^{n-1}.
std::vector<Eigen::VectorXd> sphere_directions(int n, int count);

// Eigenvalues of <A, s>, real parts sorted descending (hermitian path) or as returned (general).
Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& m);

// lambda_max(<A, s>).
double support_function(const MatrixTuple& A, const Eigen::VectorXd& s);

// Axis-aligned bounding box [lo_j, hi_j] of the joint numerical range.
std::pair<Eigen::VectorXd, Eigen::VectorXd> numerical_range_box(const MatrixTuple& A);

constexpr double kLocalisationEps = 1e-9;

struct LocalisationValue {
  int mu = 0;
  double value = 0.0;
};

// Lowest-order term of t -> P^A(xi + t zeta).
LocalisationValue localisation(const MatrixTuple& A, const Eigen::VectorXd& xi, const Eigen::VectorXd& zeta);

// Localised polynomial at xi with multiplicity over generic directions.
class Localisation {
 public:
  Localisation(MatrixTuple A, Eigen::VectorXd xi);

  const Eigen::VectorXd& base_point() const { return xi_; }
  int multiplicity() const { return mu_; }
  // P^A_xi(zeta): coefficient of t^mu in P^A(xi + t zeta).
  double operator()(const Eigen::VectorXd& zeta) const;

 private:
  MatrixTuple A_;
  Eigen::VectorXd xi_;
  int mu_ = 0;
};

// Coefficients c_0..c_N of t -> P^A(xi + t zeta).
std::vector<double> line_polynomial(const MatrixTuple& A, const Eigen::VectorXd& xi, const Eigen::VectorXd& zeta);

// Standard tuples used in tests, fixtures and the CLI.
namespace tuples {
MatrixTuple pauli();
MatrixTuple pauli_pair();  // (sigma_1, sigma_2)
MatrixTuple diag_pair();   // (diag(1,0), diag(0,1))
MatrixTuple nil_pair();
MatrixTuple example63();
MatrixTuple pauli2(double a1, double a2);  // (a1 + sigma_1, a2 + sigma_2) as 3x3 direct sums
MatrixTuple skew();
}  // namespace tuples

}  // namespace weylscope
