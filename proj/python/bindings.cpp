#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "weylscope/cauchy.hpp"
#include "weylscope/error.hpp"
#include "weylscope/io.hpp"
#include "weylscope/kippenhahn.hpp"
#include "weylscope/numrange.hpp"
#include "weylscope/parallel.hpp"
#include "weylscope/weyl.hpp"

namespace py = pybind11;
using namespace weylscope;

namespace {

py::dict clifford_dict(const CliffordMatrix& m) {
  py::dict d;
  for (Mask s = 0; s < m.size(); ++s) d[py::int_(s)] = m[s];
  return d;
}

GridGeometry make_grid(const Eigen::VectorXd& origin, const Eigen::VectorXd& spacing, const std::vector<int>& shape) {
  return GridGeometry{origin, spacing, shape};
}

ScanOptions scan_options(const std::optional<std::vector<double>>& eps) {
  ScanOptions o;
  if (eps) o.eps = *eps;
  return o;
}

}  // namespace

PYBIND11_MODULE(_weylscope, m) {
  m.doc() = "Weyl functional calculus, Cauchy kernels and numerical ranges for matrix tuples";
  m.attr("__version__") = WEYLSCOPE_VERSION;

  py::register_exception<RefusedError>(m, "RefusedError");
  py::register_exception<NumericalError>(m, "NumericalError");
  py::register_exception<ParseError>(m, "ParseError");

  py::class_<MatrixTuple>(m, "MatrixTuple")
      .def(py::init<std::vector<Eigen::MatrixXcd>, std::string>(), py::arg("matrices"), py::arg("name") = "")
      .def_property_readonly("n", &MatrixTuple::n)
      .def_property_readonly("N", &MatrixTuple::N)
      .def_property_readonly("hermitian", &MatrixTuple::hermitian)
      .def_property_readonly("name", &MatrixTuple::name)
      .def_property_readonly("matrices", &MatrixTuple::matrices)
      .def("norm", &MatrixTuple::norm);

  m.def("builtin", [](const std::string& name) { return resolve_tuple("builtin:" + name).tuple; }, py::arg("name"),
        "Builtin tuple: pauli, pauli_pair, diagpair, nilpair, example63, skew, pauli2 or pauli2(a1,a2)");
  m.def("load_tuple", [](const std::string& spec) { return resolve_tuple(spec).tuple; }, py::arg("spec"),
        "Tuple from a JSON file or a builtin:<name> spec");
  m.def("set_thread_count", &set_thread_count);
  m.def("thread_count", &thread_count);

  m.def(
      "hyperbolicity_check",
      [](const MatrixTuple& A, int dirs, double tol) {
        auto v = hyperbolicity_check(A, dirs, tol);
        py::dict d;
        d["verdict"] = to_string(v.verdict);
        d["worst_imag"] = v.worst_imag;
        d["directions_tested"] = v.directions_tested;
        return d;
      },
      py::arg("A"), py::arg("direction_count") = 1024, py::arg("tol") = 1e-9);

  m.def(
      "sample_range",
      [](const MatrixTuple& A, std::int64_t M, std::uint64_t seed) { return sample_range(A, M, seed).points; },
      py::arg("A"), py::arg("samples"), py::arg("seed") = 1, "M x n array of samples of the joint numerical range");
  m.def("pauli2_E_closed", &pauli2_E_closed, py::arg("a"), py::arg("x"));
  m.def("pauli2_E_oracle", &pauli2_E_oracle, py::arg("a"), py::arg("x"));

  m.def(
      "weyl_apply",
      [](const MatrixTuple& A, const Eigen::VectorXd& origin, const Eigen::VectorXd& spacing,
         const std::vector<int>& shape, const std::vector<cplx>& values, double cutoff) {
        GridFunction f{make_grid(origin, spacing, shape), values};
        WeylOptions o;
        o.xi_cutoff = cutoff;
        auto r = weyl_apply(A, f, o);
        py::dict d;
        d["value"] = r.value;
        d["xi_cutoff"] = r.xi_cutoff;
        d["error_estimate"] = r.error_estimate;
        d["decay_warning"] = r.decay_warning;
        return d;
      },
      py::arg("A"), py::arg("origin"), py::arg("spacing"), py::arg("shape"), py::arg("values"),
      py::arg("cutoff") = 0.0, "W_A(f) for samples of f on a regular grid (row-major, last axis fastest)");
  m.def(
      "weyl_pauli_surface_gaussian",
      [](double t, const Eigen::VectorXd& c, double w) { return weyl_pauli_surface(t, gaussian(c, w)); },
      py::arg("t"), py::arg("center"), py::arg("width"));
  m.def(
      "symmetrized_monomial", [](const MatrixTuple& A, const std::vector<int>& k) { return symmetrized_monomial(A, k); },
      py::arg("A"), py::arg("k"));

  m.def(
      "plane_wave_kernel",
      [](const MatrixTuple& A, double x0, const Eigen::VectorXd& xvec, int level) {
        auto r = plane_wave_kernel_estimated(A, PairedVector{x0, xvec}, level);
        return py::make_tuple(clifford_dict(r.value), r.quad_error);
      },
      py::arg("A"), py::arg("x0"), py::arg("x"), py::arg("level") = 0,
      "G_x(A) as {blade mask: block} and a quadrature error estimate");
  m.def(
      "jump_density",
      [](const MatrixTuple& A, const Eigen::VectorXd& x, std::optional<std::vector<double>> eps) {
        auto r = jump_density(A, x, scan_options(eps));
        py::dict d;
        d["classification"] = to_string(r.classification);
        d["epsilons"] = r.epsilons;
        d["norms"] = r.norms;
        if (r.extrapolated_density) d["density"] = *r.extrapolated_density;
        else d["density"] = py::none();
        return d;
      },
      py::arg("A"), py::arg("x"), py::arg("eps") = py::none());

  m.def(
      "boundary_curve",
      [](const MatrixTuple& A, int theta_count) {
        auto c = boundary_curve(A, theta_count);
        Eigen::MatrixXd pts(c.size(), 2), tan(c.size(), 3);
        Eigen::VectorXd theta(c.size());
        Eigen::VectorXi branch(c.size()), flag(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) {
          const auto k = static_cast<Eigen::Index>(i);
          theta[k] = c[i].theta;
          branch[k] = c[i].branch;
          flag[k] = static_cast<int>(c[i].flag);
          pts.row(k) = c[i].point.transpose();
          tan.row(k) = c[i].tangent.transpose();
        }
        py::dict d;
        d["theta"] = theta;
        d["branch"] = branch;
        d["points"] = pts;
        d["tangent"] = tan;
        d["flag"] = flag;
        return d;
      },
      py::arg("A"), py::arg("theta_count") = 2048);
  m.def(
      "numerical_range_hull",
      [](const MatrixTuple& A, int directions) {
        auto h = numerical_range_hull(A, directions);
        Eigen::MatrixXd v(h.polygon.vertices.size(), 2);
        for (std::size_t i = 0; i < h.polygon.vertices.size(); ++i)
          v.row(static_cast<Eigen::Index>(i)) = h.polygon.vertices[i].transpose();
        return py::make_tuple(v, h.discretization_bound);
      },
      py::arg("A"), py::arg("direction_count") = 1024, "Hull vertices (counterclockwise) and discretisation bound");
  m.def(
      "wave_front",
      [](const MatrixTuple& A) {
        py::list out;
        for (const auto& p : wave_front(A)) {
          py::dict d;
          d["kind"] = to_string(p.kind);
          d["multiplicity"] = p.multiplicity;
          d["xi"] = Eigen::Vector3d(p.xi);
          d["p"] = Eigen::Vector2d(p.p);
          d["q"] = Eigen::Vector2d(p.q);
          d["note"] = p.note;
          out.append(d);
        }
        return out;
      },
      py::arg("A"));
  m.def(
      "lacuna_detect",
      [](const MatrixTuple& A, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, int points,
         std::optional<std::vector<double>> eps) {
        auto scan = lacuna_detect(A, box_grid(lo, hi, points), scan_options(eps));
        py::list out;
        for (const auto& r : scan.regions) {
          py::dict d;
          d["cells"] = r.cells;
          d["area"] = r.area;
          d["centroid"] = r.centroid;
          d["lo"] = r.lo;
          d["hi"] = r.hi;
          out.append(d);
        }
        return out;
      },
      py::arg("A"), py::arg("lo"), py::arg("hi"), py::arg("points"), py::arg("eps") = py::none());
}
