#include "weylscope/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>

#include "weylscope/cauchy.hpp"
#include "weylscope/error.hpp"
#include "weylscope/io.hpp"
#include "weylscope/kippenhahn.hpp"
#include "weylscope/numrange.hpp"
#include "weylscope/parallel.hpp"
#include "weylscope/weyl.hpp"

namespace weylscope {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Context {
  std::string out_dir = ".";
  std::string tuple_spec;
  TupleFile tuple;
  RunManifest manifest;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  std::string path(const std::string& name) const { return (fs::path(out_dir) / name).string(); }

  void load_tuple() {
    tuple = resolve_tuple(tuple_spec);
    manifest.parameters["tuple"] = tuple_spec;
    for (const auto& w : tuple.warnings) warn(w);
  }

  void warn(const std::string& w) {
    std::cerr << "warning: " << w << "\n";
    manifest.warnings.push_back(w);
  }

  std::vector<std::pair<std::string, std::string>> meta() const { return {{"manifest", manifest.hash()}}; }

  void write_json(const std::string& name, const json& j) const {
    std::ofstream out(path(name));
    if (!out) throw ParseError("cannot write '" + path(name) + "'");
    out << j.dump(2) << "\n";
  }

  void finish() {
    manifest.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_json(manifest.command + ".manifest.json", manifest.to_json());
  }
};

std::vector<std::string> coord_columns(int n, bool complex_parts) {
  std::vector<std::string> cols;
  for (int j = 1; j <= n; ++j) {
    if (complex_parts) {
      cols.push_back("x_" + std::to_string(j) + "_re");
      cols.push_back("x_" + std::to_string(j) + "_im");
    } else {
      cols.push_back("x_" + std::to_string(j));
    }
  }
  return cols;
}

json vec_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

// builtin:gauss(c_1,...,c_n,width)
TestFunction parse_gauss(const std::string& spec, int n, Eigen::VectorXd& center, double& width) {
  static const std::regex re(R"(builtin:gauss\(([^)]*)\))");
  std::smatch m;
  if (!std::regex_match(spec, m, re)) throw ParseError("--fn: expected a grid file or builtin:gauss(c_1,...,c_n,width)");
  std::vector<double> v;
  std::stringstream ss(m[1].str());
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      v.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ParseError("--fn: bad number '" + item + "'");
    }
  }
  if (static_cast<int>(v.size()) != n + 1) throw ParseError("--fn: gauss needs " + std::to_string(n) + " center coordinates and a width");
  center = Eigen::Map<Eigen::VectorXd>(v.data(), n);
  width = v.back();
  if (!(width > 0.0)) throw ParseError("--fn: width must be positive");
  return gaussian(center, width);
}

void cmd_check_hyperbolic(Context& ctx, int dirs, double tol) {
  const MatrixTuple& A = ctx.tuple.tuple;
  ctx.manifest.parameters["dirs"] = dirs;
  ctx.manifest.parameters["tol"] = tol;
  HyperbolicityVerdict v = hyperbolicity_check(A, dirs, tol);
  json j;
  j["tuple"] = A.name();
  j["hermitian"] = A.hermitian();
  j["verdict"] = to_string(v.verdict);
  j["directions_tested"] = v.directions_tested;
  j["worst_imag"] = v.worst_imag;
  if (v.worst_direction.size()) j["worst_direction"] = vec_json(v.worst_direction);
  j["manifest"] = ctx.manifest.hash();
  // Sampling can refute hyperbolicity but only certifies it for hermitian tuples.
  if (ctx.tuple.expected.hyperbolic && *ctx.tuple.expected.hyperbolic == (v.verdict == Hyperbolicity::not_hyperbolic))
    ctx.warn("expected_properties.hyperbolic contradicts the verdict");
  ctx.write_json("hyperbolic.json", j);
  std::cerr << "verdict: " << to_string(v.verdict) << "\n";
}

void cmd_numrange(Context& ctx, long long samples, unsigned long long seed) {
  const MatrixTuple& A = ctx.tuple.tuple;
  ctx.manifest.parameters["samples"] = samples;
  ctx.manifest.seeds["sampling"] = seed;
  EmpiricalMeasure m = sample_range(A, samples, seed);
  auto meta = ctx.meta();
  meta.emplace_back("seed", std::to_string(seed));
  meta.emplace_back("M", std::to_string(samples));
  CsvWriter csv(ctx.path("numrange.csv"), meta, coord_columns(A.n(), !m.hermitian));
  for (Eigen::Index i = 0; i < m.points.rows(); ++i) {
    for (int j = 0; j < A.n(); ++j) {
      csv.num(m.points(i, j).real());
      if (!m.hermitian) csv.num(m.points(i, j).imag());
    }
    csv.end_row();
  }
}

void cmd_kippenhahn(Context& ctx, int theta_count, int directions) {
  const MatrixTuple& A = ctx.tuple.tuple;
  ctx.manifest.parameters["theta_count"] = theta_count;
  ctx.manifest.parameters["directions"] = directions;
  std::vector<CurveSample> curve = boundary_curve(A, theta_count);
  {
    CsvWriter csv(ctx.path("kippenhahn.csv"), ctx.meta(),
                  {"theta", "branch", "x1", "x2", "tangent_c", "tangent_d", "tangent_mu", "flag"});
    for (const auto& s : curve) {
      csv.num(s.theta).integer(s.branch).num(s.point.x()).num(s.point.y());
      csv.num(s.tangent[0]).num(s.tangent[1]).num(s.tangent[2]).integer(static_cast<int>(s.flag));
      csv.end_row();
    }
  }
  SupportHull hull = numerical_range_hull(A, directions);
  CsvWriter csv(ctx.path("hull.csv"), ctx.meta(), {"vertex", "x1", "x2"});
  for (std::size_t i = 0; i < hull.polygon.vertices.size(); ++i) {
    csv.integer(static_cast<long long>(i)).num(hull.polygon.vertices[i].x()).num(hull.polygon.vertices[i].y());
    csv.end_row();
  }
}

void cmd_weyl_apply(Context& ctx, const std::string& fn, double cutoff, int points) {
  const MatrixTuple& A = ctx.tuple.tuple;
  ctx.manifest.parameters["fn"] = fn;
  ctx.manifest.parameters["cutoff"] = cutoff;
  GridFunction f;
  if (fn.rfind("builtin:", 0) == 0) {
    Eigen::VectorXd center;
    double width = 0.0;
    TestFunction g = parse_gauss(fn, A.n(), center, width);
    auto [lo, hi] = numerical_range_box(A);
    lo = (lo.array().min(center.array() - 6.0 * width) - 1.0).matrix();
    hi = (hi.array().max(center.array() + 6.0 * width) + 1.0).matrix();
    if (points <= 0) points = A.n() == 1 ? 256 : (A.n() == 2 ? 96 : 48);
    ctx.manifest.parameters["points"] = points;
    f = GridFunction::sample(box_grid(lo, hi, points), g.value);
  } else {
    f = parse_grid_function_file(fn);
  }
  WeylOptions opts;
  opts.xi_cutoff = cutoff;
  WeylResult r = weyl_apply(A, f, opts);
  if (r.decay_warning) ctx.warn("test function does not decay at the grid boundary");
  {
    CsvWriter csv(ctx.path("weyl.csv"), ctx.meta(), {"row", "col", "re", "im"});
    for (Eigen::Index i = 0; i < r.value.rows(); ++i)
      for (Eigen::Index j = 0; j < r.value.cols(); ++j) {
        csv.integer(i).integer(j).num(r.value(i, j).real()).num(r.value(i, j).imag());
        csv.end_row();
      }
  }
  json j;
  j["xi_cutoff"] = r.xi_cutoff;
  j["error_estimate"] = std::isfinite(r.error_estimate) ? json(r.error_estimate) : json(nullptr);
  j["decay_warning"] = r.decay_warning;
  j["grid_shape"] = r.shape;
  j["manifest"] = ctx.manifest.hash();
  ctx.write_json("weyl.json", j);
}

void write_scan_rows(Context& ctx, const std::string& name, int n, const std::vector<ScanRow>& rows,
                     const std::vector<char>* inside, const std::vector<int>* region) {
  std::vector<std::string> cols = coord_columns(n, false);
  if (inside) cols.push_back("inside_hull");
  for (const char* c : {"classification", "jump_norm_at_eps_min", "extrapolated_density_norm"}) cols.push_back(c);
  if (region) cols.push_back("region");
  CsvWriter csv(ctx.path(name), ctx.meta(), cols);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (int j = 0; j < n; ++j) csv.num(rows[k].point[j]);
    const bool scanned = !inside || (*inside)[k];
    if (inside) csv.integer((*inside)[k]);
    csv.text(scanned ? to_string(rows[k].classification) : "not_scanned");
    csv.num(rows[k].jump_norm_at_eps_min).num(rows[k].extrapolated_density_norm);
    if (region) csv.integer((*region)[k]);
    csv.end_row();
  }
}

json scan_options_json(const ScanOptions& o) {
  json j;
  j["eps"] = o.eps;
  j["resolution"] = o.resolution;
  j["min_nodes"] = o.min_nodes;
  j["azimuth"] = o.azimuth;
  j["quad_tol"] = o.quad_tol;
  j["vanish_ratio"] = o.vanish_ratio;
  j["diverge_growth"] = o.diverge_growth;
  return j;
}

void cmd_cauchy_scan(Context& ctx, const std::string& grid_spec, const ScanOptions& opts) {
  const MatrixTuple& A = ctx.tuple.tuple;
  GridGeometry g = parse_grid_spec(grid_spec);
  if (g.dim() != A.n()) throw DimensionError("grid dimension does not match tuple length");
  ctx.manifest.parameters["grid"] = grid_spec;
  ctx.manifest.parameters["scan"] = scan_options_json(opts);
  std::vector<Eigen::VectorXd> pts;
  for (std::size_t k = 0; k < g.size(); ++k) pts.push_back(g.point(k));
  std::vector<ScanRow> rows = singular_scan(A, pts, opts);
  write_scan_rows(ctx, "scan.csv", A.n(), rows, nullptr, nullptr);
}

void cmd_wavefront(Context& ctx, int theta_count) {
  const MatrixTuple& A = ctx.tuple.tuple;
  WaveFrontOptions opts;
  opts.theta_count = theta_count;
  ctx.manifest.parameters["theta_count"] = theta_count;
  std::vector<WaveFrontPiece> pieces = wave_front(A, opts);
  CsvWriter csv(ctx.path("wavefront.csv"), ctx.meta(),
                {"kind", "multiplicity", "xi_0", "xi_1", "xi_2", "p1", "p2", "q1", "q2", "note"});
  int unresolved = 0;
  for (const auto& p : pieces) {
    csv.text(to_string(p.kind)).integer(p.multiplicity).num(p.xi[0]).num(p.xi[1]).num(p.xi[2]);
    csv.num(p.p.x()).num(p.p.y()).num(p.q.x()).num(p.q.y()).text(p.note);
    csv.end_row();
    unresolved += p.kind == PieceKind::unresolved;
  }
  if (unresolved) ctx.warn(std::to_string(unresolved) + " wave-front pieces unresolved");
}

void cmd_lacuna(Context& ctx, const std::string& grid_spec, const ScanOptions& opts) {
  const MatrixTuple& A = ctx.tuple.tuple;
  GridGeometry g = parse_grid_spec(grid_spec);
  ctx.manifest.parameters["grid"] = grid_spec;
  ctx.manifest.parameters["scan"] = scan_options_json(opts);
  LacunaScan scan = lacuna_detect(A, g, opts);
  write_scan_rows(ctx, "lacuna.csv", A.n(), scan.rows, &scan.inside, &scan.region);
  json regions = json::array();
  for (std::size_t i = 0; i < scan.regions.size(); ++i) {
    const LacunaRegion& r = scan.regions[i];
    regions.push_back({{"id", i}, {"cells", r.cells}, {"area", r.area}, {"centroid", vec_json(r.centroid)},
                       {"lo", vec_json(r.lo)}, {"hi", vec_json(r.hi)}});
    std::cerr << "lacuna " << i << ": area " << r.area << " (" << r.cells << " cells)\n";
  }
  std::cerr << "lacunas found: " << scan.regions.size() << "\n";
  ctx.write_json("lacuna_regions.json", {{"regions", regions}, {"manifest", ctx.manifest.hash()}});
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"weylscope: Weyl functional calculus for matrix tuples"};
  app.set_version_flag("--version", std::string(WEYLSCOPE_VERSION));
  app.require_subcommand(1);
  Context ctx;
  int threads = 0;
  app.add_option("--out-dir", ctx.out_dir, "Directory for output files")->capture_default_str();
  app.add_option("--threads", threads, "Worker threads (default: WEYLSCOPE_THREADS or all cores)");

  std::function<void()> action;
  auto tuple_arg = [&](CLI::App* sub) {
    sub->add_option("tuple", ctx.tuple_spec, "Tuple file or builtin:<name>")->required();
  };

  int dirs = 1024;
  double tol = 1e-9;
  auto* hyp = app.add_subcommand("check-hyperbolic", "Sample directions for complex eigenvalues");
  tuple_arg(hyp);
  hyp->add_option("--dirs", dirs)->capture_default_str();
  hyp->add_option("--tol", tol)->capture_default_str();
  hyp->callback([&] { action = [&] { cmd_check_hyperbolic(ctx, dirs, tol); }; });

  long long samples = 100000;
  unsigned long long seed = 1;
  auto* nr = app.add_subcommand("numrange", "Sample the joint numerical range");
  tuple_arg(nr);
  nr->add_option("--samples", samples)->capture_default_str()->check(CLI::PositiveNumber);
  nr->add_option("--seed", seed)->capture_default_str();
  nr->callback([&] { action = [&] { cmd_numrange(ctx, samples, seed); }; });

  int theta_count = 2048, directions = 1024;
  auto* kip = app.add_subcommand("kippenhahn", "Boundary-generating curve and numerical range hull");
  tuple_arg(kip);
  kip->add_option("--theta-count", theta_count)->capture_default_str()->check(CLI::Range(2, 1 << 22));
  kip->add_option("--directions", directions)->capture_default_str()->check(CLI::Range(3, 1 << 22));
  kip->callback([&] { action = [&] { cmd_kippenhahn(ctx, theta_count, directions); }; });

  std::string fn;
  double cutoff = 0.0;
  int points = 0;
  auto* wa = app.add_subcommand("weyl-apply", "Evaluate W_A(f)");
  tuple_arg(wa);
  wa->add_option("--fn", fn, "Grid function file or builtin:gauss(c_1,...,c_n,width)")->required();
  wa->add_option("--cutoff", cutoff, "Frequency cutoff (0 = automatic)")->capture_default_str();
  wa->add_option("--points", points, "Samples per axis for builtin functions");
  wa->callback([&] { action = [&] { cmd_weyl_apply(ctx, fn, cutoff, points); }; });

  std::string grid_spec;
  ScanOptions scan_opts;
  auto* cs = app.add_subcommand("cauchy-scan", "Classify boundary jumps of the Cauchy kernel on a grid");
  tuple_arg(cs);
  cs->add_option("--grid", grid_spec, "lo:hi:count per axis joined by 'x'")->required();
  cs->add_option("--eps-list", scan_opts.eps, "Decreasing eps values")->delimiter(',');
  cs->callback([&] { action = [&] { cmd_cauchy_scan(ctx, grid_spec, scan_opts); }; });

  int wf_theta = 512;
  auto* wf = app.add_subcommand("wavefront", "Wave-front pieces from localisations (n = 2)");
  tuple_arg(wf);
  wf->add_option("--theta-count", wf_theta)->capture_default_str()->check(CLI::Range(8, 1 << 20));
  wf->callback([&] { action = [&] { cmd_wavefront(ctx, wf_theta); }; });

  auto* lac = app.add_subcommand("lacuna", "Detect lacunas inside the numerical range hull");
  tuple_arg(lac);
  lac->add_option("--grid", grid_spec, "lo:hi:count per axis joined by 'x'")->required();
  lac->add_option("--eps-list", scan_opts.eps, "Decreasing eps values")->delimiter(',');
  lac->callback([&] { action = [&] { cmd_lacuna(ctx, grid_spec, scan_opts); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (threads > 0) set_thread_count(threads);
    ctx.manifest.command = app.get_subcommands().front()->get_name();
    fs::create_directories(ctx.out_dir);
    ctx.load_tuple();
    action();
    ctx.finish();
    return kExitOk;
  } catch (const RefusedError& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kExitRefused;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace weylscope
