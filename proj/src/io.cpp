#include "weylscope/io.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <regex>
#include <sstream>

#include "weylscope/error.hpp"

namespace weylscope {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(where + ": missing field '" + key + "'");
  return j.at(key);
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  return j.get<double>();
}

int positive_int(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 1) throw ParseError(where + ": expected a positive integer");
  return j.get<int>();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line number.
    std::size_t line = 1;
    for (std::size_t i = 0; i < std::min(e.byte, text.size()); ++i) line += text[i] == '\n';
    throw ParseError(source + ": line " + std::to_string(line) + ": " + e.what());
  }
}

std::vector<double> number_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace

TupleFile parse_tuple_json(const json& j) {
  if (!j.is_object()) throw ParseError("tuple: top level must be an object");
  TupleFile out;
  const int n = positive_int(field(j, "n", "tuple"), "n");
  const int N = positive_int(field(j, "N", "tuple"), "N");
  const json& mats = field(j, "matrices", "tuple");
  if (!mats.is_array() || static_cast<int>(mats.size()) != n)
    throw ParseError("matrices: expected an array of " + std::to_string(n) + " matrices");
  std::vector<Eigen::MatrixXcd> ms;
  for (int k = 0; k < n; ++k) {
    const std::string wk = "matrices[" + std::to_string(k) + "]";
    const json& m = mats[static_cast<std::size_t>(k)];
    if (!m.is_array() || static_cast<int>(m.size()) != N) throw ParseError(wk + ": expected " + std::to_string(N) + " rows");
    Eigen::MatrixXcd M(N, N);
    for (int r = 0; r < N; ++r) {
      const std::string wr = wk + "[" + std::to_string(r) + "]";
      const json& row = m[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<int>(row.size()) != N)
        throw ParseError(wr + ": expected " + std::to_string(N) + " entries (ragged array)");
      for (int c = 0; c < N; ++c) {
        const std::string wc = wr + "[" + std::to_string(c) + "]";
        const json& e = row[static_cast<std::size_t>(c)];
        if (!e.is_array() || e.size() != 2) throw ParseError(wc + ": expected [re, im]");
        M(r, c) = cplx(number(e[0], wc + "[0]"), number(e[1], wc + "[1]"));
      }
    }
    ms.push_back(std::move(M));
  }
  std::string name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : std::string();
  out.tuple = MatrixTuple(std::move(ms), name);
  if (j.contains("expected_properties")) {
    const json& ep = j["expected_properties"];
    if (!ep.is_object()) throw ParseError("expected_properties: expected an object");
    for (const char* key : {"hermitian", "hyperbolic"}) {
      if (!ep.contains(key)) continue;
      if (!ep[key].is_boolean()) throw ParseError(std::string("expected_properties.") + key + ": expected a boolean");
      (std::string(key) == "hermitian" ? out.expected.hermitian : out.expected.hyperbolic) = ep[key].get<bool>();
    }
  }
  if (out.expected.hermitian && *out.expected.hermitian != out.tuple.hermitian())
    out.warnings.push_back("expected_properties.hermitian=" + std::string(*out.expected.hermitian ? "true" : "false") +
                           " but the matrices are" + (out.tuple.hermitian() ? "" : " not") + " hermitian");
  return out;
}

TupleFile parse_tuple_text(const std::string& text) { return parse_tuple_json(parse_json(text, "tuple")); }

TupleFile parse_tuple_file(const std::string& path) {
  try {
    return parse_tuple_json(parse_json(read_file(path), path));
  } catch (const ParseError& e) {
    std::string msg = e.what();
    if (msg.rfind(path, 0) == 0) throw;
    throw ParseError(path + ": " + msg);
  }
}

json tuple_to_json(const MatrixTuple& A, const ExpectedProperties& expected) {
  json j;
  j["name"] = A.name();
  j["n"] = A.n();
  j["N"] = A.N();
  json mats = json::array();
  for (int k = 0; k < A.n(); ++k) {
    json m = json::array();
    for (int r = 0; r < A.N(); ++r) {
      json row = json::array();
      for (int c = 0; c < A.N(); ++c) row.push_back({A[k](r, c).real(), A[k](r, c).imag()});
      m.push_back(row);
    }
    mats.push_back(m);
  }
  j["matrices"] = mats;
  json ep = json::object();
  if (expected.hermitian) ep["hermitian"] = *expected.hermitian;
  if (expected.hyperbolic) ep["hyperbolic"] = *expected.hyperbolic;
  if (!ep.empty()) j["expected_properties"] = ep;
  return j;
}

std::string serialize_tuple(const MatrixTuple& A, const ExpectedProperties& expected) {
  return tuple_to_json(A, expected).dump(1) + "\n";
}

TupleFile resolve_tuple(const std::string& spec) {
  const std::string prefix = "builtin:";
  if (spec.rfind(prefix, 0) != 0) return parse_tuple_file(spec);
  const std::string name = spec.substr(prefix.size());
  TupleFile out;
  static const std::regex p2(R"(pauli2\(\s*([-+0-9.eE]+)\s*,\s*([-+0-9.eE]+)\s*\))");
  std::smatch m;
  if (name == "pauli") out.tuple = tuples::pauli();
  else if (name == "pauli_pair") out.tuple = tuples::pauli_pair();
  else if (name == "diagpair") out.tuple = tuples::diag_pair();
  else if (name == "nilpair") out.tuple = tuples::nil_pair();
  else if (name == "example63") out.tuple = tuples::example63();
  else if (name == "skew") out.tuple = tuples::skew();
  else if (name == "pauli2") out.tuple = tuples::pauli2(2.0, 0.0);
  else if (std::regex_match(name, m, p2)) out.tuple = tuples::pauli2(std::stod(m[1]), std::stod(m[2]));
  else throw ParseError("unknown builtin tuple '" + name + "'");
  return out;
}

GridGeometry parse_grid_spec(const std::string& spec) {
  static const std::regex axis(R"(\s*([-+0-9.eE]+):([-+0-9.eE]+):([0-9]+)\s*)");
  GridGeometry g;
  std::vector<double> origin, spacing;
  std::size_t start = 0;
  while (start <= spec.size()) {
    std::size_t pos = spec.find('x', start);
    std::string part = spec.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
    std::smatch m;
    if (!std::regex_match(part, m, axis)) throw ParseError("grid spec '" + spec + "': expected lo:hi:count per axis");
    double lo, hi;
    int count;
    try {
      lo = std::stod(m[1]);
      hi = std::stod(m[2]);
      count = std::stoi(m[3]);
    } catch (const std::exception&) {
      throw ParseError("grid spec '" + spec + "': bad number in '" + part + "'");
    }
    if (count == 1 ? lo != hi : (count < 1 || !(hi > lo)))
      throw ParseError("grid spec '" + spec + "': need hi > lo and count >= 2, or lo = hi and count = 1");
    origin.push_back(lo);
    spacing.push_back(count == 1 ? 1.0 : (hi - lo) / (count - 1));
    g.shape.push_back(count);
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  g.origin = Eigen::Map<Eigen::VectorXd>(origin.data(), static_cast<Eigen::Index>(origin.size()));
  g.spacing = Eigen::Map<Eigen::VectorXd>(spacing.data(), static_cast<Eigen::Index>(spacing.size()));
  return g;
}

GridFunction parse_grid_function_file(const std::string& path) {
  json j = parse_json(read_file(path), path);
  GridFunction f;
  std::vector<double> origin = number_list(field(j, "origin", path), "origin");
  std::vector<double> spacing = number_list(field(j, "spacing", path), "spacing");
  const json& shape = field(j, "shape", path);
  if (!shape.is_array()) throw ParseError(path + ": shape must be an array");
  for (std::size_t i = 0; i < shape.size(); ++i) f.grid.shape.push_back(positive_int(shape[i], "shape[" + std::to_string(i) + "]"));
  if (origin.size() != spacing.size() || origin.size() != f.grid.shape.size())
    throw ParseError(path + ": origin, spacing and shape must have equal length");
  f.grid.origin = Eigen::Map<Eigen::VectorXd>(origin.data(), static_cast<Eigen::Index>(origin.size()));
  f.grid.spacing = Eigen::Map<Eigen::VectorXd>(spacing.data(), static_cast<Eigen::Index>(spacing.size()));
  const json& values = field(j, "values", path);
  if (!values.is_array() || values.size() != f.grid.size())
    throw ParseError(path + ": values must hold " + std::to_string(f.grid.size()) + " entries");
  for (std::size_t i = 0; i < values.size(); ++i) {
    const json& v = values[i];
    const std::string w = "values[" + std::to_string(i) + "]";
    if (v.is_number()) f.values.emplace_back(v.get<double>(), 0.0);
    else if (v.is_array() && v.size() == 2) f.values.emplace_back(number(v[0], w), number(v[1], w));
    else throw ParseError(path + ": " + w + ": expected a number or [re, im]");
  }
  return f;
}

json grid_function_to_json(const GridFunction& f) {
  json j;
  j["origin"] = std::vector<double>(f.grid.origin.data(), f.grid.origin.data() + f.grid.origin.size());
  j["spacing"] = std::vector<double>(f.grid.spacing.data(), f.grid.spacing.data() + f.grid.spacing.size());
  j["shape"] = f.grid.shape;
  json v = json::array();
  for (const auto& z : f.values) v.push_back({z.real(), z.imag()});
  j["values"] = v;
  return j;
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw NumericalError("SHA-256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

std::string RunManifest::hash() const {
  json j;
  j["command"] = command;
  j["parameters"] = parameters;
  j["seeds"] = seeds;
  j["version"] = version;
  return sha256_hex(j.dump());
}

json RunManifest::to_json() const {
  json j;
  j["command"] = command;
  j["parameters"] = parameters;
  j["seeds"] = seeds;
  j["version"] = version;
  j["wall_time_seconds"] = wall_time;
  j["warnings"] = warnings;
  j["hash"] = hash();
  return j;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::pair<std::string, std::string>>& meta,
                     const std::vector<std::string>& columns) {
  f_ = std::fopen(path.c_str(), "w");
  if (!f_) throw ParseError("cannot write '" + path + "'");
  for (const auto& [k, v] : meta) std::fprintf(f_, "# %s=%s\n", k.c_str(), v.c_str());
  for (std::size_t i = 0; i < columns.size(); ++i) std::fprintf(f_, "%s%s", i ? "," : "", columns[i].c_str());
  std::fputc('\n', f_);
}

CsvWriter::~CsvWriter() {
  if (f_) std::fclose(f_);
}

void CsvWriter::sep() {
  if (!first_) std::fputc(',', f_);
  first_ = false;
}

CsvWriter& CsvWriter::num(double v) {
  sep();
  std::fputs(format_double(v).c_str(), f_);
  return *this;
}

CsvWriter& CsvWriter::integer(long long v) {
  sep();
  std::fprintf(f_, "%lld", v);
  return *this;
}

CsvWriter& CsvWriter::text(const std::string& v) {
  sep();
  std::fputs(v.c_str(), f_);
  return *this;
}

void CsvWriter::end_row() {
  std::fputc('\n', f_);
  first_ = true;
}

}  // namespace weylscope
