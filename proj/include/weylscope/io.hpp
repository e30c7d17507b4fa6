#pragma once

#include <cstdio>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "weylscope/pencil.hpp"
#include "weylscope/weyl.hpp"

namespace weylscope {

struct ExpectedProperties {
  std::optional<bool> hermitian;
  std::optional<bool> hyperbolic;
};

struct TupleFile {
  MatrixTuple tuple;
  ExpectedProperties expected;
  std::vector<std::string> warnings;
};

// Schema: {"name", "n", "N", "matrices": [n][N][N][2], "expected_properties": {...}}.
TupleFile parse_tuple_json(const nlohmann::json& j);
TupleFile parse_tuple_text(const std::string& text);
TupleFile parse_tuple_file(const std::string& path);

nlohmann::json tuple_to_json(const MatrixTuple& A, const ExpectedProperties& expected = {});
std::string serialize_tuple(const MatrixTuple& A, const ExpectedProperties& expected = {});

// A path, or builtin:pauli | pauli_pair | diagpair | nilpair | example63 | skew | pauli2(a1,a2).
TupleFile resolve_tuple(const std::string& spec);

// "lo:hi:count" per axis joined by 'x', e.g. "-2:2:200x-2:2:200".
GridGeometry parse_grid_spec(const std::string& spec);

// {"origin": [...], "spacing": [...], "shape": [...], "values": [[re, im], ...]}.
GridFunction parse_grid_function_file(const std::string& path);
nlohmann::json grid_function_to_json(const GridFunction& f);

std::string sha256_hex(const std::string& data);

// Run metadata; the hash covers only the deterministic fields.
struct RunManifest {
  std::string command;
  nlohmann::json parameters = nlohmann::json::object();
  nlohmann::json seeds = nlohmann::json::object();
  std::string version = WEYLSCOPE_VERSION;
  double wall_time = 0.0;
  std::vector<std::string> warnings;

  std::string hash() const;
  nlohmann::json to_json() const;
};

// CSV with '#' metadata lines and %.17g numbers.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::pair<std::string, std::string>>& meta,
            const std::vector<std::string>& columns);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  CsvWriter& num(double v);
  CsvWriter& integer(long long v);
  CsvWriter& text(const std::string& v);
  void end_row();

 private:
  void sep();
  std::FILE* f_ = nullptr;
  bool first_ = true;
};

std::string format_double(double v);

}  // namespace weylscope
