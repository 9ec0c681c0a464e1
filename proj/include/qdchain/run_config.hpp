#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "qdchain/chain_r2.hpp"
#include "qdchain/chain_solver.hpp"

namespace qdchain {

/// Validated run configuration for the CLI. Mirrors ChainParams plus window,
/// tolerance, level count, h sweep, solver strategy and RNG seed.
struct RunConfig {
  ChainParams params;
  LatticeWindow window{-60, 60};
  double tol = 1e-10;
  int levels = 8;  // number of spectrum values, indices k = 0..levels-1
  std::vector<double> hsweep{0.2, 0.1, 0.05, 0.025};
  SeedStrategy strategy = SeedStrategy::FromR2Interlace;
  std::uint64_t seed = 0;
  bool emit_timings = false;
  bool kappa_given = false;
};

/// Parses a JSON configuration document. Unknown keys are rejected with
/// SchemaError naming the key path; constraint violations raise ValueError.
/// kappa defaults to the admissible-interval midpoint, or the pinned value
/// when phi is an integer.
RunConfig parse_config(const std::string& text);

/// 17 significant digits: round-trip exact for binary64.
std::string format_double(double v);

/// Deterministic JSON emitter for reports: insertion-ordered keys, two-space
/// indentation, LF line endings, every numeric via format_double.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& begin_object(const std::string& key);
  JsonWriter& end_object();
  JsonWriter& begin_array(const std::string& key);
  JsonWriter& end_array();
  JsonWriter& field(const std::string& key, double v);
  JsonWriter& field(const std::string& key, int v);
  JsonWriter& field(const std::string& key, std::int64_t v);
  JsonWriter& field(const std::string& key, std::uint64_t v);
  JsonWriter& field(const std::string& key, bool v);
  JsonWriter& field(const std::string& key, const std::string& v);
  JsonWriter& field(const std::string& key, const char* v);
  JsonWriter& element(double v);
  JsonWriter& element(const std::string& v);
  std::string str() const;

 private:
  void separator();
  void indent();
  std::ostringstream out_;
  std::vector<bool> first_;
  bool pending_key_ = false;
};

/// CSV emitter: ',' delimiter, '.' decimal point, header row, LF endings.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<double>& values);
  void raw_row(const std::vector<std::string>& cells);
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
  size_t columns_ = 0;
};

std::string json_escape(const std::string& s);

}  // namespace qdchain
