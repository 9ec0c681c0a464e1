#include "qdchain/run_config.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include <json.hpp>

namespace qdchain {

namespace {

using nlohmann::json;

void require_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path + " must be a number");
}

double as_number(const json& j, const std::string& path) {
  require_number(j, path);
  return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path + " must be an integer");
  return j.get<int>();
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("configuration is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("configuration root must be an object");

  static const std::set<std::string> known = {
      "r",   "s",      "q",      "alpha",  "phi",      "kappa",       "epsilon",
      "window", "tol", "levels", "hsweep", "strategy", "seed",        "emit_timings"};
  for (const auto& item : doc.items()) {
    if (!known.count(item.key())) throw SchemaError("unknown key: " + item.key());
  }

  RunConfig cfg;

  if (!doc.contains("q")) throw SchemaError("missing required key: q");
  if (!doc.contains("alpha")) throw SchemaError("missing required key: alpha");

  const json& alpha = doc["alpha"];
  if (!alpha.is_array() || alpha.empty()) throw SchemaError("alpha must be a non-empty array");
  cfg.params.alphas.clear();
  for (size_t i = 0; i < alpha.size(); ++i) {
    cfg.params.alphas.push_back(as_number(alpha[i], "alpha[" + std::to_string(i) + "]"));
  }

  cfg.params.r = doc.contains("r") ? as_int(doc["r"], "r") : static_cast<int>(alpha.size());
  cfg.params.s = doc.contains("s") ? as_int(doc["s"], "s") : cfg.params.r / 2;
  cfg.params.q = as_number(doc["q"], "q");
  cfg.params.phi = doc.contains("phi") ? as_number(doc["phi"], "phi") : 0.0;
  cfg.params.epsilon = doc.contains("epsilon") ? as_int(doc["epsilon"], "epsilon") : -1;

  if (doc.contains("window")) {
    const json& w = doc["window"];
    if (!w.is_object()) throw SchemaError("window must be an object {nmin, nmax}");
    for (const auto& item : w.items()) {
      if (item.key() != "nmin" && item.key() != "nmax") {
        throw SchemaError("unknown key: window." + item.key());
      }
    }
    if (!w.contains("nmin") || !w.contains("nmax")) {
      throw SchemaError("window needs both nmin and nmax");
    }
    cfg.window = make_window(as_int(w["nmin"], "window.nmin"), as_int(w["nmax"], "window.nmax"));
  }

  if (doc.contains("tol")) {
    cfg.tol = as_number(doc["tol"], "tol");
    if (!(cfg.tol > 0.0)) throw ValueError("tol must be positive");
  }
  if (doc.contains("levels")) {
    cfg.levels = as_int(doc["levels"], "levels");
    if (cfg.levels < 1) throw ValueError("levels must be at least 1");
  }
  if (doc.contains("hsweep")) {
    const json& hs = doc["hsweep"];
    if (!hs.is_array()) throw SchemaError("hsweep must be an array");
    cfg.hsweep.clear();
    for (size_t i = 0; i < hs.size(); ++i) {
      const double h = as_number(hs[i], "hsweep[" + std::to_string(i) + "]");
      if (!(h > 0.0)) throw ValueError("hsweep entries must be positive");
      cfg.hsweep.push_back(h);
    }
  }
  if (doc.contains("strategy")) {
    const json& s = doc["strategy"];
    if (!s.is_string()) throw SchemaError("strategy must be a string");
    const std::string name = s.get<std::string>();
    if (name == "from-r2-interlace") {
      cfg.strategy = SeedStrategy::FromR2Interlace;
    } else if (name == "continuation-in-q") {
      cfg.strategy = SeedStrategy::ContinuationInQ;
    } else {
      throw ValueError("strategy must be from-r2-interlace or continuation-in-q");
    }
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_integer() || doc["seed"].get<std::int64_t>() < 0) {
      throw SchemaError("seed must be a nonnegative integer");
    }
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("emit_timings")) {
    if (!doc["emit_timings"].is_boolean()) throw SchemaError("emit_timings must be a boolean");
    cfg.emit_timings = doc["emit_timings"].get<bool>();
  }

  validate_params(cfg.params);  // r even, s = r/2, q in (0,1), alphas positive

  cfg.kappa_given = doc.contains("kappa");
  if (cfg.params.r == 2) {
    const double pinned_or_default = default_kappa(cfg.params);
    if (cfg.kappa_given) {
      cfg.params.kappa = as_number(doc["kappa"], "kappa");
      if (degenerate_branch(cfg.params)) {
        const double pinned = pinned_or_default;
        if (std::abs(cfg.params.kappa - pinned) > 1e-9 * (1.0 + std::abs(pinned))) {
          throw ValueError("phi is an integer, so kappa is pinned to " + format_double(pinned) +
                           "; got " + format_double(cfg.params.kappa));
        }
      }
    } else {
      cfg.params.kappa = pinned_or_default;
    }
  } else if (cfg.kappa_given) {
    cfg.params.kappa = as_number(doc["kappa"], "kappa");
  }

  return cfg;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

void JsonWriter::separator() {
  if (first_.empty()) return;
  if (first_.back()) {
    first_.back() = false;
  } else {
    out_ << ",";
  }
  out_ << "\n";
  indent();
}

void JsonWriter::indent() {
  for (size_t i = 0; i < first_.size(); ++i) out_ << "  ";
}

JsonWriter& JsonWriter::begin_object() {
  if (!pending_key_) separator();
  pending_key_ = false;
  out_ << "{";
  first_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::begin_object(const std::string& key) {
  separator();
  out_ << "\"" << json_escape(key) << "\": ";
  pending_key_ = true;
  return begin_object();
}

JsonWriter& JsonWriter::end_object() {
  const bool empty = first_.back();
  first_.pop_back();
  if (!empty) {
    out_ << "\n";
    indent();
  }
  out_ << "}";
  return *this;
}

JsonWriter& JsonWriter::begin_array(const std::string& key) {
  separator();
  out_ << "\"" << json_escape(key) << "\": [";
  first_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  const bool empty = first_.back();
  first_.pop_back();
  if (!empty) {
    out_ << "\n";
    indent();
  }
  out_ << "]";
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& key, double v) {
  separator();
  out_ << "\"" << json_escape(key) << "\": " << format_double(v);
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& key, int v) {
  separator();
  out_ << "\"" << json_escape(key) << "\": " << v;
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& key, std::int64_t v) {
  separator();
  out_ << "\"" << json_escape(key) << "\": " << v;
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& key, std::uint64_t v) {
  separator();
  out_ << "\"" << json_escape(key) << "\": " << v;
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& key, bool v) {
  separator();
  out_ << "\"" << json_escape(key) << "\": " << (v ? "true" : "false");
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& key, const std::string& v) {
  separator();
  out_ << "\"" << json_escape(key) << "\": \"" << json_escape(v) << "\"";
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& key, const char* v) {
  return field(key, std::string(v));
}

JsonWriter& JsonWriter::element(double v) {
  separator();
  out_ << format_double(v);
  return *this;
}

JsonWriter& JsonWriter::element(const std::string& v) {
  separator();
  out_ << "\"" << json_escape(v) << "\"";
  return *this;
}

std::string JsonWriter::str() const { return out_.str() + "\n"; }

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) out_ << ",";
    out_ << header[i];
  }
  out_ << "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_) throw LengthMismatch("csv row width mismatch");
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) out_ << ",";
    out_ << format_double(values[i]);
  }
  out_ << "\n";
}

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw LengthMismatch("csv row width mismatch");
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ",";
    out_ << cells[i];
  }
  out_ << "\n";
}

}  // namespace qdchain
