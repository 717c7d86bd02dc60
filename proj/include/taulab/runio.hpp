#pragma once
//! \file runio.hpp
//! Run configuration, CSV output and run manifests. Config files are flat
//! key=value text; outputs are written atomically (temp file + rename) so
//! failed runs leave nothing behind. Manifests serialize with fixed key
//! order and no timing fields, making byte-identical reruns checkable;
//! wall time goes to a sidecar file instead.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace taulab::runio {

inline std::string version_string() {
#ifdef TAULAB_VERSION_STRING
  return TAULAB_VERSION_STRING;
#else
  return "v0.0.0-unknown";
#endif
}

// Shortest-roundtrip-style fixed formatting for CSV cells.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// Key=value config files.
// ---------------------------------------------------------------------------

using KeyValues = std::map<std::string, std::string>;

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline KeyValues parse_key_values(std::istream& is) {
  KeyValues kv;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
    if (kv.count(key))
      throw std::invalid_argument("config: duplicate key '" + key + "'");
    kv[key] = value;
  }
  return kv;
}

inline KeyValues load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file: " + path);
  return parse_key_values(f);
}

// Rejects keys not in the allowed set.
inline void check_known_keys(const KeyValues& kv, const std::vector<std::string>& allowed) {
  for (const auto& [k, v] : kv) {
    bool ok = false;
    for (const auto& a : allowed)
      if (k == a) {
        ok = true;
        break;
      }
    if (!ok) throw std::invalid_argument("config: unknown key '" + k + "'");
  }
}

inline double to_double(const KeyValues& kv, const std::string& key, double fallback) {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  std::size_t pos = 0;
  const double v = std::stod(it->second, &pos);
  if (pos != it->second.size())
    throw std::invalid_argument("config: key '" + key + "' is not a number");
  return v;
}

// ---------------------------------------------------------------------------
// Atomic output.
// ---------------------------------------------------------------------------

inline std::string output_dir_override() {
  const char* dir = std::getenv("TAULAB_OUT_DIR");
  return dir ? dir : "";
}

inline std::string resolve_output_path(const std::string& path) {
  const std::string dir = output_dir_override();
  if (dir.empty() || path.empty()) return path;
  const std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(dir) / p).string();
}

inline void atomic_write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open output file: " + tmp);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw std::runtime_error("short write: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

// Buffers rows and writes the whole table atomically on close().
class CsvWriter {
 public:
  CsvWriter(std::string path, std::vector<std::string> columns)
      : path_(std::move(path)), columns_(std::move(columns)) {
    std::ostringstream os;
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      if (i) os << ',';
      os << columns_[i];
    }
    os << '\n';
    body_ = os.str();
  }

  void row(const std::vector<double>& cells) {
    if (cells.size() != columns_.size())
      throw std::invalid_argument("CsvWriter: cell count does not match header");
    std::ostringstream os;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os << ',';
      os << format_double(cells[i]);
    }
    os << '\n';
    body_ += os.str();
    ++rows_;
  }

  void row_text(const std::vector<std::string>& cells) {
    if (cells.size() != columns_.size())
      throw std::invalid_argument("CsvWriter: cell count does not match header");
    std::ostringstream os;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os << ',';
      os << cells[i];
    }
    os << '\n';
    body_ += os.str();
    ++rows_;
  }

  void close() {
    if (!path_.empty()) atomic_write_file(path_, body_);
    closed_ = true;
  }

  const std::string& body() const { return body_; }
  std::size_t row_count() const { return rows_; }

 private:
  std::string path_;
  std::vector<std::string> columns_;
  std::string body_;
  std::size_t rows_ = 0;
  bool closed_ = false;
};

// ---------------------------------------------------------------------------
// Check results and run manifests.
// ---------------------------------------------------------------------------

struct CheckResult {
  std::string id;       // stable slug
  std::string name;     // one-line description
  bool passed = false;
  double residual = 0.0;
  double limit = 0.0;
  double seconds = 0.0;  // not serialized into the manifest
};

struct RunManifest {
  nlohmann::ordered_json config;  // full resolved configuration
  std::string version;
  std::vector<CheckResult> checks;
  bool all_passed = true;
  double wall_seconds = 0.0;  // sidecar only
};

// Deterministic serialization: fixed key order, no timing data.
inline std::string manifest_to_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["version"] = m.version;
  j["config"] = m.config;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : m.checks) {
    nlohmann::ordered_json jc;
    jc["id"] = c.id;
    jc["name"] = c.name;
    jc["passed"] = c.passed;
    jc["residual"] = c.residual;
    jc["limit"] = c.limit;
    checks.push_back(jc);
  }
  j["checks"] = checks;
  j["all_passed"] = m.all_passed;
  return j.dump(2) + "\n";
}

inline void write_manifest(const std::string& path, const RunManifest& m) {
  atomic_write_file(path, manifest_to_json(m));
  std::ostringstream timing;
  timing << "wall_seconds=" << format_double(m.wall_seconds) << "\n";
  for (const auto& c : m.checks)
    timing << c.id << "_seconds=" << format_double(c.seconds) << "\n";
  atomic_write_file(path + ".timing.txt", timing.str());
}

}  // namespace taulab::runio
