#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cheeger/error.hpp"
#include "cheeger/kernel.hpp"

namespace cheeger {

/// Shortest-safe round-trip text for a double (17 significant digits).
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Parses {"labels": [...] (optional), "P": [[...], ...]}.
inline MarkovKernel parse_kernel_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InvalidInput, std::string("kernel JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("P") || !doc["P"].is_array()) {
    throw Error(ErrorCode::InvalidInput, "kernel JSON needs an array field \"P\"");
  }
  std::vector<std::vector<double>> rows;
  for (const auto& row : doc["P"]) {
    if (!row.is_array()) throw Error(ErrorCode::InvalidInput, "each row of P must be an array");
    std::vector<double> r;
    for (const auto& v : row) {
      if (!v.is_number()) throw Error(ErrorCode::InvalidInput, "P entries must be numbers");
      r.push_back(v.get<double>());
    }
    rows.push_back(std::move(r));
  }
  std::vector<std::string> labels;
  if (doc.contains("labels")) {
    if (!doc["labels"].is_array()) throw Error(ErrorCode::InvalidInput, "labels must be an array");
    for (const auto& l : doc["labels"]) {
      if (!l.is_string()) throw Error(ErrorCode::InvalidInput, "labels must be strings");
      labels.push_back(l.get<std::string>());
    }
  }
  return make_kernel(rows, std::move(labels));
}

inline MarkovKernel read_kernel_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_kernel_json(text.str());
}

inline std::string kernel_json(const MarkovKernel& K) {
  std::string out = "{\n";
  if (!K.labels().empty()) {
    out += "  \"labels\": [";
    for (std::size_t x = 0; x < K.n(); ++x) {
      out += (x ? ", " : "") + nlohmann::json(K.label(x)).dump();
    }
    out += "],\n";
  }
  out += "  \"P\": [\n";
  for (std::size_t x = 0; x < K.n(); ++x) {
    out += "    [";
    for (std::size_t y = 0; y < K.n(); ++y) out += (y ? ", " : "") + format_double(K(x, y));
    out += x + 1 < K.n() ? "],\n" : "]\n";
  }
  out += "  ]\n}\n";
  return out;
}

/// Writes to a sibling temp file and renames, so readers never see a partial file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + path.string());
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::InvalidInput, "write failed for " + path.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::InvalidInput, "cannot rename onto " + path.string());
  }
}

inline void write_kernel_json(const std::filesystem::path& path, const MarkovKernel& K) {
  write_file_atomic(path, kernel_json(K));
}

}  // namespace cheeger
