#pragma once

// JSON schemas for action and form files, plus the report envelope the CLI
// emits. Inputs are strict: unknown keys, wrong types, ragged arrays and
// out-of-range entries are schema errors, and the optional "schema" field
// must equal 1 when present. Serialization uses ordered JSON throughout so
// reports are byte-stable across runs.
//
// Action file:
//   { "p": 2, "k": 1, "m": 1, "quotient_genus": 1,
//     "theta": [[1, 0]],                      // m rows x 2g entries
//     "branches": [{"h": [1], "count": 4}] }  // optional
// Form file:
//   { "p": 2, "k": 2, "gram": [[0, 2], [2, 0]] }  // entries in [0, p^k)

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "surfact/action.hpp"
#include "surfact/classify.hpp"
#include "surfact/error.hpp"
#include "surfact/matmod.hpp"
#include "surfact/residue.hpp"
#include "surfact/symform.hpp"
#include "surfact/version.hpp"

namespace surfact {

using ojson = nlohmann::ordered_json;

namespace detail {

inline std::int64_t require_int(const ojson& j, const std::string& key) {
  if (!j.contains(key)) fail(errc::schema, "missing field \"" + key + "\"");
  const auto& v = j.at(key);
  if (!v.is_number_integer()) fail(errc::schema, "field \"" + key + "\" must be an integer");
  return v.get<std::int64_t>();
}

inline void reject_unknown(const ojson& j, const std::vector<std::string>& allowed) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const auto& a : allowed) ok = ok || key == a;
    if (!ok) fail(errc::schema, "unknown field \"" + key + "\"");
  }
}

inline void check_schema_field(const ojson& j) {
  if (j.contains("schema") && (!j.at("schema").is_number_integer() ||
                               j.at("schema").get<std::int64_t>() != kSchemaVersion))
    fail(errc::schema, "unsupported schema version");
}

inline MatZ matrix_from_json(const ojson& rows, int want_rows, int want_cols, const Modulus& mod,
                             const std::string& what) {
  if (!rows.is_array()) fail(errc::schema, what + " must be an array of rows");
  if (static_cast<int>(rows.size()) != want_rows)
    fail(errc::schema, what + " must have " + std::to_string(want_rows) + " rows");
  MatZ M(want_rows, want_cols, mod);
  for (int i = 0; i < want_rows; ++i) {
    const auto& row = rows.at(i);
    if (!row.is_array() || static_cast<int>(row.size()) != want_cols)
      fail(errc::schema, what + " row " + std::to_string(i) + " must have " +
                             std::to_string(want_cols) + " entries");
    for (int j = 0; j < want_cols; ++j) {
      const auto& e = row.at(j);
      if (!e.is_number_integer())
        fail(errc::schema, what + " entry (" + std::to_string(i) + "," + std::to_string(j) +
                               ") must be an integer");
      std::int64_t v = e.get<std::int64_t>();
      if (v < 0 || v >= mod.pk())
        fail(errc::schema, what + " entry (" + std::to_string(i) + "," + std::to_string(j) +
                               ") out of [0, p^k)");
      M.set(i, j, v);
    }
  }
  return M;
}

}  // namespace detail

inline Modulus modulus_from_json(const ojson& j) {
  std::int64_t p = detail::require_int(j, "p");
  std::int64_t k = detail::require_int(j, "k");
  if (k < 1 || k > 62) fail(errc::schema, "k out of range");
  try {
    return Modulus(p, static_cast<int>(k));
  } catch (const Error& e) {
    fail(errc::schema, e.what());
  }
}

inline ActionDescriptor action_from_json(const ojson& j) {
  if (!j.is_object()) fail(errc::schema, "action file must be a JSON object");
  detail::reject_unknown(j, {"schema", "p", "k", "m", "quotient_genus", "theta", "branches"});
  detail::check_schema_field(j);
  Modulus mod = modulus_from_json(j);
  std::int64_t m = detail::require_int(j, "m");
  std::int64_t g = detail::require_int(j, "quotient_genus");
  if (m < 1 || m > 64) fail(errc::schema, "m out of range");
  if (g < 0 || g > 1'000'000) fail(errc::schema, "quotient_genus out of range");
  if (!j.contains("theta")) fail(errc::schema, "missing field \"theta\"");
  MatZ theta = detail::matrix_from_json(j.at("theta"), static_cast<int>(m),
                                        2 * static_cast<int>(g), mod, "theta");
  CharFunction branches;
  if (j.contains("branches")) {
    const auto& arr = j.at("branches");
    if (!arr.is_array()) fail(errc::schema, "branches must be an array");
    for (std::size_t idx = 0; idx < arr.size(); ++idx) {
      const auto& b = arr.at(idx);
      if (!b.is_object()) fail(errc::schema, "branches[" + std::to_string(idx) + "] must be an object");
      detail::reject_unknown(b, {"h", "count"});
      if (!b.contains("h") || !b.at("h").is_array() ||
          static_cast<int>(b.at("h").size()) != static_cast<int>(m))
        fail(errc::schema, "branches[" + std::to_string(idx) + "].h must have m entries");
      Vec h(m);
      for (std::int64_t i = 0; i < m; ++i) {
        const auto& e = b.at("h").at(i);
        if (!e.is_number_integer()) fail(errc::schema, "branch entries must be integers");
        std::int64_t v = e.get<std::int64_t>();
        if (v < 0 || v >= mod.pk())
          fail(errc::schema, "branches[" + std::to_string(idx) + "].h entry out of [0, p^k)");
        h[i] = v;
      }
      std::int64_t count = detail::require_int(b, "count");
      if (count < 1) fail(errc::schema, "branches[" + std::to_string(idx) + "].count must be positive");
      if (branches.count(h)) fail(errc::schema, "duplicate branch vector in branches");
      branches[h] = count;
    }
  }
  return ActionDescriptor{mod, static_cast<int>(m), static_cast<int>(g), theta, branches};
}

inline AlternatingForm form_from_json(const ojson& j) {
  if (!j.is_object()) fail(errc::schema, "form file must be a JSON object");
  detail::reject_unknown(j, {"schema", "p", "k", "gram"});
  detail::check_schema_field(j);
  Modulus mod = modulus_from_json(j);
  if (!j.contains("gram") || !j.at("gram").is_array())
    fail(errc::schema, "missing \"gram\" array");
  int m = static_cast<int>(j.at("gram").size());
  MatZ gram = detail::matrix_from_json(j.at("gram"), m, m, mod, "gram");
  return validate_alternating(gram);
}

inline ojson matrix_to_json(const MatZ& M) {
  ojson rows = ojson::array();
  for (int i = 0; i < M.rows(); ++i) {
    ojson row = ojson::array();
    for (int j = 0; j < M.cols(); ++j) row.push_back(M.at(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline ojson action_to_json(const ActionDescriptor& A) {
  ojson j;
  j["schema"] = kSchemaVersion;
  j["p"] = A.mod.p();
  j["k"] = A.mod.k();
  j["m"] = A.m;
  j["quotient_genus"] = A.g;
  j["theta"] = matrix_to_json(A.theta);
  if (!A.branches.empty()) {
    ojson arr = ojson::array();
    for (const auto& [h, count] : A.branches) {
      ojson b;
      b["h"] = h;
      b["count"] = count;
      arr.push_back(std::move(b));
    }
    j["branches"] = std::move(arr);
  }
  return j;
}

inline ojson form_to_json(const AlternatingForm& F) {
  ojson j;
  j["schema"] = kSchemaVersion;
  j["p"] = F.mod.p();
  j["k"] = F.mod.k();
  j["gram"] = matrix_to_json(F.gram);
  return j;
}

// Characteristic functions render as an object keyed by the vector text,
// in canonical (map) order: {"[1,0]": 2, ...}.
inline ojson char_function_to_json(const CharFunction& l) {
  ojson j = ojson::object();
  for (const auto& [h, count] : l) {
    std::string key = "[";
    for (std::size_t i = 0; i < h.size(); ++i) key += (i ? "," : "") + std::to_string(h[i]);
    key += "]";
    j[key] = count;
  }
  return j;
}

inline std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::schema, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline ojson parse_json_file(const std::string& path) {
  std::string text = read_file(path);
  ojson j = ojson::parse(text, nullptr, false);
  if (j.is_discarded()) fail(errc::schema, "malformed JSON in " + path);
  return j;
}

inline ojson make_report(const std::string& command,
                         const std::vector<std::string>& input_paths, ojson result) {
  ojson report;
  report["schema"] = kSchemaVersion;
  report["version"] = kVersion;
  report["command"] = command;
  ojson inputs = ojson::array();
  for (const auto& path : input_paths) {
    ojson entry;
    entry["path"] = path;
    entry["digest"] = "fnv1a64:" + fnv1a64_hex(read_file(path));
    inputs.push_back(std::move(entry));
  }
  report["inputs"] = std::move(inputs);
  report["result"] = std::move(result);
  return report;
}

}  // namespace surfact
