#pragma once

// JSON coefficient files:
//   { "n": 3, "coefficients": [ { "l": 1, "k": [0, 0], "re": 1.0, "im": 0.0 }, ... ] }
// Unknown fields and duplicate indices are rejected.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hsu/errors.hpp"
#include "hsu/uncertainty.hpp"

namespace hsu {

namespace detail {

inline void require_keys(const nlohmann::json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  if (!obj.is_object()) throw InputError(where + ": expected a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw InputError(where + ": unknown field \"" + key + "\"");
  }
  for (const auto& key : allowed) {
    if (!obj.contains(key)) throw InputError(where + ": missing field \"" + key + "\"");
  }
}

inline std::int64_t json_int(const nlohmann::json& v, const std::string& where) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::isfinite(d) && d == std::floor(d) && std::fabs(d) < 9e15) return static_cast<std::int64_t>(d);
  }
  throw InputError(where + ": expected an integer");
}

inline double json_real(const nlohmann::json& v, const std::string& where) {
  if (!v.is_number()) throw InputError(where + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw InputError(where + ": value is not finite");
  return d;
}

}  // namespace detail

inline FourierExpansion parse_coefficients(const nlohmann::json& doc) {
  detail::require_keys(doc, {"n", "coefficients"}, "coefficient file");
  const std::int64_t n = detail::json_int(doc["n"], "field n");
  if (n < 2 || n > 10000) throw InputError("field n: sphere dimension must be in [2, 10000]");
  const SphereDim d(static_cast<int>(n));
  const auto& list = doc["coefficients"];
  if (!list.is_array()) throw InputError("field coefficients: expected an array");
  FourierExpansion f(d);
  std::size_t i = 0;
  for (const auto& item : list) {
    const std::string where = "coefficients[" + std::to_string(i++) + "]";
    detail::require_keys(item, {"l", "k", "re", "im"}, where);
    MultiIndex idx;
    idx.l = detail::json_int(item["l"], where + ".l");
    if (!item["k"].is_array()) throw InputError(where + ".k: expected an array");
    for (const auto& v : item["k"]) idx.k.push_back(detail::json_int(v, where + ".k"));
    if (!idx.valid_for(d)) {
      throw InputError(where + ": index " + idx.str() + " is not valid for S^" + std::to_string(n));
    }
    const Complex c(detail::json_real(item["re"], where + ".re"),
                    detail::json_real(item["im"], where + ".im"));
    if (f.find(idx)) throw InputError(where + ": duplicate index " + idx.str());
    f.add(std::move(idx), c);
  }
  return f;
}

inline FourierExpansion read_coefficients(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  return parse_coefficients(doc);
}

inline FourierExpansion read_coefficients_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open coefficient file " + path);
  return read_coefficients(in);
}

inline nlohmann::json to_json(const FourierExpansion& f) {
  nlohmann::json doc;
  doc["n"] = f.dim().n();
  auto list = nlohmann::json::array();
  for (const auto& [idx, c] : f.coefficients()) {
    list.push_back({{"l", idx.l}, {"k", idx.k}, {"re", c.real()}, {"im", c.imag()}});
  }
  doc["coefficients"] = std::move(list);
  return doc;
}

inline void write_coefficients(std::ostream& out, const FourierExpansion& f) {
  out << to_json(f).dump(2) << '\n';
}

}  // namespace hsu
