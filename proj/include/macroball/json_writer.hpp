#pragma once

// Deterministic JSON text: insertion-ordered keys, doubles as "{:.17g}",
// non-finite doubles as null.

#include <cmath>
#include <string>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace macroball {

using Json = nlohmann::ordered_json;

namespace detail {

inline void write_json(const Json& j, std::string& out, int indent, int level) {
  const auto newline = [&](int lvl) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * lvl), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(level + 1);
        out += Json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        write_json(it.value(), out, indent, level + 1);
      }
      newline(level);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ',';
        first = false;
        newline(level + 1);
        write_json(v, out, indent, level + 1);
      }
      newline(level);
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? fmt::format("{:.17g}", v) : std::string("null");
      return;
    }
    default:
      out += j.dump();
      return;
  }
}

}  // namespace detail

/// indent < 0 gives compact output.
inline std::string dump_json(const Json& j, int indent = 2) {
  std::string out;
  detail::write_json(j, out, indent, 0);
  return out;
}

inline std::string format_double(double v) { return fmt::format("{:.17g}", v); }

}  // namespace macroball
