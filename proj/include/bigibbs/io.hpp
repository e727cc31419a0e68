#pragma once

// JSON forms of configurations, samples and reports, plus atomic file writes.
//
//   Configuration               [[x, y], ...]
//   TwoComponentConfiguration   {"plus": [...], "minus": [...]}
//   samples file                one TwoComponentConfiguration per line (JSONL)

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bigibbs/analysis.hpp"
#include "bigibbs/config.hpp"
#include "bigibbs/error.hpp"
#include "bigibbs/oracle.hpp"
#include "bigibbs/sampler.hpp"
#include "bigibbs/stats.hpp"

namespace bigibbs {

using Json = nlohmann::ordered_json;

inline Json to_json(const Point& p) {
  Json a = Json::array();
  for (double c : p.coords()) {
    a.push_back(c);
  }
  return a;
}

inline Json to_json(const Configuration& c) {
  Json a = Json::array();
  for (const Point& p : c) {
    a.push_back(to_json(p));
  }
  return a;
}

inline Json to_json(const TwoComponentConfiguration& t) {
  Json o = Json::object();
  o["plus"] = to_json(t.plus);
  o["minus"] = to_json(t.minus);
  return o;
}

inline Point point_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) {
    throw InvalidArgument("point must be a non-empty array of numbers");
  }
  std::vector<double> coords;
  for (const Json& c : j) {
    if (!c.is_number()) {
      throw InvalidArgument("point coordinate is not a number");
    }
    coords.push_back(c.get<double>());
  }
  return Point(std::move(coords));
}

inline Configuration configuration_from_json(const Json& j) {
  if (!j.is_array()) {
    throw InvalidArgument("configuration must be an array of points");
  }
  std::vector<Point> pts;
  for (const Json& p : j) {
    pts.push_back(point_from_json(p));
  }
  return Configuration(std::move(pts));
}

inline TwoComponentConfiguration two_component_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("plus") || !j.contains("minus")) {
    throw InvalidArgument("sample must be an object with \"plus\" and \"minus\"");
  }
  TwoComponentConfiguration t{configuration_from_json(j.at("plus")),
                              configuration_from_json(j.at("minus"))};
  if (!check_disjoint(t)) {
    throw DuplicatePoint("sample has a point in both species");
  }
  return t;
}

inline void write_jsonl(std::ostream& out, std::span<const TwoComponentConfiguration> samples) {
  for (const auto& s : samples) {
    out << to_json(s).dump() << '\n';
  }
}

inline std::vector<TwoComponentConfiguration> read_jsonl(std::istream& in) {
  std::vector<TwoComponentConfiguration> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    try {
      out.push_back(two_component_from_json(Json::parse(line)));
    } catch (const Json::exception& e) {
      throw InvalidArgument("samples line " + std::to_string(n) + ": " + e.what());
    } catch (const Error& e) {
      throw InvalidArgument("samples line " + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

inline std::vector<TwoComponentConfiguration> read_jsonl_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidArgument("cannot open samples file " + path.string());
  }
  return read_jsonl(in);
}

inline Json to_json(const EstimateWithError& e) {
  return Json{{"estimate", e.estimate}, {"stderr", e.std_err}, {"n_samples", e.n_samples}};
}

inline Json to_json(const IdentityReport& r) {
  Json o{{"identity", r.identity}, {"lhs", to_json(r.lhs)}, {"rhs", to_json(r.rhs)}};
  // +-inf is not representable in JSON; write it as a string.
  if (std::isfinite(r.z_score)) {
    o["z"] = r.z_score;
  } else {
    o["z"] = r.z_score > 0 ? "inf" : "-inf";
  }
  o["pass"] = r.pass;
  if (!r.note.empty()) {
    o["note"] = r.note;
  }
  return o;
}

inline Json to_json(const OracleResult& r) {
  return Json{{"value", r.value}, {"truncation_bound", r.truncation_bound},
              {"mc_stderr", r.mc_stderr}};
}

inline Json to_json(const AcceptanceStats& s) {
  Json o = Json::object();
  for (Move m : {Move::birth_plus, Move::death_plus, Move::birth_minus, Move::death_minus}) {
    o[to_string(m)] = Json{{"proposed", s[m].proposed},
                           {"accepted", s[m].accepted},
                           {"rate", s[m].rate()}};
  }
  return o;
}

// Writes via a temporary file in the same directory and renames it into place.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw InvalidArgument("cannot write " + tmp.string());
    }
    out << content;
    out.flush();
    if (!out) {
      throw InvalidArgument("write to " + tmp.string() + " failed");
    }
  }
  std::filesystem::rename(tmp, path);
}

} // namespace bigibbs
