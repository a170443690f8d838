#pragma once

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "diffgeo/circle_diffeo.hpp"
#include "diffgeo/funcspace.hpp"
#include "diffgeo/interval_diffeo.hpp"

namespace diffgeo {

using nlohmann::json;

// Shortest round-trip decimal form, for diffable CSV artifacts.
inline std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline json to_json(const GridFunction& g) {
  json j;
  j["n"] = g.n;
  j["values"] = g.values;
  if (!g.derivs.empty()) j["derivs"] = g.derivs;
  return j;
}

inline GridFunction grid_from_json(const json& j) {
  GridFunction g;
  g.n = j.at("n").get<int>();
  g.values = j.at("values").get<std::vector<double>>();
  if (j.contains("derivs")) g.derivs = j.at("derivs").get<std::vector<std::vector<double>>>();
  validate(g);
  return g;
}

inline json to_json(const IntervalDiffeo& f) {
  json j;
  j["manifold"] = "interval";
  j["order"] = f.order;
  j["n"] = f.n;
  j["jets"] = f.jets;
  if (!f.family.empty()) {
    j["family"] = json{{"name", f.family}, {"params", f.family_params}};
  }
  return j;
}

inline json to_json(const CircleDiffeo& f) {
  json j;
  j["manifold"] = "circle";
  j["order"] = f.order;
  j["n"] = f.n;
  j["jets"] = f.lift_jets;
  if (!f.family.empty()) {
    j["family"] = json{{"name", f.family}, {"params", f.family_params}};
  }
  return j;
}

inline json to_json(const PhiCoords& c) {
  json j;
  j["order"] = c.order;
  j["head"] = to_json(c.head);
  j["initial_values"] = c.initial_values;
  return j;
}

inline IntervalDiffeo interval_from_json(const json& j) {
  if (j.at("manifold").get<std::string>() != "interval")
    throw std::invalid_argument("expected an interval diffeomorphism");
  IntervalDiffeo f;
  f.order = j.at("order").get<int>();
  f.n = j.at("n").get<int>();
  f.jets = j.at("jets").get<std::vector<std::vector<double>>>();
  if (j.contains("family")) {
    f.family = j.at("family").at("name").get<std::string>();
    f.family_params = j.at("family").at("params").get<std::vector<double>>();
  }
  validate(f);
  return f;
}

inline CircleDiffeo circle_from_json(const json& j) {
  if (j.at("manifold").get<std::string>() != "circle")
    throw std::invalid_argument("expected a circle diffeomorphism");
  CircleDiffeo f;
  f.order = j.at("order").get<int>();
  f.n = j.at("n").get<int>();
  f.lift_jets = j.at("jets").get<std::vector<std::vector<double>>>();
  if (j.contains("family")) {
    f.family = j.at("family").at("name").get<std::string>();
    f.family_params = j.at("family").at("params").get<std::vector<double>>();
  }
  normalize_circle(f);
  return f;
}

inline std::string manifold_of(const json& j) {
  return j.at("manifold").get<std::string>();
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace diffgeo
