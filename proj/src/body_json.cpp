#include <stdexcept>

#include <json.hpp>

#include "convbody/bodies.hpp"

namespace convbody {

namespace {

using nlohmann::json;

Vec vec_field(const json& j, const char* name) {
  if (!j.contains(name) || !j[name].is_array())
    throw std::invalid_argument(std::string("body json: missing array field '") + name + "'");
  Vec v;
  for (const auto& x : j[name]) v.push_back(x.get<double>());
  return v;
}

std::vector<Vec> matrix_field(const json& j, const char* name) {
  if (!j.contains(name) || !j[name].is_array())
    throw std::invalid_argument(std::string("body json: missing array field '") + name + "'");
  std::vector<Vec> rows;
  for (const auto& r : j[name]) {
    Vec v;
    for (const auto& x : r) v.push_back(x.get<double>());
    rows.push_back(std::move(v));
  }
  return rows;
}

}  // namespace

BodyDescriptor body_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("body json: parse error: ") + e.what());
  }
  if (!j.contains("type") || !j["type"].is_string())
    throw std::invalid_argument("body json: missing string field 'type'");
  if (!j.contains("dim") || !j["dim"].is_number_unsigned())
    throw std::invalid_argument("body json: missing positive integer field 'dim'");
  std::string type = j["type"].get<std::string>();
  std::size_t n = j["dim"].get<std::size_t>();

  auto check_dim = [&](std::size_t got, const char* what) {
    if (got != n) throw std::invalid_argument(std::string("body json: ") + what + " does not match 'dim'");
  };

  if (type == "ball") return BodyDescriptor::ball(n, j.value("radius", 0.0));
  if (type == "box") {
    Vec s = vec_field(j, "half_sides");
    check_dim(s.size(), "half_sides length");
    return BodyDescriptor::box(std::move(s));
  }
  if (type == "ellipsoid") {
    Vec a = vec_field(j, "semi_axes");
    check_dim(a.size(), "semi_axes length");
    return BodyDescriptor::ellipsoid(std::move(a));
  }
  if (type == "hpolytope") {
    std::vector<Vec> rows = matrix_field(j, "rows");
    Vec b = vec_field(j, "offsets");
    for (const Vec& r : rows) check_dim(r.size(), "row length");
    return BodyDescriptor::hpolytope(std::move(rows), std::move(b));
  }
  if (type == "vpolytope") {
    std::vector<Vec> verts = matrix_field(j, "vertices");
    for (const Vec& v : verts) check_dim(v.size(), "vertex length");
    return BodyDescriptor::vpolytope(std::move(verts));
  }
  if (type == "crosspolytope") return BodyDescriptor::crosspolytope(n, j.value("scale", 0.0));
  throw std::invalid_argument("body json: unknown type '" + type + "'");
}

std::string body_to_json_text(const BodyDescriptor& body) {
  json j;
  j["type"] = body.type_name();
  j["dim"] = body.dim();
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) j["radius"] = s.radius;
        else if constexpr (std::is_same_v<T, Box>) j["half_sides"] = s.half_sides;
        else if constexpr (std::is_same_v<T, Ellipsoid>) j["semi_axes"] = s.semi_axes;
        else if constexpr (std::is_same_v<T, HPolytope>) {
          j["rows"] = s.rows;
          j["offsets"] = s.offsets;
        } else if constexpr (std::is_same_v<T, VPolytope>) j["vertices"] = s.vertices;
        else j["scale"] = s.scale;
      },
      body.shape());
  return j.dump();
}

}  // namespace convbody
