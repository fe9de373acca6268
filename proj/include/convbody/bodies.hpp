#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "convbody/vec.hpp"

namespace convbody {

// Convex symmetric bodies with the origin interior, described by exact
// oracles. No boundary discretization is ever stored; everything downstream
// works through support / membership / gauge evaluations.

struct Ball {
  double radius;
};
struct Box {
  Vec half_sides;
};
struct Ellipsoid {
  Vec semi_axes;  // axis-aligned
};
struct HPolytope {
  std::vector<Vec> rows;  // <a_i, y> <= b_i, rows closed under negation
  Vec offsets;
};
struct VPolytope {
  std::vector<Vec> vertices;  // closed under negation
};
struct CrossPolytope {
  double scale;
};

using BodyShape = std::variant<Ball, Box, Ellipsoid, HPolytope, VPolytope, CrossPolytope>;

class BodyDescriptor {
 public:
  static BodyDescriptor ball(std::size_t n, double radius);
  static BodyDescriptor box(Vec half_sides);
  static BodyDescriptor ellipsoid(Vec semi_axes);
  static BodyDescriptor hpolytope(std::vector<Vec> rows, Vec offsets);
  static BodyDescriptor vpolytope(std::vector<Vec> vertices);
  static BodyDescriptor crosspolytope(std::size_t n, double scale);

  std::size_t dim() const noexcept { return dim_; }
  const BodyShape& shape() const noexcept { return shape_; }

  bool operator==(const BodyDescriptor& other) const;

  std::string type_name() const;

 private:
  BodyDescriptor(std::size_t n, BodyShape shape) : dim_(n), shape_(std::move(shape)) {}
  std::size_t dim_;
  BodyShape shape_;
};

struct SupportResult {
  double value;
  Vec witness;  // a maximizer of <y, u> on the body
};

// Support function h(u) = max_{y in body} <y, u> for unit u.
SupportResult support(const BodyDescriptor& body, const Direction& u);

// Positively homogeneous extension: works for any w, including w = 0
// (value 0, witness 0).
SupportResult support_raw(const BodyDescriptor& body, const Vec& w);

// Exact membership test, y in body (boundary included).
bool membership(const BodyDescriptor& body, const Vec& y);

// Minkowski functional |x|_K. Closed forms for all H-described variants;
// bisection on membership for vertex-described ones. x must be nonzero.
double gauge(const BodyDescriptor& body, const Vec& x);

// sup_{y in body} |y|_2, used for solver step-size bounds.
double outer_radius(const BodyDescriptor& body);

// H-representation rows for box / hpolytope variants; vertices for
// vpolytope / crosspolytope. Throw for other variants.
void hrep_rows(const BodyDescriptor& body, std::vector<Vec>* rows, Vec* offsets);
std::vector<Vec> vrep_vertices(const BodyDescriptor& body);
bool is_polytopal(const BodyDescriptor& body);
bool has_hrep(const BodyDescriptor& body);

// JSON schema:
//   {"type":"ball","dim":n,"radius":r}
//   {"type":"box","dim":n,"half_sides":[...]}
//   {"type":"ellipsoid","dim":n,"semi_axes":[...]}
//   {"type":"hpolytope","dim":n,"rows":[[...],...],"offsets":[...]}
//   {"type":"vpolytope","dim":n,"vertices":[[...],...]}
//   {"type":"crosspolytope","dim":n,"scale":s}
BodyDescriptor body_from_json_text(const std::string& text);
std::string body_to_json_text(const BodyDescriptor& body);

}  // namespace convbody
