#include "convbody/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "convbody/intersection.hpp"
#include "convbody/simplex.hpp"

namespace convbody {

namespace {

void require_positive(const Vec& v, const char* what) {
  for (double x : v)
    if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": entries must be positive and finite");
}

// Rank of a small dense matrix, with row scaling. Used to certify that the
// origin is interior (a symmetric polytope needs spanning rows/vertices).
std::size_t matrix_rank(std::vector<Vec> rows) {
  std::size_t rank = 0;
  if (rows.empty()) return 0;
  std::size_t ncols = rows[0].size();
  for (std::size_t col = 0; col < ncols && rank < rows.size(); ++col) {
    std::size_t piv = rank;
    for (std::size_t i = rank + 1; i < rows.size(); ++i)
      if (std::fabs(rows[i][col]) > std::fabs(rows[piv][col])) piv = i;
    if (std::fabs(rows[piv][col]) < 1e-12) continue;
    std::swap(rows[piv], rows[rank]);
    for (std::size_t i = rank + 1; i < rows.size(); ++i) {
      double f = rows[i][col] / rows[rank][col];
      for (std::size_t j = col; j < ncols; ++j) rows[i][j] -= f * rows[rank][j];
    }
    ++rank;
  }
  return rank;
}

bool has_negated_partner(const std::vector<Vec>& vecs, const Vec& v, double scale_tol) {
  for (const Vec& w : vecs) {
    double worst = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) worst = std::max(worst, std::fabs(w[j] + v[j]));
    if (worst <= scale_tol) return true;
  }
  return false;
}

}  // namespace

BodyDescriptor BodyDescriptor::ball(std::size_t n, double radius) {
  if (n == 0) throw std::invalid_argument("ball: dimension must be >= 1");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("ball: radius must be positive");
  return BodyDescriptor(n, Ball{radius});
}

BodyDescriptor BodyDescriptor::box(Vec half_sides) {
  if (half_sides.empty()) throw std::invalid_argument("box: dimension must be >= 1");
  require_positive(half_sides, "box half-sides");
  std::size_t n = half_sides.size();
  return BodyDescriptor(n, Box{std::move(half_sides)});
}

BodyDescriptor BodyDescriptor::ellipsoid(Vec semi_axes) {
  if (semi_axes.empty()) throw std::invalid_argument("ellipsoid: dimension must be >= 1");
  require_positive(semi_axes, "ellipsoid semi-axes");
  std::size_t n = semi_axes.size();
  return BodyDescriptor(n, Ellipsoid{std::move(semi_axes)});
}

BodyDescriptor BodyDescriptor::hpolytope(std::vector<Vec> rows, Vec offsets) {
  if (rows.empty()) throw std::invalid_argument("hpolytope: needs at least one row");
  std::size_t n = rows[0].size();
  if (n == 0) throw std::invalid_argument("hpolytope: dimension must be >= 1");
  if (offsets.size() != rows.size()) throw std::invalid_argument("hpolytope: rows/offsets size mismatch");
  double scale = 0.0;
  for (const Vec& r : rows) {
    if (r.size() != n) throw std::invalid_argument("hpolytope: ragged rows");
    if (!all_finite(r)) throw std::invalid_argument("hpolytope: non-finite row");
    scale = std::max(scale, linf_norm(r));
  }
  for (double b : offsets)
    if (!(b > 0.0) || !std::isfinite(b)) throw std::invalid_argument("hpolytope: offsets must be positive (origin interior)");
  for (const Vec& r : rows)
    if (!has_negated_partner(rows, r, 1e-9 * std::max(1.0, scale)))
      throw std::invalid_argument("hpolytope: constraint set is not symmetric");
  if (matrix_rank(rows) < n)
    throw std::invalid_argument("hpolytope: rows do not span the space (unbounded body)");
  return BodyDescriptor(n, HPolytope{std::move(rows), std::move(offsets)});
}

BodyDescriptor BodyDescriptor::vpolytope(std::vector<Vec> vertices) {
  if (vertices.empty()) throw std::invalid_argument("vpolytope: needs vertices");
  std::size_t n = vertices[0].size();
  if (n == 0) throw std::invalid_argument("vpolytope: dimension must be >= 1");
  double scale = 0.0;
  for (const Vec& v : vertices) {
    if (v.size() != n) throw std::invalid_argument("vpolytope: ragged vertices");
    if (!all_finite(v)) throw std::invalid_argument("vpolytope: non-finite vertex");
    scale = std::max(scale, linf_norm(v));
  }
  for (const Vec& v : vertices)
    if (!has_negated_partner(vertices, v, 1e-9 * std::max(1.0, scale)))
      throw std::invalid_argument("vpolytope: vertex set is not closed under negation");
  if (matrix_rank(vertices) < n)
    throw std::invalid_argument("vpolytope: vertices do not span the space (origin not interior)");
  return BodyDescriptor(n, VPolytope{std::move(vertices)});
}

BodyDescriptor BodyDescriptor::crosspolytope(std::size_t n, double scale) {
  if (n == 0) throw std::invalid_argument("crosspolytope: dimension must be >= 1");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("crosspolytope: scale must be positive");
  return BodyDescriptor(n, CrossPolytope{scale});
}

bool BodyDescriptor::operator==(const BodyDescriptor& other) const {
  if (dim_ != other.dim_ || shape_.index() != other.shape_.index()) return false;
  return std::visit(
      [&](const auto& a) {
        using T = std::decay_t<decltype(a)>;
        const T& b = std::get<T>(other.shape_);
        if constexpr (std::is_same_v<T, Ball>) return a.radius == b.radius;
        else if constexpr (std::is_same_v<T, Box>) return a.half_sides == b.half_sides;
        else if constexpr (std::is_same_v<T, Ellipsoid>) return a.semi_axes == b.semi_axes;
        else if constexpr (std::is_same_v<T, HPolytope>) return a.rows == b.rows && a.offsets == b.offsets;
        else if constexpr (std::is_same_v<T, VPolytope>) return a.vertices == b.vertices;
        else return a.scale == b.scale;
      },
      shape_);
}

std::string BodyDescriptor::type_name() const {
  switch (shape_.index()) {
    case 0: return "ball";
    case 1: return "box";
    case 2: return "ellipsoid";
    case 3: return "hpolytope";
    case 4: return "vpolytope";
    default: return "crosspolytope";
  }
}

SupportResult support_raw(const BodyDescriptor& body, const Vec& w) {
  if (w.size() != body.dim()) throw std::invalid_argument("support: dimension mismatch");
  const std::size_t n = body.dim();
  if (norm2(w) == 0.0) return SupportResult{0.0, Vec(n, 0.0)};

  return std::visit(
      [&](const auto& s) -> SupportResult {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) {
          double nw = norm2(w);
          return {s.radius * nw, (s.radius / nw) * w};
        } else if constexpr (std::is_same_v<T, Box>) {
          double val = 0.0;
          Vec y(n);
          for (std::size_t j = 0; j < n; ++j) {
            val += s.half_sides[j] * std::fabs(w[j]);
            y[j] = (w[j] >= 0.0) ? s.half_sides[j] : -s.half_sides[j];
          }
          return {val, std::move(y)};
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          double q = 0.0;
          for (std::size_t j = 0; j < n; ++j) {
            double t = s.semi_axes[j] * w[j];
            q += t * t;
          }
          double val = std::sqrt(q);
          Vec y(n);
          for (std::size_t j = 0; j < n; ++j) y[j] = s.semi_axes[j] * s.semi_axes[j] * w[j] / val;
          return {val, std::move(y)};
        } else if constexpr (std::is_same_v<T, HPolytope>) {
          std::vector<LpRow> rows(s.rows.size());
          for (std::size_t i = 0; i < s.rows.size(); ++i) rows[i] = LpRow{s.rows[i], s.offsets[i]};
          SupportSolveReport rep = lp_support_raw(rows, w);
          return {rep.value, rep.witness};
        } else if constexpr (std::is_same_v<T, VPolytope>) {
          double best = -std::numeric_limits<double>::infinity();
          std::size_t arg = 0;
          for (std::size_t i = 0; i < s.vertices.size(); ++i) {
            double v = dot(s.vertices[i], w);
            if (v > best) {
              best = v;
              arg = i;
            }
          }
          return {best, s.vertices[arg]};
        } else {  // CrossPolytope
          std::size_t arg = 0;
          for (std::size_t j = 1; j < n; ++j)
            if (std::fabs(w[j]) > std::fabs(w[arg])) arg = j;
          double val = s.scale * std::fabs(w[arg]);
          Vec y(n, 0.0);
          y[arg] = (w[arg] >= 0.0) ? s.scale : -s.scale;
          return {val, std::move(y)};
        }
      },
      body.shape());
}

SupportResult support(const BodyDescriptor& body, const Direction& u) {
  return support_raw(body, u.coords());
}

bool membership(const BodyDescriptor& body, const Vec& y) {
  if (y.size() != body.dim()) throw std::invalid_argument("membership: dimension mismatch");
  const std::size_t n = body.dim();
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return norm2(y) <= s.radius;
        } else if constexpr (std::is_same_v<T, Box>) {
          for (std::size_t j = 0; j < n; ++j)
            if (std::fabs(y[j]) > s.half_sides[j]) return false;
          return true;
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          double q = 0.0;
          for (std::size_t j = 0; j < n; ++j) {
            double t = y[j] / s.semi_axes[j];
            q += t * t;
          }
          return q <= 1.0;
        } else if constexpr (std::is_same_v<T, HPolytope>) {
          for (std::size_t i = 0; i < s.rows.size(); ++i)
            if (dot(s.rows[i], y) > s.offsets[i]) return false;
          return true;
        } else if constexpr (std::is_same_v<T, VPolytope>) {
          // Feasibility of y = sum theta_i v_i, theta >= 0, sum theta = 1.
          LpProblem lp;
          std::size_t k = s.vertices.size();
          lp.nvars = k;
          lp.objective.assign(k, 0.0);
          lp.a_eq.assign(n + 1, Vec(k, 0.0));
          lp.b_eq.assign(n + 1, 0.0);
          for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < k; ++i) lp.a_eq[j][i] = s.vertices[i][j];
            lp.b_eq[j] = y[j];
          }
          for (std::size_t i = 0; i < k; ++i) lp.a_eq[n][i] = 1.0;
          lp.b_eq[n] = 1.0;
          return simplex_solve(lp).status == LpStatus::optimal;
        } else {  // CrossPolytope
          return l1_norm(y) <= s.scale;
        }
      },
      body.shape());
}

double gauge(const BodyDescriptor& body, const Vec& x) {
  if (x.size() != body.dim()) throw std::invalid_argument("gauge: dimension mismatch");
  if (norm2(x) == 0.0) throw std::invalid_argument("gauge: x must be nonzero");
  const std::size_t n = body.dim();
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return norm2(x) / s.radius;
        } else if constexpr (std::is_same_v<T, Box>) {
          double g = 0.0;
          for (std::size_t j = 0; j < n; ++j) g = std::max(g, std::fabs(x[j]) / s.half_sides[j]);
          return g;
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          double q = 0.0;
          for (std::size_t j = 0; j < n; ++j) {
            double t = x[j] / s.semi_axes[j];
            q += t * t;
          }
          return std::sqrt(q);
        } else if constexpr (std::is_same_v<T, HPolytope>) {
          // Symmetric rows make max_i <a_i, x> / b_i the exact gauge.
          double g = 0.0;
          for (std::size_t i = 0; i < s.rows.size(); ++i)
            g = std::max(g, dot(s.rows[i], x) / s.offsets[i]);
          return g;
        } else if constexpr (std::is_same_v<T, VPolytope>) {
          // Bisection on membership(x / g), relative tolerance 1e-12.
          double hi = 1.0;
          int guard = 0;
          while (!membership(body, (1.0 / hi) * x)) {
            hi *= 2.0;
            if (++guard > 200) throw std::invalid_argument("gauge: vpolytope bracket failure");
          }
          double lo = 0.0;
          while (hi - lo > 1e-12 * hi) {
            double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            if (membership(body, (1.0 / mid) * x))
              hi = mid;
            else
              lo = mid;
          }
          return hi;
        } else {  // CrossPolytope
          return l1_norm(x) / s.scale;
        }
      },
      body.shape());
}

double outer_radius(const BodyDescriptor& body) {
  const std::size_t n = body.dim();
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return s.radius;
        } else if constexpr (std::is_same_v<T, Box>) {
          return norm2(s.half_sides);
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          return *std::max_element(s.semi_axes.begin(), s.semi_axes.end());
        } else if constexpr (std::is_same_v<T, HPolytope>) {
          // Bound via axis supports: |y|_2 <= sqrt(sum_j h(e_j)^2).
          double q = 0.0;
          for (std::size_t j = 0; j < n; ++j) {
            Vec e(n, 0.0);
            e[j] = 1.0;
            double h = support_raw(body, e).value;
            q += h * h;
          }
          return std::sqrt(q);
        } else if constexpr (std::is_same_v<T, VPolytope>) {
          double r = 0.0;
          for (const Vec& v : s.vertices) r = std::max(r, norm2(v));
          return r;
        } else {
          return s.scale;
        }
      },
      body.shape());
}

bool is_polytopal(const BodyDescriptor& body) {
  std::size_t i = body.shape().index();
  return i == 1 || i == 3 || i == 4 || i == 5;
}

bool has_hrep(const BodyDescriptor& body) {
  std::size_t i = body.shape().index();
  return i == 1 || i == 3;
}

void hrep_rows(const BodyDescriptor& body, std::vector<Vec>* rows, Vec* offsets) {
  const std::size_t n = body.dim();
  rows->clear();
  offsets->clear();
  if (const Box* b = std::get_if<Box>(&body.shape())) {
    for (std::size_t j = 0; j < n; ++j) {
      Vec r(n, 0.0);
      r[j] = 1.0;
      rows->push_back(r);
      offsets->push_back(b->half_sides[j]);
      r[j] = -1.0;
      rows->push_back(r);
      offsets->push_back(b->half_sides[j]);
    }
    return;
  }
  if (const HPolytope* h = std::get_if<HPolytope>(&body.shape())) {
    *rows = h->rows;
    *offsets = h->offsets;
    return;
  }
  throw std::invalid_argument("hrep_rows: body has no H-representation");
}

std::vector<Vec> vrep_vertices(const BodyDescriptor& body) {
  const std::size_t n = body.dim();
  if (const VPolytope* v = std::get_if<VPolytope>(&body.shape())) return v->vertices;
  if (const CrossPolytope* c = std::get_if<CrossPolytope>(&body.shape())) {
    std::vector<Vec> verts;
    verts.reserve(2 * n);
    for (std::size_t j = 0; j < n; ++j) {
      Vec v(n, 0.0);
      v[j] = c->scale;
      verts.push_back(v);
      v[j] = -c->scale;
      verts.push_back(v);
    }
    return verts;
  }
  throw std::invalid_argument("vrep_vertices: body has no vertex representation");
}

}  // namespace convbody
