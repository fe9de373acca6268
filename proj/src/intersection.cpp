#include "convbody/intersection.hpp"

#include <cmath>
#include <stdexcept>

#include "convbody/errors.hpp"
#include "convbody/simplex.hpp"

namespace convbody {

const char* to_string(SolveMethod m) {
  switch (m) {
    case SolveMethod::closed_box: return "closed-box";
    case SolveMethod::closed_lens: return "closed-lens";
    case SolveMethod::simplex: return "simplex";
    default: return "infconv";
  }
}

namespace {

// [a_j, b_j] per coordinate of box ∩ (t + box); throws if empty.
void intersection_box(const Box& k, const Box& l, const Vec& t, Vec* lo, Vec* hi) {
  std::size_t n = k.half_sides.size();
  lo->resize(n);
  hi->resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    (*lo)[j] = std::max(-k.half_sides[j], t[j] - l.half_sides[j]);
    (*hi)[j] = std::min(k.half_sides[j], t[j] + l.half_sides[j]);
    if ((*lo)[j] > (*hi)[j] + 1e-12)
      throw EmptyBodyError("box intersection: empty along a coordinate");
    if ((*lo)[j] > (*hi)[j]) (*lo)[j] = (*hi)[j];  // collapse fp-degenerate slab
  }
}

bool equal_radius_balls(const BodyDescriptor& K, const BodyDescriptor& L, double* r) {
  const Ball* bk = std::get_if<Ball>(&K.shape());
  const Ball* bl = std::get_if<Ball>(&L.shape());
  if (!bk || !bl || bk->radius != bl->radius) return false;
  *r = bk->radius;
  return true;
}

// Feasibility margin probe for pairs with no closed nonemptiness test:
// m = min over the unit ball of h_K(w) + h_L(w) - <t, w>. The minimum is 0
// exactly when t lies in K + L; a strictly negative certified value proves
// the intersection empty.
bool probe_nonempty(const BodyDescriptor& K, const BodyDescriptor& L, const Vec& t) {
  std::size_t n = K.dim();
  Vec w(n, 0.0);
  double tn = norm2(t);
  if (tn == 0.0) return true;
  w = (1.0 / tn) * t;
  double best = 0.0;
  for (int k = 1; k <= 400; ++k) {
    double hk = support_raw(K, w).value;
    double hl = support_raw(L, w).value;
    double val = hk + hl - dot(t, w);
    best = std::min(best, val);
    if (best < -1e-9) return false;
    Vec g = support_raw(K, w).witness;
    axpy(1.0, support_raw(L, w).witness, g);
    axpy(-1.0, t, g);
    axpy(-1.0 / std::sqrt(static_cast<double>(k)), g, w);
    double nw = norm2(w);
    if (nw > 1.0) w = (1.0 / nw) * w;
  }
  return true;
}

}  // namespace

ShiftedIntersection::ShiftedIntersection(BodyDescriptor K, BodyDescriptor L, Vec t)
    : K_(std::move(K)), L_(std::move(L)), t_(std::move(t)) {
  if (K_.dim() != L_.dim() || K_.dim() != t_.size())
    throw std::invalid_argument("ShiftedIntersection: dimension mismatch");
  if (!all_finite(t_)) throw std::invalid_argument("ShiftedIntersection: non-finite shift");

  const Box* bk = std::get_if<Box>(&K_.shape());
  const Box* bl = std::get_if<Box>(&L_.shape());
  if (bk && bl) {
    Vec lo, hi;
    intersection_box(*bk, *bl, t_, &lo, &hi);  // throws when empty
  } else if (std::get_if<Ball>(&K_.shape()) && std::get_if<Ball>(&L_.shape())) {
    double rk = std::get<Ball>(K_.shape()).radius;
    double rl = std::get<Ball>(L_.shape()).radius;
    if (norm2(t_) > rk + rl + 1e-12) throw EmptyBodyError("ball intersection: centers too far apart");
  } else if (K_ == L_) {
    if (norm2(t_) > 0.0 && gauge(K_, t_) > 2.0 + 1e-12)
      throw EmptyBodyError("intersection: shift outside 2K");
  } else if (is_polytopal(K_) && is_polytopal(L_)) {
    Direction probe = Direction::unit(Vec(K_.dim(), 1.0));
    try {
      support_intersection(*this, probe);
    } catch (const EmptyBodyError&) {
      throw;
    }
  } else {
    if (!probe_nonempty(K_, L_, t_)) throw EmptyBodyError("intersection: separating direction found");
  }
}

SupportSolveReport lp_support_raw(const std::vector<LpRow>& rows, const Vec& objective) {
  if (rows.empty()) throw std::invalid_argument("lp_support: no rows");
  const std::size_t n = objective.size();
  // Free y split as y = y+ - y-.
  LpProblem lp;
  lp.nvars = 2 * n;
  lp.objective.resize(2 * n);
  for (std::size_t j = 0; j < n; ++j) {
    lp.objective[j] = objective[j];
    lp.objective[n + j] = -objective[j];
  }
  lp.a_ub.reserve(rows.size());
  lp.b_ub.reserve(rows.size());
  for (const LpRow& row : rows) {
    if (row.a.size() != n) throw std::invalid_argument("lp_support: row size mismatch");
    Vec r(2 * n);
    for (std::size_t j = 0; j < n; ++j) {
      r[j] = row.a[j];
      r[n + j] = -row.a[j];
    }
    lp.a_ub.push_back(std::move(r));
    lp.b_ub.push_back(row.b);
  }
  LpSolution sol = simplex_solve(lp);
  if (sol.status == LpStatus::infeasible) throw EmptyBodyError("lp_support: infeasible constraint set");
  if (sol.status == LpStatus::unbounded)
    throw NumericalFailure("lp_support: unbounded query on a supposedly bounded body");
  SupportSolveReport rep;
  rep.method = SolveMethod::simplex;
  rep.iterations = sol.iterations;
  rep.certified_gap = std::max(0.0, sol.reduced_cost_violation);
  rep.witness.resize(n);
  for (std::size_t j = 0; j < n; ++j) rep.witness[j] = sol.z[j] - sol.z[n + j];
  rep.value = dot(rep.witness, objective);
  return rep;
}

SupportSolveReport lp_support(const std::vector<LpRow>& rows, const Direction& u) {
  return lp_support_raw(rows, u.coords());
}

namespace {

SupportSolveReport closed_box_support(const Box& k, const Box& l, const Vec& t, const Vec& u) {
  Vec lo, hi;
  intersection_box(k, l, t, &lo, &hi);
  std::size_t n = u.size();
  SupportSolveReport rep;
  rep.method = SolveMethod::closed_box;
  rep.witness.resize(n);
  double val = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    rep.witness[j] = (u[j] >= 0.0) ? hi[j] : lo[j];
    val += rep.witness[j] * u[j];
  }
  rep.value = val;
  return rep;
}

SupportSolveReport closed_lens_support(double r, const Vec& t, const Vec& u) {
  SupportSolveReport rep;
  rep.method = SolveMethod::closed_lens;
  double tn = norm2(t);
  if (tn == 0.0) {
    rep.value = r;
    rep.witness = r * u;
    return rep;
  }
  double lambda = tn / r;
  Vec axis = (1.0 / tn) * t;
  double c = dot(axis, u);
  rep.value = r * lens_support(lambda, c);
  double half = 0.5 * lambda;
  if (c >= half) {
    rep.witness = r * u;
  } else if (c <= -half) {
    rep.witness = t + r * u;
  } else {
    // Rim point: project u off the axis and renormalize.
    Vec perp = u - c * axis;
    double pn = norm2(perp);
    rep.witness = (r * half) * axis;
    if (pn > 0.0) axpy(r * std::sqrt(1.0 - half * half) / pn, perp, rep.witness);
  }
  return rep;
}

// LP over the intersection for polytopal pairs, choosing variables to match
// the available representations.
SupportSolveReport polytopal_support(const ShiftedIntersection& S, const Vec& u) {
  const std::size_t n = S.dim();
  const BodyDescriptor& K = S.K();
  const BodyDescriptor& L = S.L();
  const Vec& t = S.shift();

  auto finish = [&](const LpSolution& sol, Vec witness) {
    if (sol.status == LpStatus::infeasible) throw EmptyBodyError("support_intersection: empty polytopal intersection");
    if (sol.status == LpStatus::unbounded)
      throw NumericalFailure("support_intersection: unbounded LP on bounded bodies");
    SupportSolveReport rep;
    rep.method = SolveMethod::simplex;
    rep.iterations = sol.iterations;
    rep.certified_gap = std::max(0.0, sol.reduced_cost_violation);
    rep.witness = std::move(witness);
    rep.value = dot(rep.witness, u);
    return rep;
  };

  if (has_hrep(K) && has_hrep(L)) {
    std::vector<Vec> rk, rl;
    Vec bk, bl;
    hrep_rows(K, &rk, &bk);
    hrep_rows(L, &rl, &bl);
    std::vector<LpRow> rows;
    rows.reserve(rk.size() + rl.size());
    for (std::size_t i = 0; i < rk.size(); ++i) rows.push_back({rk[i], bk[i]});
    for (std::size_t i = 0; i < rl.size(); ++i) rows.push_back({rl[i], bl[i] + dot(rl[i], t)});
    return lp_support_raw(rows, u);
  }

  if (!has_hrep(K) && has_hrep(L)) {
    // y = V_K theta with theta on the simplex; rows of L applied to y - t.
    std::vector<Vec> vk = vrep_vertices(K);
    std::vector<Vec> rl;
    Vec bl;
    hrep_rows(L, &rl, &bl);
    std::size_t kv = vk.size();
    LpProblem lp;
    lp.nvars = kv;
    lp.objective.resize(kv);
    for (std::size_t i = 0; i < kv; ++i) lp.objective[i] = dot(vk[i], u);
    for (std::size_t r = 0; r < rl.size(); ++r) {
      Vec row(kv);
      for (std::size_t i = 0; i < kv; ++i) row[i] = dot(rl[r], vk[i]);
      lp.a_ub.push_back(std::move(row));
      lp.b_ub.push_back(bl[r] + dot(rl[r], t));
    }
    lp.a_eq.emplace_back(kv, 1.0);
    lp.b_eq.push_back(1.0);
    LpSolution sol = simplex_solve(lp);
    Vec y(n, 0.0);
    if (sol.status == LpStatus::optimal)
      for (std::size_t i = 0; i < kv; ++i) axpy(sol.z[i], vk[i], y);
    return finish(sol, std::move(y));
  }

  if (has_hrep(K) && !has_hrep(L)) {
    // y = t + V_L phi; rows of K applied to y.
    std::vector<Vec> vl = vrep_vertices(L);
    std::vector<Vec> rk;
    Vec bk;
    hrep_rows(K, &rk, &bk);
    std::size_t kv = vl.size();
    LpProblem lp;
    lp.nvars = kv;
    lp.objective.resize(kv);
    for (std::size_t i = 0; i < kv; ++i) lp.objective[i] = dot(vl[i], u);
    for (std::size_t r = 0; r < rk.size(); ++r) {
      Vec row(kv);
      for (std::size_t i = 0; i < kv; ++i) row[i] = dot(rk[r], vl[i]);
      lp.a_ub.push_back(std::move(row));
      lp.b_ub.push_back(bk[r] - dot(rk[r], t));
    }
    lp.a_eq.emplace_back(kv, 1.0);
    lp.b_eq.push_back(1.0);
    LpSolution sol = simplex_solve(lp);
    Vec y = t;
    if (sol.status == LpStatus::optimal)
      for (std::size_t i = 0; i < kv; ++i) axpy(sol.z[i], vl[i], y);
    return finish(sol, std::move(y));
  }

  // Both vertex-described: V_K theta = t + V_L phi with two simplex couplings.
  std::vector<Vec> vk = vrep_vertices(K);
  std::vector<Vec> vl = vrep_vertices(L);
  std::size_t ka = vk.size(), kb = vl.size();
  LpProblem lp;
  lp.nvars = ka + kb;
  lp.objective.assign(ka + kb, 0.0);
  for (std::size_t i = 0; i < ka; ++i) lp.objective[i] = dot(vk[i], u);
  lp.a_eq.assign(n + 2, Vec(ka + kb, 0.0));
  lp.b_eq.assign(n + 2, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < ka; ++i) lp.a_eq[j][i] = vk[i][j];
    for (std::size_t i = 0; i < kb; ++i) lp.a_eq[j][ka + i] = -vl[i][j];
    lp.b_eq[j] = t[j];
  }
  for (std::size_t i = 0; i < ka; ++i) lp.a_eq[n][i] = 1.0;
  lp.b_eq[n] = 1.0;
  for (std::size_t i = 0; i < kb; ++i) lp.a_eq[n + 1][ka + i] = 1.0;
  lp.b_eq[n + 1] = 1.0;
  LpSolution sol = simplex_solve(lp);
  Vec y(n, 0.0);
  if (sol.status == LpStatus::optimal)
    for (std::size_t i = 0; i < ka; ++i) axpy(sol.z[i], vk[i], y);
  return finish(sol, std::move(y));
}

}  // namespace

SupportSolveReport support_intersection(const ShiftedIntersection& S, const Direction& u,
                                        const InfconvOptions& opts) {
  if (u.dim() != S.dim()) throw std::invalid_argument("support_intersection: dimension mismatch");
  const BodyDescriptor& K = S.K();
  const BodyDescriptor& L = S.L();

  const Box* bk = std::get_if<Box>(&K.shape());
  const Box* bl = std::get_if<Box>(&L.shape());
  if (bk && bl) return closed_box_support(*bk, *bl, S.shift(), u.coords());

  double r = 0.0;
  if (equal_radius_balls(K, L, &r)) return closed_lens_support(r, S.shift(), u.coords());

  if (is_polytopal(K) && is_polytopal(L)) return polytopal_support(S, u.coords());

  return infconv_support(S, u, opts.tol, opts.max_iter);
}

}  // namespace convbody
