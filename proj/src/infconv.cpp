#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "convbody/errors.hpp"
#include "convbody/intersection.hpp"

namespace convbody {

namespace {

double gauge0(const BodyDescriptor& b, const Vec& x) {
  return norm2(x) == 0.0 ? 0.0 : gauge(b, x);
}

// A subgradient of the gauge at x (any element of the subdifferential works
// for the feasibility Newton polish). Vertex-described bodies have no cheap
// gradient; callers skip the polish for them.
bool gauge_gradient(const BodyDescriptor& body, const Vec& x, Vec* grad) {
  const std::size_t n = body.dim();
  if (norm2(x) == 0.0) return false;
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) {
          *grad = (1.0 / (s.radius * norm2(x))) * x;
          return true;
        } else if constexpr (std::is_same_v<T, Box>) {
          std::size_t arg = 0;
          double best = -1.0;
          for (std::size_t j = 0; j < n; ++j) {
            double v = std::fabs(x[j]) / s.half_sides[j];
            if (v > best) {
              best = v;
              arg = j;
            }
          }
          grad->assign(n, 0.0);
          (*grad)[arg] = (x[arg] >= 0.0 ? 1.0 : -1.0) / s.half_sides[arg];
          return true;
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          double g = 0.0;
          for (std::size_t j = 0; j < n; ++j) {
            double t = x[j] / s.semi_axes[j];
            g += t * t;
          }
          g = std::sqrt(g);
          grad->resize(n);
          for (std::size_t j = 0; j < n; ++j)
            (*grad)[j] = x[j] / (s.semi_axes[j] * s.semi_axes[j] * g);
          return true;
        } else if constexpr (std::is_same_v<T, HPolytope>) {
          std::size_t arg = 0;
          double best = -std::numeric_limits<double>::infinity();
          for (std::size_t i = 0; i < s.rows.size(); ++i) {
            double v = dot(s.rows[i], x) / s.offsets[i];
            if (v > best) {
              best = v;
              arg = i;
            }
          }
          *grad = (1.0 / s.offsets[arg]) * s.rows[arg];
          return true;
        } else if constexpr (std::is_same_v<T, CrossPolytope>) {
          grad->resize(n);
          for (std::size_t j = 0; j < n; ++j)
            (*grad)[j] = (x[j] > 0.0 ? 1.0 : (x[j] < 0.0 ? -1.0 : 0.0)) / s.scale;
          return true;
        } else {
          return false;
        }
      },
      body.shape());
}

// Least-norm Newton steps onto the active gauge constraints. Near the rim
// both constraints bind and the correction is second order in the distance
// from the feasible set, which is what makes the certified bounds track the
// optimum quadratically.
void feasibility_polish(const BodyDescriptor& K, const BodyDescriptor& L, const Vec& t,
                        Vec* y);

// Maximizes <y, u> over the rim manifold {gauge_K = 1, gauge_L(.-t) = 1} by
// projected gradient with backtracking, re-polishing after every trial
// step. For directions whose support point sits on the rim (both bodies
// binding), this pins the certificate without waiting for the subgradient
// iterates to settle.
void rim_ascent(const BodyDescriptor& K, const BodyDescriptor& L, const Vec& t, const Vec& u,
                Vec* y) {
  const std::size_t n = y->size();
  feasibility_polish(K, L, t, y);
  double step = 0.1 * (1.0 + norm2(t));
  Vec d1, d2;
  for (int it = 0; it < 40 && step > 1e-12; ++it) {
    if (!gauge_gradient(K, *y, &d1) || !gauge_gradient(L, *y - t, &d2)) return;
    double a11 = dot(d1, d1), a12 = dot(d1, d2), a22 = dot(d2, d2);
    double b1 = dot(d1, u), b2 = dot(d2, u);
    double det = a11 * a22 - a12 * a12;
    Vec tang = u;
    if (det > 1e-14 * a11 * a22) {
      double m1 = (a22 * b1 - a12 * b2) / det;
      double m2 = (a11 * b2 - a12 * b1) / det;
      for (std::size_t j = 0; j < n; ++j) tang[j] -= m1 * d1[j] + m2 * d2[j];
    } else {
      axpy(-b1 / a11, d1, tang);
    }
    double tn = norm2(tang);
    if (tn < 1e-14) return;
    Vec trial = *y + (step / tn) * tang;
    feasibility_polish(K, L, t, &trial);
    if (dot(trial, u) > dot(*y, u)) {
      *y = std::move(trial);
      step *= 1.4;
    } else {
      step *= 0.4;
    }
  }
}

void feasibility_polish(const BodyDescriptor& K, const BodyDescriptor& L, const Vec& t,
                        Vec* y) {
  const std::size_t n = y->size();
  for (int it = 0; it < 4; ++it) {
    double g1 = gauge0(K, *y);
    double g2 = gauge0(L, *y - t);
    double v1 = g1 - 1.0, v2 = g2 - 1.0;
    if (std::max(v1, v2) <= 0.0) return;
    bool use1 = v1 > -1e-7;
    bool use2 = v2 > -1e-7;
    Vec d1, d2;
    if (use1 && !gauge_gradient(K, *y, &d1)) return;
    if (use2 && !gauge_gradient(L, *y - t, &d2)) return;
    if (use1 && use2) {
      double a11 = dot(d1, d1), a12 = dot(d1, d2), a22 = dot(d2, d2);
      double det = a11 * a22 - a12 * a12;
      if (det < 1e-12 * a11 * a22 || det <= 0.0) {
        use2 = false;  // nearly parallel normals; treat as one constraint
      } else {
        double m1 = (a22 * v1 - a12 * v2) / det;
        double m2 = (a11 * v2 - a12 * v1) / det;
        for (std::size_t j = 0; j < n; ++j) (*y)[j] -= m1 * d1[j] + m2 * d2[j];
        continue;
      }
    }
    if (use1 && !use2) {
      axpy(-v1 / dot(d1, d1), d1, *y);
    } else if (use2) {
      axpy(-v2 / dot(d2, d2), d2, *y);
    }
  }
}

}  // namespace

// Minimizes phi(v) = h_K(u-v) + h_L(v) + <t, v>, whose infimum equals the
// support of K ∩ (t+L) at u. Support witnesses supply subgradients; feasible
// primal points (witness combinations polished onto the active constraints
// and, for rim-supported directions, improved by rim ascent) supply
// certified lower bounds. Steps follow the diminishing schedule R/sqrt(k)
// until a lower bound exists, then spectral (Barzilai-Borwein) steps with a
// level-targeted Polyak fallback.
SupportSolveReport infconv_support(const ShiftedIntersection& S, const Direction& udir,
                                   double tol, int max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("infconv_support: tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("infconv_support: max_iter must be >= 1");
  const BodyDescriptor& K = S.K();
  const BodyDescriptor& L = S.L();
  const Vec& t = S.shift();
  const Vec& u = udir.coords();
  if (u.size() != S.dim()) throw std::invalid_argument("infconv_support: dimension mismatch");
  const std::size_t n = S.dim();
  const double inf = std::numeric_limits<double>::infinity();

  auto gamma = [&](const Vec& y) { return std::max(gauge0(K, y), gauge0(L, y - t)); };

  // Interior center. For K = L the midpoint of the shift always works while
  // the intersection has interior.
  Vec c0 = 0.5 * t;
  double gamma0 = gamma(c0);
  if (gamma0 > 1.0 - 1e-12) {
    Vec zero(n, 0.0);
    if (gamma(zero) < gamma0) {
      c0 = zero;
      gamma0 = gamma(c0);
    }
    if (gamma0 > 1.0 - 1e-12)
      throw NumericalFailure("infconv_support: no interior center for the intersection");
  }
  const double c0u = dot(c0, u);

  double best_ub = inf;
  double best_lb = -inf;
  Vec y_best = c0;

  // Pull y onto the feasible set: optionally Newton-polish the active
  // constraints, then finish along the chord to c0 (convexity of the gauges
  // makes the chord point feasible whenever gamma(y) > 1). The polish is
  // worth its cost only for candidates already near the boundary.
  auto offer_lb = [&](Vec y, bool polish) {
    double gy = gamma(y);
    if (polish && gy > 1.0) {
      feasibility_polish(K, L, t, &y);
      gy = gamma(y);
    }
    double val;
    Vec yf;
    if (gy <= 1.0) {
      yf = std::move(y);
      val = dot(yf, u);
    } else {
      double theta = (1.0 - gamma0) / (gy - gamma0);
      yf = c0 + theta * (y - c0);
      val = c0u + theta * (dot(y, u) - c0u);
    }
    if (val > best_lb) {
      best_lb = val;
      y_best = std::move(yf);
    }
  };

  // 1-D minimax of the gauge along the segment between a K-side and an
  // (t+L)-side candidate; near the optimum the best segment point is nearly
  // feasible, which makes the projected lower bound second-order tight.
  auto segment_probe = [&](const Vec& y1, const Vec& y2) {
    double a = 0.0, b = 1.0;
    for (int it = 0; it < 30; ++it) {
      double m1 = a + (b - a) / 3.0;
      double m2 = b - (b - a) / 3.0;
      double g1 = gamma(y1 + m1 * (y2 - y1));
      double g2 = gamma(y1 + m2 * (y2 - y1));
      if (g1 <= g2)
        b = m2;
      else
        a = m1;
    }
    offer_lb(y1 + (0.5 * (a + b)) * (y2 - y1), true);
  };

  SupportSolveReport rep;
  rep.method = SolveMethod::infconv;

  // One-sided candidates: if a body's own support witness already lies in
  // the other (shifted) body, the value is exact and no iteration is needed.
  SupportResult sk = support_raw(K, u);
  SupportResult sl = support_raw(L, u);
  best_ub = std::min(sk.value, sl.value + dot(t, u));
  offer_lb(sk.witness, false);
  offer_lb(sl.witness + t, false);
  offer_lb(c0, false);
  if (best_ub - best_lb > tol) {
    // Rim certificate: ascend <., u> along the two-constraint manifold from
    // the better one-sided witness. For directions supported on the rim
    // this closes the gap without any subgradient iterations.
    Vec start = (sk.value <= sl.value + dot(t, u)) ? sk.witness : sl.witness + t;
    rim_ascent(K, L, t, u, &start);
    offer_lb(start, true);
  }
  if (best_ub - best_lb <= tol) {
    rep.value = best_ub;
    rep.witness = y_best;
    rep.certified_gap = std::max(0.0, best_ub - best_lb);
    return rep;
  }

  const double radius = std::max(outer_radius(K), outer_radius(L) + norm2(t));
  Vec v = 0.5 * u;
  Vec ybar(n, 0.0);
  // Witnesses at the incumbent iterate: the certificate probes work off
  // these, not the oscillating current point, so the lower bound inherits
  // the quadratic tightness of the best phi value.
  Vec wk_best, wl_best;
  // Window average of the dual iterates. Polyak steps bounce symmetrically
  // across ill-conditioned valleys (nearly tangent constraint surfaces);
  // the window mean cancels the bounce, so jumping to it when it evaluates
  // better collapses those plateaus.
  Vec vbar = v;
  Vec v_prev(n, 0.0), g_prev(n, 0.0);
  int window = 0;
  double relax = 1.0;
  double prev_phi = inf;
  int k = 0;

  for (k = 1; k <= max_iter; ++k) {
    Vec uv = u - v;
    SupportResult side_k = support_raw(K, uv);
    SupportResult side_l = support_raw(L, v);
    double phi = side_k.value + side_l.value + dot(t, v);
    if (phi < best_ub) {
      best_ub = phi;
      wk_best = side_k.witness;
      wl_best = side_l.witness + t;
    }

    Vec mid = 0.5 * (side_k.witness + side_l.witness + t);
    axpy(1.0, (1.0 / k) * (mid - ybar), ybar);
    ++window;
    axpy(1.0, (1.0 / window) * (v - vbar), vbar);
    offer_lb(mid, false);
    if (k < 4 || k % 8 == 0) {
      offer_lb(mid, true);
      offer_lb(ybar, true);
      if (!wk_best.empty()) {
        offer_lb(0.5 * (wk_best + wl_best), true);
        segment_probe(wk_best, wl_best);
        Vec rim = 0.5 * (wk_best + wl_best);
        rim_ascent(K, L, t, u, &rim);
        offer_lb(rim, true);
      }
      if (window >= 8) {
        SupportResult avg_k = support_raw(K, u - vbar);
        SupportResult avg_l = support_raw(L, vbar);
        double phi_avg = avg_k.value + avg_l.value + dot(t, vbar);
        if (phi_avg < best_ub) {
          best_ub = phi_avg;
          wk_best = avg_k.witness;
          wl_best = avg_l.witness + t;
          v = vbar;
          offer_lb(0.5 * (wk_best + wl_best), true);
          segment_probe(wk_best, wl_best);
        }
        window = 0;
        vbar = v;
      }
    }
    if (best_ub - best_lb <= tol) break;

    Vec g = side_l.witness + t - side_k.witness;
    double gn2 = dot(g, g);
    if (gn2 <= 1e-30) {
      // Stationary point of a smooth phi: the upper bound is already the
      // optimum; only the certificate can still move.
      if (!wk_best.empty()) segment_probe(wk_best, wl_best);
      offer_lb(ybar, true);
      break;
    }

    double alpha = 0.0;
    bool have_bb = false;
    if (k > 1) {
      // Spectral (Barzilai-Borwein) step: phi is smooth away from the
      // kinks, and the curvature estimate <dv,dg>/<dg,dg> is what gets
      // through the nearly-degenerate valleys of shallow intersections.
      Vec dv = v - v_prev;
      Vec dg = g - g_prev;
      double num = dot(dv, dg), den = dot(dg, dg);
      if (den > 0.0 && num > 0.0) {
        alpha = num / den;
        have_bb = true;
      }
    }
    if (!have_bb) {
      if (best_lb > -inf) {
        // Polyak step toward the level midway between the certified bounds.
        double level = best_lb + 0.5 * (best_ub - best_lb);
        alpha = relax * std::max(phi - level, 0.25 * (best_ub - best_lb)) / gn2;
      } else {
        alpha = radius / (std::sqrt(static_cast<double>(k)) * std::sqrt(gn2));
      }
    }
    alpha = std::clamp(alpha, 0.0, 4.0 * radius / std::sqrt(gn2));
    relax = (phi > prev_phi) ? std::max(0.2, relax * 0.7) : std::min(1.0, relax * 1.1);
    prev_phi = phi;
    v_prev = v;
    g_prev = g;
    axpy(-alpha, g, v);
  }

  // Final certificate attempt at the cap.
  if (best_ub - best_lb > tol && !wk_best.empty()) {
    segment_probe(wk_best, wl_best);
    offer_lb(0.5 * (wk_best + wl_best), true);
    offer_lb(ybar, true);
  }

  double gap = std::max(0.0, best_ub - best_lb);
  rep.value = best_ub;
  rep.witness = y_best;
  rep.iterations = std::min(k, max_iter);
  rep.certified_gap = gap;
  if (gap > 10.0 * tol)
    throw NonConvergenceError("infconv_support: certified gap exceeds 10x tolerance at iteration cap",
                              best_ub, gap);
  return rep;
}

}  // namespace convbody
