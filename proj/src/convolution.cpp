#include "convbody/convolution.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "convbody/constants.hpp"
#include "convbody/errors.hpp"
#include "convbody/parallel.hpp"

namespace convbody {

namespace {

MwMethod resolve_method(const BodyDescriptor& K, MethodSelect sel) {
  bool is_ball = std::holds_alternative<Ball>(K.shape());
  bool is_box = std::holds_alternative<Box>(K.shape());
  switch (sel) {
    case MethodSelect::mc:
      return MwMethod::mc;
    case MethodSelect::deterministic:
      if (is_ball) return MwMethod::lens_quadrature;
      if (is_box) return MwMethod::box_closed;
      throw std::invalid_argument("radial_lambda: no deterministic path for body type " +
                                  K.type_name());
    default:
      if (is_ball) return MwMethod::lens_quadrature;
      if (is_box) return MwMethod::box_closed;
      return MwMethod::mc;
  }
}

struct GEval {
  std::function<double(double)> g;  // M*(K_lambda) - delta M*(K)
  double mstar = 0.0;
  MwMethod method = MwMethod::mc;
};

GEval make_g(const BodyDescriptor& K, const Direction& x, double delta,
             const RadialOptions& opts, const SphereSample** sample_out,
             std::shared_ptr<SphereSample>* owned) {
  GEval ev;
  ev.method = resolve_method(K, opts.method);
  switch (ev.method) {
    case MwMethod::lens_quadrature: {
      double r = std::get<Ball>(K.shape()).radius;
      std::size_t n = K.dim();
      ev.mstar = r;
      if (n == 1) {
        // 1-d ball is the interval [-r, r]; the lens is another interval.
        ev.g = [r, delta](double lambda) {
          return box_mean_width_closed(Vec{r}, Vec{lambda}).value - delta * r;
        };
      } else {
        ev.g = [r, n, delta](double lambda) {
          return r * lens_mean_width_quadrature(n, lambda / r).value - delta * r;
        };
      }
      break;
    }
    case MwMethod::box_closed: {
      Vec s = std::get<Box>(K.shape()).half_sides;
      Vec xv = x.coords();
      ev.mstar = box_mean_width_closed(s, Vec(s.size(), 0.0)).value;
      double mstar = ev.mstar;
      ev.g = [s, xv, delta, mstar](double lambda) {
        return box_mean_width_closed(s, lambda * xv).value - delta * mstar;
      };
      break;
    }
    default: {
      const SphereSample* sample = opts.shared_sample;
      if (!sample) {
        *owned = std::make_shared<SphereSample>(
            sample_sphere(K.dim(), opts.samples, opts.seed, true));
        sample = owned->get();
      }
      *sample_out = sample;
      McOptions mc;
      mc.jobs = opts.jobs;
      mc.infconv = opts.infconv;
      double mstar = opts.mstar_hint ? *opts.mstar_hint
                                     : mean_width_mc(K, *sample, mc).value;
      ev.mstar = mstar;
      BodyDescriptor body = K;
      Vec xv = x.coords();
      ev.g = [body, xv, delta, mstar, sample, mc](double lambda) {
        ShiftedIntersection s(body, body, lambda * xv);
        return mean_width_mc(s, *sample, mc).value - delta * mstar;
      };
      break;
    }
  }
  if (opts.mstar_hint && ev.method != MwMethod::mc) ev.mstar = *opts.mstar_hint;
  return ev;
}

}  // namespace

double limiting_radius(double mstar, std::size_t n) {
  return 2.0 * mstar / cn_closed_form(n);
}

RadialSolve radial_lambda(const BodyDescriptor& K, const Direction& x, double delta,
                          const RadialOptions& opts) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("radial_lambda: delta must lie in (0, 1)");
  if (x.dim() != K.dim()) throw std::invalid_argument("radial_lambda: dimension mismatch");

  const double lambda_max = 2.0 / gauge(K, x.coords());
  const SphereSample* sample = nullptr;
  std::shared_ptr<SphereSample> owned;
  GEval ev = make_g(K, x, delta, opts, &sample, &owned);

  RadialSolve out{x};
  out.delta = delta;
  out.mw_method = ev.method;
  out.mstar_body = ev.mstar;
  out.lambda_max = lambda_max;

  int evals = 0;
  auto g = [&](double lambda) {
    ++evals;
    return ev.g(lambda);
  };

  // g(0) = (1-delta) M* > 0 analytically; find a hi with g(hi) < 0 by
  // doubling, staying clear of the degenerate sliver at lambda_max unless
  // the root really lives there. The first probe sits at a multiple of the
  // first-order root location lambda ~ (1-delta) * 2 M*/c_n, which keeps
  // expensive per-sample solvers out of the deep-lens regime.
  double hi_cap = lambda_max * (1.0 - 1e-9);
  double first_order = 4.0 * (1.0 - delta) * limiting_radius(ev.mstar, K.dim());
  double hi = std::min({hi_cap, 0.125 * lambda_max, std::max(first_order, 1e-4 * lambda_max)});
  double g_hi = g(hi);
  while (g_hi >= 0.0 && hi < hi_cap) {
    hi = std::min(hi_cap, 2.0 * hi);
    g_hi = g(hi);
  }
  if (g_hi >= 0.0) {
    std::ostringstream msg;
    msg << "radial_lambda: no sign change on [0, lambda_max]; g(" << hi << ") = " << g_hi
        << " >= 0 (the radial boundary sits at the nonempty-intersection edge)";
    throw NumericalFailure(msg.str());
  }

  double lo = 0.0;
  double g_mid = g_hi;
  const double width_tol = opts.bracket_rel_tol * lambda_max;
  while (hi - lo > width_tol) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    g_mid = g(mid);
    if (opts.residual_tol > 0.0 && std::fabs(g_mid) <= opts.residual_tol) {
      lo = hi = mid;
      break;
    }
    if (g_mid > 0.0)
      lo = mid;
    else
      hi = mid;
    if (evals > 300)
      throw NumericalFailure("radial_lambda: evaluation budget exhausted before bracket closed");
  }

  out.lambda_star = 0.5 * (lo + hi);
  out.bracket = {lo, hi};
  out.residual = std::fabs(lo == hi ? g_mid : g(out.lambda_star));
  out.evals = evals;
  if (!(out.lambda_star > 0.0 && out.lambda_star < lambda_max))
    throw NumericalFailure("radial_lambda: root escaped (0, lambda_max)");
  return out;
}

double normalized_radial(const RadialSolve& solve) {
  return solve.lambda_star / (1.0 - solve.delta);
}

DeviationReport deviation_T(const BodyDescriptor& K, double delta,
                            const std::vector<Direction>& directions,
                            const RadialOptions& opts) {
  if (directions.empty()) throw std::invalid_argument("deviation_T: no directions");
  DeviationReport rep;
  rep.delta = delta;
  rep.n_directions = directions.size();

  // Shared sample and M* hint so every solve sees common random numbers.
  RadialOptions local = opts;
  std::shared_ptr<SphereSample> owned;
  MwMethod method = resolve_method(K, opts.method);
  if (method == MwMethod::mc && !local.shared_sample) {
    owned = std::make_shared<SphereSample>(sample_sphere(K.dim(), opts.samples, opts.seed, true));
    local.shared_sample = owned.get();
  }
  if (!local.mstar_hint) {
    switch (method) {
      case MwMethod::lens_quadrature:
        local.mstar_hint = std::get<Ball>(K.shape()).radius;
        break;
      case MwMethod::box_closed: {
        const Vec& s = std::get<Box>(K.shape()).half_sides;
        local.mstar_hint = box_mean_width_closed(s, Vec(s.size(), 0.0)).value;
        break;
      }
      default: {
        McOptions mc;
        mc.jobs = opts.jobs;
        mc.infconv = opts.infconv;
        local.mstar_hint = mean_width_mc(K, *local.shared_sample, mc).value;
      }
    }
  }
  rep.mw_method = method;

  const double rho_limit = limiting_radius(*local.mstar_hint, K.dim());
  std::vector<double> tvals(directions.size());
  RadialOptions solve_opts = local;
  solve_opts.jobs = 1;  // parallelism is across directions here
  parallel_for(directions.size(), opts.jobs, [&](std::size_t i) {
    RadialSolve s = radial_lambda(K, directions[i], delta, solve_opts);
    tvals[i] = rho_limit / normalized_radial(s);
  });

  rep.t_values.reserve(directions.size());
  for (std::size_t i = 0; i < directions.size(); ++i) {
    rep.t_values.emplace_back(directions[i], tvals[i]);
    rep.sup_dev = std::max(rep.sup_dev, std::fabs(tvals[i] - 1.0));
  }
  return rep;
}

RateFit rate_fit(const BodyDescriptor& K, const std::vector<double>& deltas,
                 const RateOptions& opts) {
  RateFit fit;
  const double region = 4.0 / 27.0;
  std::vector<Direction> dirs;
  {
    SphereSample s = sample_sphere(K.dim(), std::max<std::size_t>(2, opts.n_directions),
                                   opts.direction_seed, false);
    for (const Vec& u : s.directions) dirs.emplace_back(u);
  }
  for (double delta : deltas) {
    if (!(delta > 0.0 && delta < 1.0))
      throw std::invalid_argument("rate_fit: delta outside (0, 1)");
    double eps = 1.0 - delta;
    if (static_cast<double>(K.dim()) * eps * eps > region) continue;
    DeviationReport rep = deviation_T(K, delta, dirs, opts.radial);
    fit.deltas.push_back(delta);
    fit.sup_devs.push_back(rep.sup_dev);
  }
  if (fit.deltas.size() < 3)
    throw std::invalid_argument("rate_fit: need at least 3 schedule points inside the validity region");

  std::size_t m = fit.deltas.size();
  std::vector<double> xs(m), ys(m);
  for (std::size_t i = 0; i < m; ++i) {
    xs[i] = std::log(1.0 - fit.deltas[i]);
    ys[i] = std::log(std::max(fit.sup_devs[i], 1e-300));
  }
  double xbar = pairwise_mean(xs), ybar = pairwise_mean(ys);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (xs[i] - xbar) * (xs[i] - xbar);
    sxy += (xs[i] - xbar) * (ys[i] - ybar);
    syy += (ys[i] - ybar) * (ys[i] - ybar);
  }
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss_res += r * r;
  }
  fit.r_squared = (syy > 0.0) ? 1.0 - ss_res / syy : 1.0;

  // Flag schedules whose deviation does not actually die off (non-smooth
  // bodies keep a direction-dependent limit).
  std::size_t i_wide = 0, i_tight = 0;  // smallest and largest delta
  for (std::size_t i = 0; i < m; ++i) {
    if (fit.deltas[i] < fit.deltas[i_wide]) i_wide = i;
    if (fit.deltas[i] > fit.deltas[i_tight]) i_tight = i;
  }
  fit.decaying = fit.sup_devs[i_tight] <= 0.25 * fit.sup_devs[i_wide];
  return fit;
}

double cube_radial_closed(std::size_t n, const Vec& x, double delta) {
  if (x.size() != n) throw std::invalid_argument("cube_radial_closed: dimension mismatch");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("cube_radial_closed: delta outside (0, 1)");
  double nx = norm2(x);
  if (nx == 0.0) throw std::invalid_argument("cube_radial_closed: x must be nonzero");
  Vec xhat = (1.0 / nx) * x;
  double l1 = l1_norm(xhat);
  double lambda_star = 2.0 * static_cast<double>(n) * (1.0 - delta) / l1;
  if (lambda_star * linf_norm(xhat) > 2.0)
    throw std::out_of_range(
        "cube_radial_closed: delta below the validity threshold for this direction "
        "(intersection box would be improper)");
  return lambda_star / (1.0 - delta);
}

ProbeReport convexity_probe(const BodyDescriptor& K, double delta, std::size_t trials,
                            std::uint64_t seed, const RadialOptions& opts) {
  ProbeReport rep;
  rep.trials = trials;
  if (trials == 0) return rep;
  SphereSample dirs = sample_sphere(K.dim(), 2 * trials, seed, false);

  RadialOptions local = opts;
  std::shared_ptr<SphereSample> owned;
  MwMethod method = resolve_method(K, opts.method);
  if (method == MwMethod::mc && !local.shared_sample) {
    owned = std::make_shared<SphereSample>(sample_sphere(K.dim(), opts.samples, opts.seed, true));
    local.shared_sample = owned.get();
  }
  McOptions mc;
  mc.jobs = opts.jobs;
  mc.infconv = opts.infconv;

  double mstar;
  switch (method) {
    case MwMethod::lens_quadrature: mstar = std::get<Ball>(K.shape()).radius; break;
    case MwMethod::box_closed: {
      const Vec& s = std::get<Box>(K.shape()).half_sides;
      mstar = box_mean_width_closed(s, Vec(s.size(), 0.0)).value;
      break;
    }
    default: mstar = mean_width_mc(K, *local.shared_sample, mc).value;
  }
  local.mstar_hint = mstar;

  auto mstar_at_shift = [&](const Vec& m) -> std::pair<double, double> {
    switch (method) {
      case MwMethod::lens_quadrature: {
        double r = std::get<Ball>(K.shape()).radius;
        if (K.dim() == 1) return {box_mean_width_closed(Vec{r}, m).value, 0.0};
        return {r * lens_mean_width_quadrature(K.dim(), norm2(m) / r).value, 0.0};
      }
      case MwMethod::box_closed:
        return {box_mean_width_closed(std::get<Box>(K.shape()).half_sides, m).value, 0.0};
      default: {
        ShiftedIntersection s(K, K, m);
        MeanWidthEstimate est = mean_width_mc(s, *local.shared_sample, mc);
        return {est.value, est.std_error};
      }
    }
  };

  for (std::size_t i = 0; i < trials; ++i) {
    Direction x1(dirs.directions[2 * i]);
    Direction x2(dirs.directions[2 * i + 1]);
    RadialSolve s1 = radial_lambda(K, x1, delta, local);
    RadialSolve s2 = radial_lambda(K, x2, delta, local);
    Vec m = 0.5 * (s1.lambda_star * x1.coords() + s2.lambda_star * x2.coords());
    auto [value, se] = mstar_at_shift(m);
    double slack = value - delta * mstar + 3.0 * se + 1e-10 * mstar;
    rep.worst_margin = std::min(rep.worst_margin, slack);
    if (slack < 0.0) ++rep.violations;
  }
  return rep;
}

ProbeReport monotonicity_probe(const BodyDescriptor& K, double delta1, double delta2,
                               const std::vector<Direction>& directions,
                               const RadialOptions& opts) {
  if (!(delta1 > 0.0 && delta2 < 1.0 && delta1 <= delta2))
    throw std::invalid_argument("monotonicity_probe: need 0 < delta1 <= delta2 < 1");
  ProbeReport rep;
  rep.trials = directions.size();
  for (const Direction& x : directions) {
    RadialSolve a = radial_lambda(K, x, delta1, opts);
    RadialSolve b = radial_lambda(K, x, delta2, opts);
    double tol = 1e-9 * a.lambda_max + 4.0 * (opts.bracket_rel_tol * a.lambda_max);
    double slack = a.lambda_star + tol - b.lambda_star;
    rep.worst_margin = std::min(rep.worst_margin, slack);
    if (slack < 0.0) ++rep.violations;
  }
  return rep;
}

}  // namespace convbody
