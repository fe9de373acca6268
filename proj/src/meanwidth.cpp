#include "convbody/meanwidth.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "convbody/constants.hpp"
#include "convbody/errors.hpp"
#include "convbody/parallel.hpp"
#include "convbody/quadrature.hpp"

namespace convbody {

const char* to_string(MwMethod m) {
  switch (m) {
    case MwMethod::mc: return "mc";
    case MwMethod::lens_quadrature: return "lens-quadrature";
    default: return "box-closed";
  }
}

namespace {

using SupportFn = std::function<double(const Vec&)>;

// Pre-resolves the dispatch once so the per-sample call is as small as the
// pair allows.
SupportFn make_support_fn(const ShiftedIntersection& S, const InfconvOptions& opts) {
  const BodyDescriptor& K = S.K();
  const BodyDescriptor& L = S.L();
  const Vec& t = S.shift();

  const Box* bk = std::get_if<Box>(&K.shape());
  const Box* bl = std::get_if<Box>(&L.shape());
  if (bk && bl) {
    std::size_t n = S.dim();
    Vec lo(n), hi(n);
    for (std::size_t j = 0; j < n; ++j) {
      lo[j] = std::max(-bk->half_sides[j], t[j] - bl->half_sides[j]);
      hi[j] = std::min(bk->half_sides[j], t[j] + bl->half_sides[j]);
      if (lo[j] > hi[j] + 1e-12) throw EmptyBodyError("mean_width_mc: empty box intersection");
      if (lo[j] > hi[j]) lo[j] = hi[j];
    }
    return [lo, hi](const Vec& u) {
      double s = 0.0;
      for (std::size_t j = 0; j < u.size(); ++j) s += std::max(lo[j] * u[j], hi[j] * u[j]);
      return s;
    };
  }

  const Ball* ck = std::get_if<Ball>(&K.shape());
  const Ball* cl = std::get_if<Ball>(&L.shape());
  if (ck && cl && ck->radius == cl->radius) {
    double r = ck->radius;
    double tn = norm2(t);
    if (tn == 0.0) return [r](const Vec&) { return r; };
    double lambda = tn / r;
    Vec axis = (1.0 / tn) * t;
    return [r, lambda, axis](const Vec& u) { return r * lens_support(lambda, dot(axis, u)); };
  }

  if (is_polytopal(K) && is_polytopal(L)) {
    ShiftedIntersection copy = S;
    return [copy](const Vec& u) { return support_intersection(copy, Direction(u)).value; };
  }

  ShiftedIntersection copy = S;
  InfconvOptions o = opts;
  return [copy, o](const Vec& u) { return infconv_support(copy, Direction(u), o.tol, o.max_iter).value; };
}

MeanWidthEstimate mc_average(const SupportFn& h, const SphereSample& sample, int jobs) {
  if (sample.count() == 0) throw std::invalid_argument("mean_width_mc: empty sample");
  const bool paired = sample.antithetic;
  const std::size_t m = paired ? sample.count() / 2 : sample.count();
  std::vector<double> vals(m);

  parallel_for(m, jobs, [&](std::size_t i) {
    try {
      if (paired) {
        double a = h(sample.directions[2 * i]);
        double b = h(sample.directions[2 * i + 1]);
        vals[i] = 0.5 * (a + b);
      } else {
        vals[i] = h(sample.directions[i]);
      }
    } catch (const NonConvergenceError& e) {
      throw NumericalFailure("mean_width_mc: solver failed at sample direction " +
                             std::to_string(i) + ": " + e.what());
    } catch (const EmptyBodyError& e) {
      throw NumericalFailure("mean_width_mc: solver failed at sample direction " +
                             std::to_string(i) + ": " + e.what());
    }
  });

  MeanWidthEstimate est;
  est.method = MwMethod::mc;
  est.n_samples = sample.count();
  est.seed = sample.seed;
  est.value = pairwise_mean(vals);
  if (m >= 2) {
    std::vector<double> sq(m);
    for (std::size_t i = 0; i < m; ++i) {
      double d = vals[i] - est.value;
      sq[i] = d * d;
    }
    double var = pairwise_sum(sq) / static_cast<double>(m - 1);
    est.std_error = std::sqrt(var / static_cast<double>(m));
  }
  return est;
}

}  // namespace

MeanWidthEstimate mean_width_mc(const BodyDescriptor& body, const SphereSample& sample,
                                const McOptions& opts) {
  if (body.dim() != sample.dim) throw std::invalid_argument("mean_width_mc: dimension mismatch");
  BodyDescriptor copy = body;
  SupportFn h = [copy](const Vec& u) { return support_raw(copy, u).value; };
  return mc_average(h, sample, opts.jobs);
}

MeanWidthEstimate mean_width_mc(const ShiftedIntersection& S, const SphereSample& sample,
                                const McOptions& opts) {
  if (S.dim() != sample.dim) throw std::invalid_argument("mean_width_mc: dimension mismatch");
  return mc_average(make_support_fn(S, opts.infconv), sample, opts.jobs);
}

MeanWidthEstimate lens_mean_width_quadrature(std::size_t n, double lambda) {
  if (n < 2) throw std::invalid_argument("lens_mean_width_quadrature: dimension must be >= 2");
  if (lambda < 0.0) throw std::invalid_argument("lens_mean_width_quadrature: lambda must be >= 0");
  if (lambda > 2.0) throw EmptyBodyError("lens_mean_width_quadrature: lambda > 2");

  // Substituting c = cos(theta) removes the endpoint singularity of the
  // density: the integrand becomes lens_support(lambda, cos t) sin^{n-2} t.
  // The support has kinks at c = ±lambda/2; split there.
  const double half = std::min(1.0, 0.5 * lambda);
  const double theta_1 = std::acos(half);
  const double theta_2 = std::acos(-half);
  const double pi = std::numbers::pi_v<double>;
  auto f = [n, lambda](double theta) {
    return lens_support(lambda, std::cos(theta)) *
           std::pow(std::sin(theta), static_cast<double>(n - 2));
  };
  double tol = 1e-13;
  double num = adaptive_gauss_legendre(f, 0.0, theta_1, tol) +
               adaptive_gauss_legendre(f, theta_1, theta_2, tol) +
               adaptive_gauss_legendre(f, theta_2, pi, tol);
  double den = sin_power_integral(n - 2);

  MeanWidthEstimate est;
  est.method = MwMethod::lens_quadrature;
  est.value = num / den;
  return est;
}

MeanWidthEstimate box_mean_width_closed(const Vec& half_sides, const Vec& t) {
  if (half_sides.empty() || half_sides.size() != t.size())
    throw std::invalid_argument("box_mean_width_closed: size mismatch");
  double widths = 0.0;
  for (std::size_t j = 0; j < half_sides.size(); ++j) {
    double w = 2.0 * half_sides[j] - std::fabs(t[j]);
    if (w < -1e-12) throw EmptyBodyError("box_mean_width_closed: empty intersection");
    widths += std::max(0.0, w);
  }
  MeanWidthEstimate est;
  est.method = MwMethod::box_closed;
  est.value = 0.5 * cn_closed_form(half_sides.size()) * widths;
  return est;
}

}  // namespace convbody
