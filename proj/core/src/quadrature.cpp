#include "jumpmc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace jumpmc::quadrature {

namespace {

// scale is the L1 norm of the integrand, the reference the underlying
// schemes certify against; |value| alone collapses for cancelling integrals.
void check_converged(const char* who, double value, double err, double scale,
                     const Options& opt) {
  const double allowed =
      std::max(opt.abs_tol, opt.rel_tol * std::max(scale, std::abs(value)));
  if (!(err <= allowed) || !std::isfinite(value)) {
    char msg[160];
    std::snprintf(msg, sizeof msg, "%s: error estimate %.3e exceeds tolerance %.3e",
                  who, err, allowed);
    throw QuadratureError(msg, err, value);
  }
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opt) {
  if (!(b > a)) return 0.0;
  // Clipped endpoints can land a few rounding units apart (a shell edge on a
  // wall, say); the scheme's error estimate on such slivers is pure noise,
  // and one midpoint panel is already exact at that width.
  const double ulp = std::numeric_limits<double>::epsilon() *
                     std::max(std::abs(a), std::abs(b));
  if (b - a <= 16.0 * ulp) return f(0.5 * (a + b)) * (b - a);
  double err = 0.0, l1 = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, static_cast<unsigned>(opt.max_depth), opt.rel_tol, &err, &l1);
  check_converged("integrate", v, err, l1, opt);
  return v;
}

double integrate_singular(const std::function<double(double)>& f, double a,
                          double b, const Options& opt) {
  if (!(b > a)) return 0.0;
  boost::math::quadrature::tanh_sinh<double> integrator(
      static_cast<std::size_t>(opt.max_depth));
  double err = 0.0, l1 = 0.0;
  const double v = integrator.integrate(f, a, b, opt.rel_tol, &err, &l1);
  // tanh_sinh reports relative error against the L1 norm.
  const double scale = std::max(l1, std::abs(v));
  check_converged("integrate_singular", v, err * scale, scale, opt);
  return v;
}

double ray_exit(const geometry::Domain& dom, const geometry::Point& x,
                const geometry::Point& dir) {
  double t = std::numeric_limits<double>::infinity();
  for (int k = 0; k < dom.dim; ++k) {
    if (dir[k] > 0.0)
      t = std::min(t, (dom.half_width - x[k]) / dir[k]);
    else if (dir[k] < 0.0)
      t = std::min(t, (-dom.half_width - x[k]) / dir[k]);
  }
  return std::max(t, 0.0);
}

namespace {

double shell_1d(const geometry::Domain& dom, const geometry::Point& x,
                double r_lo, double r_hi,
                const std::function<double(const geometry::Point&)>& g,
                const Options& opt) {
  const double L = dom.half_width;
  auto eval = [&](double y) {
    geometry::Point p;
    p.dim = 1;
    p[0] = y;
    return g(p);
  };
  double total = 0.0;
  const double a1 = std::max(-L, x[0] - r_hi), b1 = std::min(L, x[0] - r_lo);
  const double a2 = std::max(-L, x[0] + r_lo), b2 = std::min(L, x[0] + r_hi);
  if (b1 > a1) total += integrate(eval, a1, b1, opt);
  if (b2 > a2) total += integrate(eval, a2, b2, opt);
  return total;
}

double shell_2d(const geometry::Domain& dom, const geometry::Point& x,
                double r_lo, double r_hi,
                const std::function<double(const geometry::Point&)>& g,
                const Options& opt) {
  const double L = dom.half_width;
  // Split the angular domain into arcs on which the integrand is smooth:
  // at corner directions (kinks of the exit radius) and where the shell
  // circles cross a wall (the radial interval switches branch there).
  std::vector<double> cuts;
  auto push = [&](double dx, double dy) {
    double a = std::atan2(dy, dx);
    if (a < 0.0) a += 2.0 * M_PI;
    cuts.push_back(a);
  };
  for (double cx : {-L, L})
    for (double cy : {-L, L}) push(cx - x[0], cy - x[1]);
  for (double rho : {r_lo, r_hi}) {
    if (!(rho > 0.0)) continue;
    for (double w : {-L, L}) {
      const double dx = w - x[0];
      if (std::abs(dx) <= rho) {
        const double dy = std::sqrt(rho * rho - dx * dx);
        if (std::abs(x[1] + dy) <= L) push(dx, dy);
        if (std::abs(x[1] - dy) <= L) push(dx, -dy);
      }
      const double dy2 = w - x[1];
      if (std::abs(dy2) <= rho) {
        const double dx2 = std::sqrt(rho * rho - dy2 * dy2);
        if (std::abs(x[0] + dx2) <= L) push(dx2, dy2);
        if (std::abs(x[0] - dx2) <= L) push(-dx2, dy2);
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  cuts.push_back(cuts.front() + 2.0 * M_PI);

  Options inner = opt;
  inner.rel_tol = opt.rel_tol * 0.25;
  inner.abs_tol = opt.abs_tol * 0.25;

  auto angular = [&](double theta) {
    geometry::Point dir;
    dir.dim = 2;
    dir[0] = std::cos(theta);
    dir[1] = std::sin(theta);
    const double r_exit = ray_exit(dom, x, dir);
    const double hi = std::min(r_hi, r_exit);
    if (!(hi > r_lo)) return 0.0;
    auto radial = [&](double r) {
      geometry::Point p;
      p.dim = 2;
      p[0] = x[0] + r * dir[0];
      p[1] = x[1] + r * dir[1];
      return g(p) * r;
    };
    return integrate(radial, r_lo, hi, inner);
  };

  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
    total += integrate(angular, cuts[k], cuts[k + 1], opt);
  return total;
}

}  // namespace

double integrate_box_shell(const geometry::Domain& dom,
                           const geometry::Point& x, double r_lo, double r_hi,
                           const std::function<double(const geometry::Point&)>& g,
                           const Options& opt) {
  if (!(r_hi > r_lo)) return 0.0;
  switch (dom.dim) {
    case 1:
      return shell_1d(dom, x, r_lo, r_hi, g, opt);
    case 2:
      return shell_2d(dom, x, r_lo, r_hi, g, opt);
    default:
      throw std::invalid_argument(
          "integrate_box_shell: quadrature supports dimension 1 and 2 only");
  }
}

}  // namespace jumpmc::quadrature
