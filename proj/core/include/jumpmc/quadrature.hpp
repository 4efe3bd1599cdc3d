#pragma once

#include <functional>
#include <stdexcept>
#include <string>

#include "jumpmc/geometry.hpp"

namespace jumpmc::quadrature {

struct Options {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  int max_depth = 15;
};

// Raised when the adaptive scheme cannot certify the requested tolerance;
// carries the achieved error so callers can report instead of degrading.
struct QuadratureError : std::runtime_error {
  QuadratureError(const std::string& what, double achieved, double value)
      : std::runtime_error(what), achieved_error(achieved), value(value) {}
  double achieved_error;
  double value;
};

// Adaptive Gauss-Kronrod on [a, b]; empty or reversed intervals give 0.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opt = {});

// tanh-sinh variant for integrable endpoint singularities (r^{1-alpha} etc).
double integrate_singular(const std::function<double(double)>& f, double a,
                          double b, const Options& opt = {});

// First t > 0 with x + t*dir on the box boundary; x must be inside.
double ray_exit(const geometry::Domain& dom, const geometry::Point& x,
                const geometry::Point& dir);

// Integral of g over {y in box : r_lo <= |y - x| <= r_hi}. d=1 splits into
// segments, d=2 integrates in polar coordinates with the angular domain cut
// at the corner directions so the exit radius is smooth on each arc. d=3 is
// not supported by the quadrature layer.
double integrate_box_shell(const geometry::Domain& dom,
                           const geometry::Point& x, double r_lo, double r_hi,
                           const std::function<double(const geometry::Point&)>& g,
                           const Options& opt = {});

}  // namespace jumpmc::quadrature
