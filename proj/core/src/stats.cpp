#include "jumpmc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace jumpmc::stats {

void RunningStat::add(double x) {
  ++n;
  const double d = x - mean;
  mean += d / static_cast<double>(n);
  m2 += d * (x - mean);
}

double RunningStat::variance() const {
  if (n < 2) return 0.0;
  return m2 / static_cast<double>(n - 1);
}

double RunningStat::stderr_mean() const {
  if (n < 2) return 0.0;
  return std::sqrt(variance() / static_cast<double>(n));
}

RunningStat RunningStat::merge(const RunningStat& a, const RunningStat& b) {
  if (a.n == 0) return b;
  if (b.n == 0) return a;
  RunningStat out;
  out.n = a.n + b.n;
  const double d = b.mean - a.mean;
  const double na = static_cast<double>(a.n), nb = static_cast<double>(b.n);
  out.mean = a.mean + d * nb / (na + nb);
  out.m2 = a.m2 + b.m2 + d * d * na * nb / (na + nb);
  return out;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("ks_statistic: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  return d;
}

double ks_p_value(double d, double n_eff) {
  if (n_eff <= 0.0) return 1.0;
  const double sq = std::sqrt(n_eff);
  const double lambda = (sq + 0.12 + 0.11 / sq) * d;
  if (lambda <= 0.0) return 1.0;
  constexpr double pi = 3.14159265358979323846;
  if (lambda < 1.18) {
    // Theta-dual form of the Kolmogorov law; the tail series alternates
    // too slowly here.
    const double t = std::exp(-pi * pi / (8.0 * lambda * lambda));
    const double cdf =
        std::sqrt(2.0 * pi) / lambda *
        (t + std::pow(t, 9.0) + std::pow(t, 25.0) + std::pow(t, 49.0));
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term =
        2.0 * std::pow(-1.0, k - 1) * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-12) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

double chi_square_p(const std::vector<double>& observed,
                    const std::vector<double>& expected,
                    int extra_constraints) {
  if (observed.size() != expected.size() || observed.empty())
    throw std::invalid_argument("chi_square_p: size mismatch");
  double stat = 0.0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    if (!(expected[k] > 0.0))
      throw std::invalid_argument("chi_square_p: nonpositive expected count");
    const double d = observed[k] - expected[k];
    stat += d * d / expected[k];
  }
  const int dof = static_cast<int>(observed.size()) - 1 - extra_constraints;
  if (dof < 1) throw std::invalid_argument("chi_square_p: dof < 1");
  return boost::math::gamma_q(0.5 * dof, 0.5 * stat);
}

double autocorrelation_time(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n < 4) return 1.0;
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double c0 = 0.0;
  for (double v : x) c0 += (v - mean) * (v - mean);
  c0 /= static_cast<double>(n);
  if (c0 == 0.0) return 1.0;
  double tau = 1.0;
  const std::size_t max_lag = n / 3;
  for (std::size_t k = 1; k <= max_lag; ++k) {
    double ck = 0.0;
    for (std::size_t t = 0; t + k < n; ++t)
      ck += (x[t] - mean) * (x[t + k] - mean);
    ck /= static_cast<double>(n - k);
    const double rho = ck / c0;
    if (rho <= 0.0) break;  // initial positive sequence truncation
    tau += 2.0 * rho;
  }
  return tau;
}

double effective_sample_size(const std::vector<double>& x) {
  if (x.empty()) return 0.0;
  return static_cast<double>(x.size()) / autocorrelation_time(x);
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3)
    throw std::invalid_argument("fit_line: need at least 3 points");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate x range");
  LineFit out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (out.intercept + out.slope * x[i]);
    ss_res += r * r;
  }
  if (x.size() > 2)
    out.slope_stderr = std::sqrt(ss_res / (n - 2.0) / sxx);
  return out;
}

}  // namespace jumpmc::stats
