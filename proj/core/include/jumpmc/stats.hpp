#pragma once

#include <cstddef>
#include <vector>

namespace jumpmc::stats {

// Welford accumulator; merge is associative so replica results can fold.
struct RunningStat {
  long long n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x);
  double variance() const;  // unbiased, 0 for n < 2
  double stderr_mean() const;
  static RunningStat merge(const RunningStat& a, const RunningStat& b);
};

// Two-sample Kolmogorov-Smirnov distance (copies are sorted internally).
double ks_statistic(std::vector<double> a, std::vector<double> b);

// Asymptotic KS p-value at effective sample size n_eff.
double ks_p_value(double d, double n_eff);

// Chi-square goodness-of-fit p-value; bins with expected < 5 should be merged
// by the caller. dof = bins - 1 - extra_constraints.
double chi_square_p(const std::vector<double>& observed,
                    const std::vector<double>& expected, int extra_constraints);

// Integrated autocorrelation time with initial-positive truncation, and the
// effective sample size n / (1 + 2 sum rho_k).
double autocorrelation_time(const std::vector<double>& x);
double effective_sample_size(const std::vector<double>& x);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace jumpmc::stats
