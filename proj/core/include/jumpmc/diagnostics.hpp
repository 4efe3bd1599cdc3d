#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jumpmc/geometry.hpp"
#include "jumpmc/kernels.hpp"
#include "jumpmc/potentials.hpp"
#include "jumpmc/rng.hpp"

namespace jumpmc::diagnostics {

// Radial histogram estimate of the intensity (1-correlation) function,
// binned over [0, half_width] so every shell lies inside the box.
struct BinnedIntensity {
  std::vector<double> r_lo, r_hi, value, stderr_;
  int n_samples = 0;
};

BinnedIntensity estimate_rho1(const std::vector<geometry::Configuration>& samples,
                              const geometry::Domain& domain, int n_bins);

// Slope of log intensity against log radius: the growth exponent of the
// intensity, 0 for a translation-invariant field.
double fitted_growth_exponent(const BinnedIntensity& rho1);

// Var[xi(U_r)] / E[xi(U_r)]^2 rows with a log-log decay fit of the exponent
// delta (ratio = O(r^{-delta})). Radii with zero mean count are skipped.
struct VarianceRatioCurve {
  std::vector<double> r, ratio, stderr_;
  std::vector<std::string> notes;
  double delta_hat = 0.0;
  double delta_stderr = 0.0;
};

VarianceRatioCurve variance_ratio_curve(
    const std::vector<geometry::Configuration>& samples, const std::vector<double>& radii);

// Checks integral over x of rho1(x) integral_A p(|x-y|) dy <= R integral_A
// rho1 and reports the minimal R. One-dimensional boxes only: the inner
// integral has a closed form there and the outer is split at histogram edges.
struct RhojumpReport {
  double lhs = 0.0;
  double rhs_unit = 0.0;  // integral of rho1 over A
  double min_R = 0.0;
  bool finite = false;
  std::string note;
};

RhojumpReport rhojump_inequality_check(const BinnedIntensity& rho1,
                                       const kernels::EnvelopeSpec& env,
                                       const geometry::Domain& domain, double a_lo,
                                       double a_hi);

// Least-squares tail exponents of a radial envelope: slope on r >= 1 gives
// -(d + alpha), on r <= 1 gives -(d + beta). Each regime needs >= 3 points
// spanning at least 1.5 decades. gate: alpha_hat > kappa.
struct TailFit {
  double alpha_hat = 0.0, beta_hat = 0.0;
  double alpha_stderr = 0.0, beta_stderr = 0.0;
  bool gate_alpha_gt_kappa = false;
};

TailFit tail_exponent_fit(const std::vector<double>& r,
                          const std::vector<double>& p, int d, double kappa);
TailFit tail_exponent_fit(const kernels::EnvelopeSpec& env, int d, double kappa,
                          int points_per_regime = 40);

// Two-sample KS between an observable series from the dynamics and one from
// a reference sampler, with autocorrelation-adjusted effective sample sizes.
struct AuditResult {
  double ks = 0.0;
  double p_value = 0.0;
  double ess_dyn = 0.0;
  double ess_ref = 0.0;
  bool inconclusive = false;  // either effective sample size below 100
};

AuditResult stationarity_audit(const std::vector<double>& dynamics_series,
                               const std::vector<double>& reference_series);

// Smallest pairwise distance; +inf for fewer than two points.
double nearest_neighbor_distance(const geometry::Configuration& xi);

// Independence Metropolis sampler of the n-particle Gibbs weight e^{-H} on
// the box: every step redraws all coordinates uniformly and accepts with
// min(1, e^{-delta H}). The reference oracle for stationarity audits.
class MetropolisReference {
 public:
  MetropolisReference(const geometry::Domain& domain, const potentials::PotentialSpec& potential,
                      int n_particles, std::uint64_t seed);

  const geometry::Configuration& step();
  const geometry::Configuration& current() const { return state_; }
  long proposals() const { return proposals_; }
  long accepted() const { return accepted_; }

 private:
  geometry::Configuration draw();

  geometry::Domain domain_;
  potentials::PotentialSpec potential_;
  int n_;
  rng::Rng rng_;
  geometry::Configuration state_;
  double energy_ = 0.0;
  long proposals_ = 0;
  long accepted_ = 0;
};

}  // namespace jumpmc::diagnostics
