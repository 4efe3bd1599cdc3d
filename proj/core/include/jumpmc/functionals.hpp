#pragma once

#include <functional>
#include <vector>

#include "jumpmc/geometry.hpp"
#include "jumpmc/kernels.hpp"
#include "jumpmc/quadrature.hpp"

namespace jumpmc::functionals {

// Polynomial local function F(xi) = Q(<phi_1, xi>, ..., <phi_l, xi>) built
// from compactly supported radial bumps phi_k (peak value 1 at the center).
struct TestFunction {
  struct Bump {
    geometry::Point center;
    double radius = 1.0;
  };
  struct Term {
    double coeff = 0.0;
    std::vector<int> powers;  // one exponent per bump
  };
  std::vector<Bump> bumps;
  std::vector<Term> terms;

  void validate() const;
};

double bump_value(const TestFunction::Bump& bump, const geometry::Point& x);
double eval_polynomial(const TestFunction& f,
                       const geometry::Configuration& xi);
double discrete_gradient(const TestFunction& f,
                         const geometry::Configuration& xi, int i,
                         const geometry::Point& y);

using ConfigFn = std::function<double(const geometry::Configuration&)>;

// Carre-du-champ of the jump form at xi:
//   (1/2) sum_i integral (F(xi^{x_i y}) - F(xi)) (G(...) - G(xi)) nu dy
// over the truncated jump range [r_min, box diameter]. r_min <= 0 picks the
// default small-jump cutoff 1e-3 * half_width.
double square_field(const ConfigFn& F, const ConfigFn& G,
                    const kernels::KernelSpec& kernel,
                    const geometry::Domain& domain,
                    const geometry::Configuration& xi, double r_min = 0.0,
                    const quadrature::Options& opt = {});
double square_field(const TestFunction& F, const TestFunction& G,
                    const kernels::KernelSpec& kernel,
                    const geometry::Domain& domain,
                    const geometry::Configuration& xi, double r_min = 0.0,
                    const quadrature::Options& opt = {});

struct Estimate {
  double value = 0.0;
  double stderr_ = 0.0;
};

// Monte-Carlo Dirichlet energy: mean of square_field(F, F) over sampled
// equilibrium configurations.
Estimate dirichlet_energy(
    const ConfigFn& F, const kernels::KernelSpec& kernel,
    const geometry::Domain& domain,
    const std::function<geometry::Configuration()>& sampler, int n_samples,
    double r_min = 0.0);

// Dyadic cutoff sequence a_r = n 2^{(d+kappa) r}; a_0 = n.
struct CutoffSequence {
  int n = 1;
  int d = 1;
  double kappa = 0.0;

  double a(int r) const;
  void validate() const;
};

// d_a(xi) = sum_{r>=1} sum_{j in J_r} ((2^r - |x_j|) ^ 2^{r-1}) / (2^{r-1} a_r)
// with J_r = { j : j > a_r, |x_j| <= 2^r } over points sorted by
// nondecreasing norm (1-based). Accumulation stops once the partial sum
// reaches 1 or once a_r exceeds the particle count (all later J_r empty).
double d_a(const geometry::Configuration& xi, const CutoffSequence& a);

// rho: 1 on t < 0, 1 - t on [0, 1], 0 on t > 1.
double rho_profile(double t);

// chi[a] = rho(d_a): exactly 1 on M[a], exactly 0 outside M[2a_+].
double chi_a(const geometry::Configuration& xi, const CutoffSequence& a);

// xi(U_{2^r}) <= a_r for r = 0, 1, ... up to the radius covering the box.
bool in_M_a(const geometry::Configuration& xi, const CutoffSequence& a,
            const geometry::Domain& domain);
// Same with the shifted doubled sequence r -> 2 a_{r+1}.
bool in_M_2a_plus(const geometry::Configuration& xi, const CutoffSequence& a,
                  const geometry::Domain& domain);

struct BoundSumsReport {
  double sum1 = 0.0, bound1 = 0.0;  // sum_r (2a_{r+1}+1) / (2^{2r-4} a_{r-1}^2)
  double sum2 = 0.0, bound2 = 0.0;  // sum_r (2a_{r+1}+1) / a_{r-1}^2
  double sum3 = 0.0, bound3 = 0.0;  // off-diagonal double sum, see bound_sums
  bool ok = false;
};

// Numerically sums the three series behind the cutoff-sequence estimates and
// compares each to its geometric closed-form majorant (equalities at n = 1
// for the first two). Terms are added until they drop below 1e-16; requires
// alpha > kappa, otherwise the double sum diverges.
BoundSumsReport bound_sums(int n, int d, double kappa, double alpha);

}  // namespace jumpmc::functionals
