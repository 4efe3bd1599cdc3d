#pragma once

#include <optional>

#include "jumpmc/geometry.hpp"
#include "jumpmc/kernels.hpp"
#include "jumpmc/potentials.hpp"

namespace jumpmc::rates {

// gibbs_closed_form: c = nu(xi,x;y) + nu(xi^{xy},y;x) e^{-delta H}, the
// detailed-balance composition for the Gibbs weight e^{-H}.
// free: c = 2 nu, the zero-interaction reduction (requires Phi = Psi = 0).
// ginibre_truncated: the d=2 product-form rate with the infinite product
// replaced by the finite product over particles inside a truncation radius.
enum class RateMode { gibbs_closed_form, free, ginibre_truncated };

struct RateSpec {
  geometry::Domain domain;
  kernels::KernelSpec kernel;
  potentials::PotentialSpec potential;
  RateMode mode = RateMode::gibbs_closed_form;
  double ginibre_radius = 0.0;
  kernels::EnvelopeSpec envelope;  // proposal envelope; also the jump range mask

  // Fills the envelope from the kernel/domain defaults and validates.
  static RateSpec build(const geometry::Domain& domain,
                        const kernels::KernelSpec& kernel,
                        const potentials::PotentialSpec& potential,
                        RateMode mode = RateMode::gibbs_closed_form);

  void validate() const;
};

// c(xi, x_i; y). Zero outside the truncated jump range
// [envelope.r_min, envelope.r_max] and outside the box (the finite-volume
// dynamics is confined); the mask depends on |x_i - y| only, so it preserves
// detailed balance. Callers must keep H(xi) finite.
double jump_rate(const RateSpec& spec, const geometry::Configuration& xi,
                 int i, const geometry::Point& y);

// Relative detailed-balance defect of the flux identity
// c(xi,x;y) e^{-H(xi)} = c(xi^{xy},y;x) e^{-H(xi^{xy})}, computed in the log
// domain so large energies cannot overflow. nullopt when either side has
// infinite energy (the identity is vacuous there); 0 when both rates vanish.
std::optional<double> detailed_balance_residual(
    const RateSpec& spec, const geometry::Configuration& xi, int i,
    const geometry::Point& y);

// d=2 truncated product rate: nu + nu(xi^{xy},y;x) * prod over particles with
// |x_j| < r_trunc, j != i, of |y-x_j|^2 / |x_i-x_j|^2. An approximation to
// the limit product; no convergence claim is made.
double ginibre_truncated_rate(const RateSpec& spec,
                              const geometry::Configuration& xi, int i,
                              const geometry::Point& y);

// Birth-death rates of the Glauber chain: unit death rate per particle,
// birth rate density z e^{-local energy of y against xi}. Infinite local
// energy (hard-core overlap) gives birth rate 0.
double glauber_birth_rate(const potentials::PotentialSpec& potential,
                          const geometry::Configuration& xi,
                          const geometry::Point& y, double z);
double glauber_death_rate(const geometry::Configuration& xi, int i);

}  // namespace jumpmc::rates
