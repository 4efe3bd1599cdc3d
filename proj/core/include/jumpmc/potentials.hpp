#pragma once

#include <functional>
#include <optional>
#include <string>

#include "jumpmc/geometry.hpp"

namespace jumpmc::potentials {

// Energies are extended reals: +inf encodes a forbidden state (hard-core
// overlap, coincident points under a singular pair potential). -inf never
// escapes this module; it is clamped to -kEnergyClamp with a warning so a
// chain that walks into an attractive singularity fails loudly downstream
// instead of poisoning every later sum with NaNs.
using Energy = double;

inline constexpr double kEnergyClamp = 1e30;

enum class SelfKind { zero, quadratic, table };
enum class PairKind { zero, lennard_jones, riesz, logarithmic, hard_core };

struct PotentialSpec {
  SelfKind self = SelfKind::zero;
  double self_strength = 1.0;  // quadratic: phi(x) = self_strength * |x|^2
  std::function<double(const geometry::Point&)> self_table;

  PairKind pair = PairKind::zero;
  double riesz_a = 0.0;           // riesz: psi(r) = r^{-a}, requires a > d
  double log_beta = 0.0;          // logarithmic: psi(r) = sign * beta * log r
  int log_sign = -1;              // -1 with beta = 2 gives psi = -2 log r
  double hard_core_radius = 0.0;  // hard_core: +inf inside, 0 outside
  double scale = 1.0;             // multiplies the whole pair potential

  void validate(int dim) const;
};

// Hook for the rare -inf clamp events. Default handler writes to stderr.
void set_energy_warning_handler(std::function<void(const std::string&)> h);

Energy self_potential(const PotentialSpec& spec, const geometry::Point& x);
Energy pair_potential(const PotentialSpec& spec, const geometry::Point& x,
                      const geometry::Point& y);

// Energy of the particle at x against the rest of xi (self term included).
// If skip >= 0, particle `skip` is excluded from the pair sum; pass the
// particle's own index when x is a point of xi.
Energy local_energy(const PotentialSpec& spec,
                    const geometry::Configuration& xi,
                    const geometry::Point& x, int skip = -1);
Energy local_energy_of(const PotentialSpec& spec,
                       const geometry::Configuration& xi, int i);

// Sum of self terms over points of xi (restricted to the origin-centered box
// of half-width *sub_half_width* when given) plus pair terms over unordered
// pairs inside the same region. Empty configuration -> 0.
Energy hamiltonian(const PotentialSpec& spec,
                   const geometry::Configuration& xi,
                   std::optional<double> sub_half_width = std::nullopt);

// H(xi with particle i at y) - H(xi), touching only terms with particle i.
// After-side +inf wins (the move stays rejected even out of a forbidden
// state); before-side +inf alone is clamped to -kEnergyClamp.
Energy move_energy_delta(const PotentialSpec& spec,
                         const geometry::Configuration& xi, int i,
                         const geometry::Point& y);

// Without probe: 1 iff every particle's local energy has magnitude <= q.
// With probe y: 1 iff |phi(y) + sum_j psi(y, x_j)| <= q.
int energy_indicator_lambda_q(const PotentialSpec& spec,
                              const geometry::Configuration& xi, double q);
int energy_indicator_lambda_q(const PotentialSpec& spec,
                              const geometry::Configuration& xi, double q,
                              const geometry::Point& probe);

}  // namespace jumpmc::potentials
