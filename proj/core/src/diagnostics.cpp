#include "jumpmc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "jumpmc/quadrature.hpp"
#include "jumpmc/stats.hpp"

namespace jumpmc::diagnostics {

using geometry::Configuration;
using geometry::Domain;
using geometry::Point;
using kernels::EnvelopeSpec;
using potentials::PotentialSpec;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double shell_volume(int d, double r_lo, double r_hi) {
  switch (d) {
    case 1: return 2.0 * (r_hi - r_lo);
    case 2: return std::numbers::pi * (r_hi * r_hi - r_lo * r_lo);
    case 3:
      return 4.0 * std::numbers::pi / 3.0 *
             (r_hi * r_hi * r_hi - r_lo * r_lo * r_lo);
    default: throw std::invalid_argument("shell_volume: bad dimension");
  }
}

}  // namespace

BinnedIntensity estimate_rho1(const std::vector<Configuration>& samples,
                              const Domain& domain, int n_bins) {
  domain.validate();
  if (samples.size() < 2)
    throw std::invalid_argument("estimate_rho1: need at least 2 samples");
  if (n_bins < 1) throw std::invalid_argument("estimate_rho1: n_bins < 1");

  const double r_cap = domain.half_width;  // inscribed ball
  std::vector<stats::RunningStat> acc(n_bins);
  for (const Configuration& xi : samples) {
    if (xi.dim() != domain.dim)
      throw std::invalid_argument("estimate_rho1: dimension mismatch");
    std::vector<int> counts(n_bins, 0);
    for (int i = 0; i < xi.size(); ++i) {
      const double r = geometry::norm(xi.point(i));
      if (r >= r_cap) continue;
      const int b = std::min(n_bins - 1,
                             static_cast<int>(r / r_cap * n_bins));
      ++counts[b];
    }
    for (int b = 0; b < n_bins; ++b) {
      const double vol = shell_volume(domain.dim, b * r_cap / n_bins,
                                      (b + 1) * r_cap / n_bins);
      acc[b].add(counts[b] / vol);
    }
  }
  BinnedIntensity out;
  out.n_samples = static_cast<int>(samples.size());
  for (int b = 0; b < n_bins; ++b) {
    out.r_lo.push_back(b * r_cap / n_bins);
    out.r_hi.push_back((b + 1) * r_cap / n_bins);
    out.value.push_back(acc[b].mean);
    out.stderr_.push_back(acc[b].stderr_mean());
  }
  return out;
}

double fitted_growth_exponent(const BinnedIntensity& rho1) {
  std::vector<double> lx, ly;
  for (std::size_t b = 0; b < rho1.value.size(); ++b) {
    if (rho1.value[b] <= 0.0) continue;
    lx.push_back(std::log(0.5 * (rho1.r_lo[b] + rho1.r_hi[b])));
    ly.push_back(std::log(rho1.value[b]));
  }
  return stats::fit_line(lx, ly).slope;
}

VarianceRatioCurve variance_ratio_curve(
    const std::vector<Configuration>& samples,
    const std::vector<double>& radii) {
  if (samples.size() < 20)
    throw std::invalid_argument("variance_ratio_curve: need >= 20 samples");
  VarianceRatioCurve out;
  const int n_batches = 10;
  const std::size_t batch = samples.size() / n_batches;
  std::vector<double> fit_x, fit_y;
  for (double r : radii) {
    stats::RunningStat all;
    for (const Configuration& xi : samples)
      all.add(static_cast<double>(geometry::count_in_ball(xi, r)));
    if (all.mean == 0.0) {
      out.notes.push_back("r=" + std::to_string(r) +
                          ": zero mean count, skipped");
      continue;
    }
    const double ratio = all.variance() / (all.mean * all.mean);
    // Spread of the ratio over sample batches.
    stats::RunningStat batches;
    for (int b = 0; b < n_batches; ++b) {
      stats::RunningStat part;
      for (std::size_t s = b * batch; s < (b + 1) * batch; ++s)
        part.add(static_cast<double>(geometry::count_in_ball(samples[s], r)));
      if (part.mean > 0.0)
        batches.add(part.variance() / (part.mean * part.mean));
    }
    out.r.push_back(r);
    out.ratio.push_back(ratio);
    out.stderr_.push_back(batches.n > 1
                              ? std::sqrt(batches.variance() /
                                          static_cast<double>(batches.n))
                              : 0.0);
    if (ratio > 0.0) {
      fit_x.push_back(std::log(r));
      fit_y.push_back(std::log(ratio));
    }
  }
  if (fit_x.size() >= 3) {
    const auto fit = stats::fit_line(fit_x, fit_y);
    out.delta_hat = -fit.slope;
    out.delta_stderr = fit.slope_stderr;
  } else {
    out.notes.push_back("too few usable radii for a decay fit");
  }
  return out;
}

namespace {

// integral of the envelope profile over radii [a, b] as a 1-d line density,
// clipped to the envelope support [r_min, r_max]
double envelope_line_integral(const EnvelopeSpec& env, double a, double b) {
  a = std::max(a, env.r_min);
  b = std::min(b, env.r_max);
  if (!(b > a)) return 0.0;
  const auto piece = [&](double lo, double hi, double expo) {
    if (!(hi > lo)) return 0.0;
    const double g = expo;  // integrand r^{-(1+g)} for d = 1
    if (g == 0.0) return env.scale * std::log(hi / lo);
    return env.scale * (std::pow(lo, -g) - std::pow(hi, -g)) / g;
  };
  return piece(a, std::min(b, 1.0), env.beta_origin) +
         piece(std::max(a, 1.0), b, env.alpha_tail);
}

}  // namespace

RhojumpReport rhojump_inequality_check(const BinnedIntensity& rho1,
                                       const EnvelopeSpec& env,
                                       const Domain& domain, double a_lo,
                                       double a_hi) {
  domain.validate();
  env.validate();
  if (domain.dim != 1)
    throw std::invalid_argument(
        "rhojump_inequality_check: one-dimensional boxes only");
  if (!(a_lo < a_hi) || a_lo < -domain.half_width ||
      a_hi > domain.half_width)
    throw std::invalid_argument(
        "rhojump_inequality_check: test interval outside the box");
  if (rho1.value.empty())
    throw std::invalid_argument("rhojump_inequality_check: empty histogram");

  const auto rho_at = [&](double x) {
    const double r = std::abs(x);
    for (std::size_t b = 0; b < rho1.value.size(); ++b)
      if (r >= rho1.r_lo[b] && r < rho1.r_hi[b]) return rho1.value[b];
    return 0.0;
  };
  // inner(x) = integral over y in A of p(|x-y|) dy, in closed form
  const auto inner = [&](double x) {
    if (x <= a_lo) return envelope_line_integral(env, a_lo - x, a_hi - x);
    if (x >= a_hi) return envelope_line_integral(env, x - a_hi, x - a_lo);
    return envelope_line_integral(env, 0.0, x - a_lo) +
           envelope_line_integral(env, 0.0, a_hi - x);
  };

  RhojumpReport rep;
  // rhs: piecewise-constant rho1 over A, exact segment sums
  for (std::size_t b = 0; b < rho1.value.size(); ++b) {
    const auto overlap = [&](double lo, double hi) {
      return std::max(0.0, std::min(hi, a_hi) - std::max(lo, a_lo));
    };
    rep.rhs_unit += rho1.value[b] * (overlap(rho1.r_lo[b], rho1.r_hi[b]) +
                                     overlap(-rho1.r_hi[b], -rho1.r_lo[b]));
  }
  // lhs: quadrature split at histogram edges and interval ends
  std::vector<double> cuts = {-domain.half_width, domain.half_width, a_lo,
                              a_hi};
  for (std::size_t b = 0; b < rho1.value.size(); ++b) {
    for (double e : {rho1.r_lo[b], rho1.r_hi[b]}) {
      cuts.push_back(e);
      cuts.push_back(-e);
    }
  }
  // kinks of inner(x) where |x - a| crosses the envelope break radii
  for (double brk : {env.r_min, 1.0, env.r_max}) {
    for (double a : {a_lo, a_hi}) {
      cuts.push_back(a - brk);
      cuts.push_back(a + brk);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  quadrature::Options opt;
  opt.rel_tol = 1e-9;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double lo = std::max(cuts[s], -domain.half_width);
    const double hi = std::min(cuts[s + 1], domain.half_width);
    if (!(hi > lo + 1e-15)) continue;
    rep.lhs += quadrature::integrate(
        [&](double x) { return rho_at(x) * inner(x); }, lo, hi, opt);
  }
  if (rep.rhs_unit <= 0.0) {
    rep.finite = false;
    rep.note = "zero right-hand side: minimal R undefined";
    return rep;
  }
  rep.min_R = rep.lhs / rep.rhs_unit;
  rep.finite = std::isfinite(rep.min_R);
  return rep;
}

TailFit tail_exponent_fit(const std::vector<double>& r,
                          const std::vector<double>& p, int d, double kappa) {
  if (r.size() != p.size())
    throw std::invalid_argument("tail_exponent_fit: size mismatch");
  std::vector<double> tail_x, tail_y, origin_x, origin_y;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0.0) || !(p[i] > 0.0)) continue;
    if (r[i] >= 1.0) {
      tail_x.push_back(std::log(r[i]));
      tail_y.push_back(std::log(p[i]));
    } else {
      origin_x.push_back(std::log(r[i]));
      origin_y.push_back(std::log(p[i]));
    }
  }
  const auto span_ok = [](const std::vector<double>& x) {
    if (x.size() < 3) return false;
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    return (*hi - *lo) >= 1.5 * std::log(10.0);
  };
  if (!span_ok(tail_x) || !span_ok(origin_x))
    throw std::invalid_argument(
        "tail_exponent_fit: need >= 3 points spanning 1.5 decades per regime");
  const auto tail = stats::fit_line(tail_x, tail_y);
  const auto origin = stats::fit_line(origin_x, origin_y);
  TailFit fit;
  fit.alpha_hat = -tail.slope - d;
  fit.beta_hat = -origin.slope - d;
  fit.alpha_stderr = tail.slope_stderr;
  fit.beta_stderr = origin.slope_stderr;
  fit.gate_alpha_gt_kappa = fit.alpha_hat > kappa;
  return fit;
}

TailFit tail_exponent_fit(const EnvelopeSpec& env, int d, double kappa,
                          int points_per_regime) {
  env.validate();
  if (points_per_regime < 3)
    throw std::invalid_argument("tail_exponent_fit: too few points");
  std::vector<double> r, p;
  const auto add_range = [&](double lo, double hi) {
    for (int k = 0; k < points_per_regime; ++k) {
      const double t = static_cast<double>(k) / (points_per_regime - 1);
      const double rad = lo * std::pow(hi / lo, t);
      r.push_back(rad);
      p.push_back(kernels::envelope_value(env, rad, d));
    }
  };
  add_range(env.r_min, std::min(1.0, env.r_max));
  add_range(std::max(1.0, env.r_min), env.r_max);
  return tail_exponent_fit(r, p, d, kappa);
}

AuditResult stationarity_audit(const std::vector<double>& dynamics_series,
                               const std::vector<double>& reference_series) {
  if (dynamics_series.empty() || reference_series.empty())
    throw std::invalid_argument("stationarity_audit: empty series");
  AuditResult res;
  res.ks = stats::ks_statistic(dynamics_series, reference_series);
  res.ess_dyn = stats::effective_sample_size(dynamics_series);
  res.ess_ref = stats::effective_sample_size(reference_series);
  const double n_eff =
      res.ess_dyn * res.ess_ref / (res.ess_dyn + res.ess_ref);
  res.p_value = stats::ks_p_value(res.ks, n_eff);
  res.inconclusive = res.ess_dyn < 100.0 || res.ess_ref < 100.0;
  return res;
}

double nearest_neighbor_distance(const Configuration& xi) {
  if (xi.size() < 2) return kInf;
  double best = kInf;
  for (int i = 0; i < xi.size(); ++i)
    for (int j = i + 1; j < xi.size(); ++j)
      best = std::min(best, geometry::distance(xi.point(i), xi.point(j)));
  return best;
}

MetropolisReference::MetropolisReference(const Domain& domain,
                                         const PotentialSpec& potential,
                                         int n_particles, std::uint64_t seed)
    : domain_(domain),
      potential_(potential),
      n_(n_particles),
      rng_(seed),
      state_(domain.dim) {
  domain_.validate();
  potential_.validate(domain_.dim);
  if (n_ < 0)
    throw std::invalid_argument("MetropolisReference: negative count");
  state_ = draw();
  energy_ = potentials::hamiltonian(potential_, state_);
  for (int tries = 0; energy_ == kInf; ++tries) {
    if (tries > 100000)
      throw std::runtime_error(
          "MetropolisReference: no finite-energy start found");
    state_ = draw();
    energy_ = potentials::hamiltonian(potential_, state_);
  }
}

Configuration MetropolisReference::draw() {
  Configuration xi(domain_.dim);
  for (int k = 0; k < n_; ++k)
    xi = geometry::add_point(xi, rng_.uniform_in_box(domain_));
  return xi;
}

const Configuration& MetropolisReference::step() {
  ++proposals_;
  Configuration prop = draw();
  const double e = potentials::hamiltonian(potential_, prop);
  const double u = rng_.uniform();
  if (e < kInf && u < std::exp(-(e - energy_))) {
    state_ = std::move(prop);
    energy_ = e;
    ++accepted_;
  }
  return state_;
}

}  // namespace jumpmc::diagnostics
