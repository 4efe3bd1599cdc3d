#include "jumpmc/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace jumpmc::rng {

std::uint64_t Rng::integer(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::integer: n must be positive");
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t bound = max - max % n;  // multiple of n
  std::uint64_t r;
  do {
    r = gen_();
  } while (r >= bound);
  return r % n;
}

double Rng::exponential(double rate) {
  if (!(rate > 0.0))
    throw std::invalid_argument("Rng::exponential: rate must be positive");
  // uniform() can return 0; 1-u is in (0, 1].
  return -std::log1p(-uniform()) / rate;
}

long Rng::poisson(double mean) {
  if (mean < 0.0)
    throw std::invalid_argument("Rng::poisson: negative mean");
  if (mean == 0.0) return 0;
  // Knuth's product method is exact and deterministic; exp(-mean) underflows
  // around 700, so larger means split in two (sum of independent halves).
  if (mean > 500.0) return poisson(mean / 2.0) + poisson(mean / 2.0);
  const double limit = std::exp(-mean);
  long k = 0;
  double prod = 1.0;
  for (;;) {
    prod *= uniform();
    if (prod <= limit) return k;
    ++k;
  }
}

geometry::Point Rng::uniform_in_box(const geometry::Domain& dom) {
  geometry::Point p;
  p.dim = dom.dim;
  for (int k = 0; k < dom.dim; ++k)
    p[k] = uniform(-dom.half_width, dom.half_width);
  return p;
}

geometry::Point Rng::unit_vector(int dim) {
  geometry::Point p;
  p.dim = dim;
  switch (dim) {
    case 1:
      p[0] = (gen_() & 1u) ? 1.0 : -1.0;
      break;
    case 2: {
      const double theta = 2.0 * M_PI * uniform();
      p[0] = std::cos(theta);
      p[1] = std::sin(theta);
      break;
    }
    case 3: {
      const double z = 2.0 * uniform() - 1.0;
      const double phi = 2.0 * M_PI * uniform();
      const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
      p[0] = s * std::cos(phi);
      p[1] = s * std::sin(phi);
      p[2] = z;
      break;
    }
    default:
      throw std::invalid_argument("Rng::unit_vector: dimension must be 1..3");
  }
  return p;
}

}  // namespace jumpmc::rng
