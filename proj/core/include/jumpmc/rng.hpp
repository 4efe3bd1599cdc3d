#pragma once

#include <cstdint>
#include <random>

#include "jumpmc/geometry.hpp"

namespace jumpmc::rng {

// mt19937_64 bit source with hand-rolled variate transforms. The std
// distribution objects are implementation-defined, which would break the
// byte-identical-output contract across standard libraries; everything here
// is pinned to the raw bit stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer in [0, n). Rejection keeps it exactly uniform.
  std::uint64_t integer(std::uint64_t n);

  double exponential(double rate);

  long poisson(double mean);

  geometry::Point uniform_in_box(const geometry::Domain& dom);

  geometry::Point unit_vector(int dim);

 private:
  std::mt19937_64 gen_;
};

}  // namespace jumpmc::rng
