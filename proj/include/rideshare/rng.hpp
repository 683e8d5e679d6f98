#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "rideshare/matrix.hpp"

namespace rideshare {

// Seeded generator with the handful of draws the project needs. Exponential
// and categorical sampling are hand-rolled on top of raw 64-bit output so a
// given seed reproduces bit-exact streams for the lifetime of a build.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // uniform in [0, 1)
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // uniform in {0, ..., n-1}
  int uniform_int(int n) {
    return static_cast<int>(gen_() % static_cast<std::uint64_t>(n));
  }

  double exponential(double rate) {
    if (rate <= 0) throw std::invalid_argument("Rng::exponential: rate must be positive");
    return -std::log1p(-uniform()) / rate;
  }

  // +1 or -1 with equal probability
  double rademacher() { return (gen_() & 1u) ? 1.0 : -1.0; }

  // sample index from a probability row (assumed to sum to ~1)
  int categorical(const Matrix& m, int row) {
    double u = uniform();
    double acc = 0;
    int n = m.size();
    for (int j = 0; j < n; ++j) {
      acc += m(row, j);
      if (u < acc) return j;
    }
    return n - 1;  // guard against rounding in the row sum
  }

  int categorical(const Vec& p) {
    double u = uniform();
    double acc = 0;
    for (std::size_t j = 0; j < p.size(); ++j) {
      acc += p[j];
      if (u < acc) return static_cast<int>(j);
    }
    return static_cast<int>(p.size()) - 1;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace rideshare
