#pragma once

// Small random generators for property tests. Fixed seeds: failures replay.

#include <cmath>
#include <cstdint>
#include <random>

#include "immunesim/grid.hpp"
#include "immunesim/model.hpp"

namespace gen {

class Source {
 public:
  explicit Source(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  // spread across decades, lo > 0
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  double concentration() { return coin() ? log_uniform(1e-6, 1e3) : (integer(0, 9) == 0 ? 0.0 : uniform(0, 1)); }
  double half_max() { return log_uniform(1e-2, 1e3); }
  double exponent() { return integer(0, 3) == 0 ? static_cast<double>(integer(1, 4)) : uniform(1.0, 5.0); }

  immunesim::StatePoint point() {
    return {concentration(), uniform(0, 0.1), uniform(0, 0.05), concentration(), concentration(),
            concentration(), concentration()};
  }

  immunesim::Grid grid(std::size_t max_n = 6) {
    return immunesim::Grid({log_uniform(1e-3, 1.0), log_uniform(1e-3, 1.0), log_uniform(1e-3, 1.0)},
                           {static_cast<std::size_t>(integer(2, static_cast<int>(max_n))),
                            static_cast<std::size_t>(integer(2, static_cast<int>(max_n))),
                            static_cast<std::size_t>(integer(2, static_cast<int>(max_n)))});
  }

  immunesim::Field field(const immunesim::Grid& g, double lo = -1.0, double hi = 1.0) {
    immunesim::Field f(g, 0.0);
    for (auto& v : f.values) v = uniform(lo, hi);
    return f;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace gen
