#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace botdet {

// All randomness in the toolkit flows from one master seed. Derived seeds are
// a stable hash of (master, purpose tag, index) so that independent streams
// (one per player, per tree, per randomization replicate) do not depend on
// scheduling order. The mixers are self-contained; output never depends on
// the standard library's distribution implementations.

uint64_t derive_seed(uint64_t master, std::string_view tag, uint64_t index = 0);

// xoshiro256** with splitmix64 seeding.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t next_u64();

  // Uniform in [0, 1).
  double uniform();
  // Uniform in [lo, hi).
  double uniform(double lo, double hi);
  // Uniform integer in [lo, hi] inclusive.
  int64_t uniform_int(int64_t lo, int64_t hi);

  double normal(double mean = 0.0, double stddev = 1.0);
  double lognormal(double mu, double sigma);
  // Knuth for small mean, normal approximation above 60.
  int64_t poisson(double mean);
  double gamma(double shape);
  // Proportions over alphas.size() categories.
  std::vector<double> dirichlet(const std::vector<double>& alphas);

  bool bernoulli(double p) { return uniform() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(uniform_int(0, static_cast<int64_t>(i) - 1));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t s_[4];
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace botdet
