#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace scrid {

/// splitmix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x);

/// Seed for a sub-stream identified by a path of indices under `master`, e.g.
/// derive_seed(master, {scenario, replicate}). Independent of call order.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

/// Thin wrapper over a 64-bit Mersenne Twister. One Rng per chain; never shared
/// across threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();  // [0, 1)
  double uniform(double lo, double hi);
  double normal(double mean = 0.0, double sd = 1.0);
  double gamma(double shape);
  double beta(double a, double b);
  int binomial(int n, double p);
  bool bernoulli(double p);
  std::size_t index(std::size_t n);  // uniform on [0, n)

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace scrid
