#include "scrid/rng.hpp"

namespace scrid {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = mix64(master);
  for (std::uint64_t p : path) h = mix64(h ^ mix64(p + 0x632BE59BD9B4E019ull));
  return h;
}

double Rng::uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal(double mean, double sd) {
  return std::normal_distribution<double>(mean, sd)(engine_);
}

double Rng::gamma(double shape) { return std::gamma_distribution<double>(shape, 1.0)(engine_); }

double Rng::beta(double a, double b) {
  const double x = gamma(a);
  const double y = gamma(b);
  return x / (x + y);
}

int Rng::binomial(int n, double p) { return std::binomial_distribution<int>(n, p)(engine_); }

bool Rng::bernoulli(double p) { return uniform() < p; }

std::size_t Rng::index(std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
}

}  // namespace scrid
