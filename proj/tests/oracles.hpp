#pragma once

// Reference computations that share no code with the library: extended
// precision likelihoods, exhaustive posterior enumeration, and Gauss-Legendre
// quadrature.

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "scrid/geometry.hpp"
#include "scrid/model.hpp"

namespace oracle {

using Big = boost::multiprecision::cpp_bin_float_50;

inline Big big_choose(int n, int k) {
  Big r = 1;
  for (int i = 1; i <= k; ++i) r = r * Big(n - k + i) / Big(i);
  return r;
}

inline Big big_detection_prob(scrid::Point s, scrid::Point x, double lambda0, double sigma) {
  const Big dx = Big(s.x) - Big(x.x);
  const Big dy = Big(s.y) - Big(x.y);
  const Big h = Big(lambda0) * exp(-(dx * dx + dy * dy) / (2 * Big(sigma) * Big(sigma)));
  return 1 - exp(-h);
}

inline Big big_pmf(int K, int y, const Big& p) {
  return big_choose(K, y) * pow(p, y) * pow(1 - p, K - y);
}

/// Log of the product of binomial pmfs over every z = 1 row, both sides;
/// -inf if a z = 0 row has a capture.
inline double total_loglik(const std::vector<std::vector<int>>& left,
                           const std::vector<std::vector<int>>& right_star,
                           const std::vector<int>& z, const std::vector<scrid::Point>& s,
                           const std::vector<scrid::Point>& traps, double lambda0, double sigma,
                           int K) {
  Big prod = 1;
  for (std::size_t i = 0; i < left.size(); ++i) {
    if (!z[i]) {
      for (std::size_t j = 0; j < traps.size(); ++j)
        if (left[i][j] || right_star[i][j]) return -std::numeric_limits<double>::infinity();
      continue;
    }
    for (std::size_t j = 0; j < traps.size(); ++j) {
      const Big p = big_detection_prob(s[i], traps[j], lambda0, sigma);
      prod *= big_pmf(K, left[i][j], p) * big_pmf(K, right_star[i][j], p);
    }
  }
  return static_cast<double>(log(prod));
}

/// Posterior of the discretized model by brute force over every (z, s, id).
/// psi ~ Uniform(0,1) is integrated out, ids are uniform over bijections, and
/// s is uniform on `support`. Returns P(N = n) and P(id[r] = l).
struct Enumeration {
  std::vector<double> N;                    // index n = 0..M
  std::vector<std::vector<double>> id;      // [right row][left row]
};

inline Enumeration enumerate_posterior(const std::vector<std::vector<int>>& left,
                                       const std::vector<std::vector<int>>& right,
                                       const std::vector<scrid::Point>& support,
                                       const std::vector<scrid::Point>& traps, double lambda0,
                                       double sigma, int K) {
  const std::size_t M = left.size();
  const std::size_t J = traps.size();
  auto row_prob = [&](const std::vector<int>& yl, const std::vector<int>& yr, scrid::Point s) {
    Big prod = 1;
    for (std::size_t j = 0; j < J; ++j) {
      const Big p = big_detection_prob(s, traps[j], lambda0, sigma);
      prod *= big_pmf(K, yl[j], p) * big_pmf(K, yr[j], p);
    }
    return prod;
  };
  auto factorial = [](std::size_t n) {
    Big r = 1;
    for (std::size_t i = 2; i <= n; ++i) r *= Big(i);
    return r;
  };

  std::vector<std::size_t> perm(M);
  std::iota(perm.begin(), perm.end(), 0);
  Big total = 0;
  std::vector<Big> N_mass(M + 1, Big(0));
  std::vector<std::vector<Big>> id_mass(M, std::vector<Big>(M, Big(0)));
  do {
    std::vector<std::vector<int>> right_star(M);
    for (std::size_t r = 0; r < M; ++r) right_star[perm[r]] = right[r];
    for (std::uint32_t mask = 0; mask < (1u << M); ++mask) {
      Big w = 1;
      std::size_t n = 0;
      for (std::size_t i = 0; i < M && w != 0; ++i) {
        const bool on = (mask >> i) & 1u;
        if (!on) {
          const bool captured = std::any_of(left[i].begin(), left[i].end(), [](int v) { return v; }) ||
                                std::any_of(right_star[i].begin(), right_star[i].end(), [](int v) { return v; });
          if (captured) w = 0;
          continue;
        }
        ++n;
        Big avg = 0;
        for (scrid::Point s : support) avg += row_prob(left[i], right_star[i], s);
        w *= avg / Big(support.size());
      }
      if (w == 0) continue;
      // Beta(1,1) prior on psi integrated: n! (M - n)! / (M + 1)!
      w *= factorial(n) * factorial(M - n) / factorial(M + 1);
      total += w;
      N_mass[n] += w;
      for (std::size_t r = 0; r < M; ++r) id_mass[r][perm[r]] += w;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  Enumeration out;
  for (const Big& m : N_mass) out.N.push_back(static_cast<double>(m / total));
  out.id.assign(M, std::vector<double>(M, 0.0));
  for (std::size_t r = 0; r < M; ++r)
    for (std::size_t l = 0; l < M; ++l) out.id[r][l] = static_cast<double>(id_mass[r][l] / total);
  return out;
}

inline double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
  double tv = 0.0;
  for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i)
    tv += std::abs((i < a.size() ? a[i] : 0.0) - (i < b.size() ? b[i] : 0.0));
  return 0.5 * tv;
}

/// Average over the state space of 1 - prod_j (1 - p_j)^K, by composite
/// 20-point Gauss-Legendre on `panels` x `panels` cells.
inline double capture_probability(const std::vector<scrid::Point>& traps,
                                  const scrid::StateSpace& space, double lambda0, double sigma,
                                  int K, int panels = 24) {
  using GL = boost::math::quadrature::gauss<double, 20>;
  const double wx = space.width() / panels;
  const double wy = space.height() / panels;
  auto integrand = [&](double x, double y) {
    double log_miss = 0.0;
    for (const auto& t : traps) {
      const double d2 = (x - t.x) * (x - t.x) + (y - t.y) * (y - t.y);
      const double p = 1.0 - std::exp(-lambda0 * std::exp(-d2 / (2 * sigma * sigma)));
      log_miss += K * std::log1p(-p);
    }
    return 1.0 - std::exp(log_miss);
  };
  double total = 0.0;
  for (int a = 0; a < panels; ++a) {
    for (int b = 0; b < panels; ++b) {
      const double x0 = space.xmin + a * wx;
      const double y0 = space.ymin + b * wy;
      total += GL::integrate(
          [&](double x) {
            return GL::integrate([&](double y) { return integrand(x, y); }, y0, y0 + wy);
          },
          x0, x0 + wx);
    }
  }
  return total / space.area();
}

}  // namespace oracle
