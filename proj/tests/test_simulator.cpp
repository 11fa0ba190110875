#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "scrid/error.hpp"
#include "scrid/simulator.hpp"

using namespace scrid;

namespace {

const TrapArray kTraps = TrapArray::square_grid(5);
const StateSpace kSpace = StateSpace::buffered(kTraps, 2.0);

std::vector<std::vector<int>> captured_rows(const EncounterMatrix& m) {
  std::vector<std::vector<int>> rows;
  for (std::size_t i = 0; i < m.rows(); ++i)
    if (!m.row_is_zero(i)) rows.emplace_back(m.row(i).begin(), m.row(i).end());
  std::sort(rows.begin(), rows.end());
  return rows;
}

}  // namespace

TEST_CASE("simulate: empty population and vanishing detection") {
  Rng rng(1);
  const SimTruth empty = simulate(0, kTraps, kSpace, {0.2, 0.5}, 5, rng);
  CHECK(empty.left_true.rows() == 0);
  const SimTruth blind = simulate(50, kTraps, kSpace, {1e-12, 0.5}, 5, rng);
  CHECK(blind.left_true.total() == 0);
  CHECK(blind.right_true.total() == 0);
  CHECK_THROWS_AS(simulate(-1, kTraps, kSpace, {0.2, 0.5}, 5, rng), Error);
}

TEST_CASE("simulate: counts within range and centers inside the state space") {
  Rng rng(2);
  const SimTruth t = simulate(200, kTraps, kSpace, {1.5, 0.8}, 3, rng);
  for (int v : t.left_true.data()) CHECK((v >= 0 && v <= 3));
  for (Point s : t.s_true) CHECK(kSpace.contains(s));
}

TEST_CASE("scramble keeps each side's rows and the answer key reproduces the truth") {
  Rng rng(3);
  const SimTruth t = simulate(80, kTraps, kSpace, {0.2, 0.7}, 10, rng);
  for (std::size_t nk : {std::size_t(0), std::size_t(10)}) {
    const ScrambledData sd = scramble(t, nk, 200, rng);
    const AugmentedDataset& d = sd.data;
    const EncounterMatrix& L = sd.swapped ? t.right_true : t.left_true;
    const EncounterMatrix& R = sd.swapped ? t.left_true : t.right_true;
    CHECK(captured_rows(d.left) == captured_rows(L));
    CHECK(captured_rows(d.right) == captured_rows(R));
    CHECK(d.n_known == nk);
    CHECK(d.n_left >= d.n_right);

    // Reordering right by the key pairs every row with its own individual.
    const EncounterMatrix star = reorder_right(d.right, sd.answer_key);
    for (std::size_t l = 0; l < d.M; ++l) {
      const int ind = sd.left_individual[l];
      if (ind < 0) continue;
      for (std::size_t j = 0; j < d.J; ++j) CHECK(star(l, j) == R(ind, j));
    }
    for (std::size_t r = 0; r < d.M; ++r) {
      const int ind = sd.right_individual[r];
      if (ind >= 0 && sd.left_individual[sd.answer_key[r]] >= 0)
        CHECK(sd.left_individual[sd.answer_key[r]] == ind);
    }
    for (std::size_t i = 0; i < nk; ++i) CHECK(sd.left_individual[i] == sd.right_individual[i]);
  }
}

TEST_CASE("scramble with every individual known gives the identity key") {
  Rng rng(4);
  const SimTruth t = simulate(20, kTraps, kSpace, {0.2, 0.7}, 10, rng);
  const ScrambledData sd = scramble(t, 20, 40, rng);
  CHECK(sd.answer_key == IdAssignment::identity(40, 20));
  CHECK_THROWS_AS(scramble(t, 21, 40, rng), Error);
  CHECK_THROWS_AS(scramble(t, 0, 3, rng), Error);
}

TEST_CASE("reconcile gives matched rows only") {
  Rng rng(5);
  const SimTruth t = simulate(60, kTraps, kSpace, {0.2, 0.5}, 10, rng);
  const ScrambledData sd = reconcile(t, 120);
  CHECK(sd.data.n_known == sd.data.n_left);
  CHECK(sd.data.n_known == sd.data.n_right);
  CHECK(sd.answer_key == IdAssignment::identity(120, sd.data.n_known));
  std::size_t either = 0;
  for (int n = 0; n < 60; ++n) either += !t.left_true.row_is_zero(n) || !t.right_true.row_is_zero(n);
  CHECK(sd.data.n_known == either);
}

TEST_CASE("capture probability quadrature agrees with Gauss-Legendre") {
  const std::vector<Point> pts(kTraps.coords().begin(), kTraps.coords().end());
  for (auto [lambda0, sigma, K] : {std::tuple{0.2, 0.7, 10}, std::tuple{0.1, 0.5, 10},
                                   std::tuple{0.5, 0.3, 2}}) {
    const double gl = oracle::capture_probability(pts, kSpace, lambda0, sigma, K);
    const double mid = mean_capture_probability(kTraps, kSpace, {lambda0, sigma}, K, 300);
    CHECK(mid == doctest::Approx(gl).epsilon(1e-4));
  }
}

TEST_CASE("calibrated occasions bracket the target") {
  const int K = calibrate_occasions(kTraps, kSpace, {0.2, 0.7}, 120, 87.3);
  const double at = 120 * mean_capture_probability(kTraps, kSpace, {0.2, 0.7}, K);
  const double below = 120 * mean_capture_probability(kTraps, kSpace, {0.2, 0.7}, K - 1);
  const double above = 120 * mean_capture_probability(kTraps, kSpace, {0.2, 0.7}, K + 1);
  CHECK(std::abs(at - 87.3) <= std::abs(below - 87.3));
  CHECK(std::abs(at - 87.3) <= std::abs(above - 87.3));
}

TEST_CASE("independent seeds give equal expected capture totals") {
  // Two-sample z test on total captures per replicate.
  std::vector<double> a, b;
  Rng ra(100), rb(200);
  for (int r = 0; r < 200; ++r) {
    a.push_back(double(simulate(60, kTraps, kSpace, {0.2, 0.5}, 5, ra).left_true.total()));
    b.push_back(double(simulate(60, kTraps, kSpace, {0.2, 0.5}, 5, rb).left_true.total()));
  }
  auto mean = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / v.size();
  };
  auto var = [&](const std::vector<double>& v) {
    const double m = mean(v);
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return s / (v.size() - 1);
  };
  CHECK(a != b);
  const double z = (mean(a) - mean(b)) / std::sqrt(var(a) / 200 + var(b) / 200);
  CHECK(std::abs(z) < 3.0);
}
