#include "scrid/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "scrid/error.hpp"

namespace scrid {

SimTruth simulate(int N, const TrapArray& traps, const StateSpace& space, DetectionParams params,
                  int K, Rng& rng) {
  if (N < 0) throw Error(ErrorKind::InvalidArgument, "N must be non-negative");
  if (K < 1) throw Error(ErrorKind::InvalidArgument, "K must be at least 1");
  if (!params.valid()) throw Error(ErrorKind::InvalidArgument, "detection parameters must be positive");
  space.validate(traps);

  const std::size_t J = traps.size();
  SimTruth truth;
  truth.N = N;
  truth.params = params;
  truth.K = K;
  truth.s_true.reserve(N);
  for (int n = 0; n < N; ++n) {
    const double x = rng.uniform(space.xmin, space.xmax);
    const double y = rng.uniform(space.ymin, space.ymax);
    truth.s_true.push_back({x, y});
  }
  truth.left_true = EncounterMatrix(N, J, K);
  truth.right_true = EncounterMatrix(N, J, K);
  for (int n = 0; n < N; ++n) {
    for (std::size_t j = 0; j < J; ++j) {
      const double p = detection_prob(truth.s_true[n], traps[j], params);
      truth.left_true.set(n, j, rng.binomial(K, p));
      truth.right_true.set(n, j, rng.binomial(K, p));
    }
  }
  return truth;
}

namespace {

void shuffle(std::vector<int>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.index(i)]);
}

// Builds the canonical dataset and the true link from per-side row orders
// (individual indices; the first n_known entries coincide on both sides).
ScrambledData assemble(const SimTruth& truth, const std::vector<int>& left_order,
                       const std::vector<int>& right_order, std::size_t n_known, std::size_t M) {
  const std::size_t J = truth.left_true.cols();
  EncounterMatrix left(0, J, truth.K);
  EncounterMatrix right(0, J, truth.K);
  for (int n : left_order) left.append_row(truth.left_true.row(n));
  for (int n : right_order) right.append_row(truth.right_true.row(n));

  CanonicalData canon = canonicalize(left, right, n_known, M);
  ScrambledData out;
  out.swapped = canon.swapped;
  out.data = std::move(canon.data);
  const std::size_t Mc = out.data.M;

  // canonicalize keeps the given order (all rows are known or captured).
  out.left_individual.assign(Mc, -1);
  out.right_individual.assign(Mc, -1);
  const auto& lo = canon.swapped ? right_order : left_order;
  const auto& ro = canon.swapped ? left_order : right_order;
  for (std::size_t i = 0; i < lo.size(); ++i) out.left_individual[i] = lo[i];
  for (std::size_t i = 0; i < ro.size(); ++i) out.right_individual[i] = ro[i];

  std::vector<std::size_t> left_row_of(truth.N, Mc);
  for (std::size_t i = 0; i < lo.size(); ++i) left_row_of[lo[i]] = i;

  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> ids(Mc, kUnset);
  std::vector<bool> used(Mc, false);
  for (std::size_t r = 0; r < ro.size(); ++r) {
    const std::size_t l = left_row_of[ro[r]];
    if (l == Mc) continue;
    ids[r] = l;
    used[l] = true;
  }
  // Captured right rows of individuals never seen on the left go to all-zero
  // left rows; only then do augmentation rows fill what is left.
  std::size_t next = lo.size();
  for (std::size_t r = 0; r < ro.size(); ++r) {
    if (ids[r] != kUnset) continue;
    while (used[next]) ++next;
    ids[r] = next;
    used[next] = true;
  }
  next = 0;
  for (std::size_t r = 0; r < Mc; ++r) {
    if (ids[r] != kUnset) continue;
    while (used[next]) ++next;
    ids[r] = next;
    used[next] = true;
  }
  out.answer_key = IdAssignment(std::move(ids), n_known);
  return out;
}

}  // namespace

ScrambledData scramble(const SimTruth& truth, std::size_t n_known, std::size_t M, Rng& rng) {
  if (n_known > std::size_t(truth.N))
    throw Error(ErrorKind::InvalidArgument, "n_known exceeds the population size");

  std::vector<int> everyone(truth.N);
  for (int n = 0; n < truth.N; ++n) everyone[n] = n;
  shuffle(everyone, rng);
  std::vector<bool> known(truth.N, false);
  std::vector<int> known_order(everyone.begin(), everyone.begin() + n_known);
  for (int n : known_order) known[n] = true;

  std::vector<int> left_order = known_order;
  std::vector<int> right_order = known_order;
  std::vector<int> left_rest;
  std::vector<int> right_rest;
  std::size_t distinct = n_known;
  for (int n = 0; n < truth.N; ++n) {
    if (known[n]) continue;
    const bool on_left = !truth.left_true.row_is_zero(n);
    const bool on_right = !truth.right_true.row_is_zero(n);
    if (on_left) left_rest.push_back(n);
    if (on_right) right_rest.push_back(n);
    if (on_left || on_right) ++distinct;
  }
  const std::size_t tallest = n_known + std::max(left_rest.size(), right_rest.size());
  if (M < distinct || M < tallest + 1)
    throw Error(ErrorKind::Dimension,
                "M = " + std::to_string(M) + " leaves no augmentation room for " +
                    std::to_string(distinct) + " distinct observed individuals");
  shuffle(left_rest, rng);
  shuffle(right_rest, rng);
  left_order.insert(left_order.end(), left_rest.begin(), left_rest.end());
  right_order.insert(right_order.end(), right_rest.begin(), right_rest.end());
  return assemble(truth, left_order, right_order, n_known, M);
}

ScrambledData reconcile(const SimTruth& truth, std::size_t M) {
  std::vector<int> order;
  for (int n = 0; n < truth.N; ++n)
    if (!truth.left_true.row_is_zero(n) || !truth.right_true.row_is_zero(n)) order.push_back(n);
  if (M < order.size())
    throw Error(ErrorKind::Dimension,
                "M = " + std::to_string(M) + " cannot hold the " + std::to_string(order.size()) +
                    " distinct observed individuals");
  return assemble(truth, order, order, order.size(), M);
}

double mean_capture_probability(const TrapArray& traps, const StateSpace& space,
                                DetectionParams params, int K, std::size_t grid) {
  if (grid == 0) throw Error(ErrorKind::InvalidArgument, "grid must be positive");
  const double dx = space.width() / double(grid);
  const double dy = space.height() / double(grid);
  double total = 0.0;
  for (std::size_t a = 0; a < grid; ++a) {
    for (std::size_t b = 0; b < grid; ++b) {
      const Point s{space.xmin + (a + 0.5) * dx, space.ymin + (b + 0.5) * dy};
      double h = 0.0;
      for (std::size_t j = 0; j < traps.size(); ++j) h += hazard(s, traps[j], params);
      total += -std::expm1(-double(K) * h);
    }
  }
  return total / double(grid * grid);
}

int calibrate_occasions(const TrapArray& traps, const StateSpace& space, DetectionParams params,
                        int N, double target_n, int K_max) {
  if (K_max < 1) throw Error(ErrorKind::InvalidArgument, "K_max must be at least 1");
  int best = 1;
  double best_gap = std::numeric_limits<double>::infinity();
  for (int K = 1; K <= K_max; ++K) {
    const double gap = std::abs(N * mean_capture_probability(traps, space, params, K) - target_n);
    if (gap < best_gap) {
      best_gap = gap;
      best = K;
    }
  }
  return best;
}

}  // namespace scrid
