#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "scrid/geometry.hpp"
#include "scrid/identity.hpp"
#include "scrid/model.hpp"
#include "scrid/rng.hpp"

namespace scrid {

/// Identity-resolved population and its paired capture histories.
struct SimTruth {
  int N = 0;
  std::vector<Point> s_true;
  EncounterMatrix left_true;   // N x J, row = individual
  EncounterMatrix right_true;  // N x J, same individuals
  DetectionParams params;
  int K = 1;
};

/// Activity centers uniform on `space`; every (individual, trap, side) count is
/// an independent Binomial(K, p(s, x_j)). Draw order: all centers, then counts
/// individual by individual, trap by trap, left before right.
SimTruth simulate(int N, const TrapArray& traps, const StateSpace& space, DetectionParams params,
                  int K, Rng& rng);

/// Observable data derived from a SimTruth.
struct ScrambledData {
  AugmentedDataset data;
  bool swapped = false;
  /// True link for every right row (augmented rows included). Right rows whose
  /// individual has no left row map to otherwise-unused all-zero left rows.
  IdAssignment answer_key;
  /// Individual behind each canonical row, or -1 for augmentation rows.
  std::vector<int> left_individual;
  std::vector<int> right_individual;
};

/// Picks n_known individuals uniformly from all N (captured or not) as known,
/// places them first on both sides, then the remaining captured rows of each
/// side in independent random orders, augments to M and canonicalizes.
ScrambledData scramble(const SimTruth& truth, std::size_t n_known, std::size_t M, Rng& rng);

/// Perfect data: every individual captured on either side becomes a known,
/// reconciled row (n_known = n_left = n_right).
ScrambledData reconcile(const SimTruth& truth, std::size_t M);

/// Probability that an individual with a uniformly distributed activity
/// center is captured at least once by one device over K occasions, by
/// midpoint quadrature on a grid x grid lattice.
double mean_capture_probability(const TrapArray& traps, const StateSpace& space,
                                DetectionParams params, int K, std::size_t grid = 200);

/// Smallest K in [1, K_max] whose expected per-side count N * p(K) is closest
/// to `target_n`.
int calibrate_occasions(const TrapArray& traps, const StateSpace& space, DetectionParams params,
                        int N, double target_n, int K_max = 50);

}  // namespace scrid
