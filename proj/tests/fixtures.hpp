#pragma once

#include <vector>

#include "scrid/geometry.hpp"
#include "scrid/identity.hpp"
#include "scrid/model.hpp"
#include "scrid/sampler.hpp"

namespace fixtures {

inline std::vector<std::vector<int>> to_rows(const scrid::EncounterMatrix& m) {
  std::vector<std::vector<int>> rows;
  for (std::size_t i = 0; i < m.rows(); ++i) rows.emplace_back(m.row(i).begin(), m.row(i).end());
  return rows;
}

inline scrid::EncounterMatrix from_rows(const std::vector<std::vector<int>>& rows, int K) {
  const std::size_t J = rows.empty() ? 0 : rows.front().size();
  std::vector<int> flat;
  for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
  return scrid::EncounterMatrix(rows.size(), J, K, flat);
}

// Two traps, one occasion, three augmented rows, activity centers restricted
// to four points. Left captures at trap 1 and trap 2; right likewise but in the
// opposite row order.
struct Toy {
  scrid::TrapArray traps{std::vector<scrid::Point>{{1.0, 1.0}, {2.0, 1.0}}};
  scrid::StateSpace space{0.0, 3.0, 0.0, 2.0};
  std::vector<scrid::Point> support{{1.0, 1.0}, {2.0, 1.0}, {1.5, 1.8}, {0.2, 0.2}};
  std::vector<std::vector<int>> left{{1, 0}, {0, 1}, {0, 0}};
  std::vector<std::vector<int>> right{{0, 1}, {1, 0}, {0, 0}};
  scrid::DetectionParams params{0.2, 0.5};
  int K = 1;

  scrid::AugmentedDataset data() const {
    return scrid::canonicalize(from_rows(left, K), from_rows(right, K), 0, 3).data;
  }

  scrid::SamplerConfig config(std::size_t iters, std::uint64_t seed) const {
    scrid::SamplerConfig c;
    c.iters = iters;
    c.burnin = 1000;
    c.seed = seed;
    c.discrete_support = support;
    c.freeze_detection_params = true;
    c.initial_params = params;
    c.swap_radius = 100.0;
    c.n_swaps_per_iter = 5;
    c.record_id_samples = true;
    c.kernel = scrid::kernels::KernelChoice::Scalar;
    return c;
  }
};

}  // namespace fixtures
