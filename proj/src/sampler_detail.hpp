#pragma once

// Update steps shared by the paired-identity chain and the heuristic chain.
// A RowBlock is a set of M rows with their own z, s and cached row
// log-likelihoods; the paired chain has one block, the heuristic chain two.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "scrid/sampler.hpp"

namespace scrid::detail {

struct RowBlock {
  std::vector<std::uint8_t>* z;
  std::vector<Point>* s;
  const std::vector<RowCaptures>* captures;
  std::vector<double>* active_ll;
  int sides;           // detection devices contributing to each row
  std::size_t pinned;  // rows [0, pinned) keep z = 1
};

inline bool mh_accept(Rng& rng, double log_ratio) { return std::log(rng.uniform()) < log_ratio; }

/// Sum of active_ll over rows with z = 1.
double block_loglik(const RowBlock& block);

/// Uniform draw from the activity-center prior (state space or test support).
Point draw_center(const ChainContext& ctx, Rng& rng);

/// Log-scale random walk on lambda0 then sigma, each accepted against the
/// summed likelihood of all blocks.
void update_detection_params(DetectionParams& params, std::span<RowBlock> blocks, double& loglik,
                             const ChainContext& ctx, Rng& rng, AcceptanceStats& stats);

void update_z_block(RowBlock& block, double psi, double& loglik, Rng& rng);

void update_s_block(RowBlock& block, DetectionParams params, double& loglik,
                    const ChainContext& ctx, Rng& rng, AcceptanceCounter& counter);

/// Fills active_ll for every row of the block.
void refresh_block(RowBlock& block, DetectionParams params, const ChainContext& ctx);

/// Whether sample iteration `t` (1-based) is recorded.
inline bool is_recorded(std::size_t t, const SamplerConfig& config) {
  return t > config.burnin && (t - config.burnin) % config.thin == 0;
}

}  // namespace scrid::detail
