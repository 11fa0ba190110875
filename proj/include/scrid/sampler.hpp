#pragma once

// Metropolis-within-Gibbs sampler over (lambda0, sigma, psi, z, s, ID).

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scrid/geometry.hpp"
#include "scrid/identity.hpp"
#include "scrid/kernels.hpp"
#include "scrid/model.hpp"
#include "scrid/rng.hpp"

namespace scrid {

enum class SamplerMode {
  Full,       // no known identities beyond n_known pinned rows; IDs sampled
  KnownId,    // first n_known rows known and excluded from N's information
  AllKnown,   // every observed row reconciled; ID updates skipped
  Heuristic,  // left and right treated as independent samples
};

std::string_view to_string(SamplerMode mode);
SamplerMode parse_mode(std::string_view text);

struct SamplerConfig {
  std::size_t iters = 21000;
  std::size_t burnin = 1000;
  std::size_t thin = 1;
  std::size_t M = 0;  // augmented size; 0 means "whatever the dataset has"

  double proposal_sd_log_lambda0 = 0.1;
  double proposal_sd_log_sigma = 0.1;
  double proposal_sd_s = 0.5;
  std::size_t n_swaps_per_iter = 50;
  std::optional<double> swap_radius;  // default: 3 * initial sigma

  double prior_upper_lambda0 = 5.0;
  std::optional<double> prior_upper_sigma;  // default: half the state-space diagonal

  SamplerMode mode = SamplerMode::Full;
  bool record_id_samples = false;
  std::uint64_t seed = 1;
  kernels::KernelChoice kernel = kernels::KernelChoice::Auto;
  std::size_t progress_every = 0;  // 0 disables the progress callback

  // Test hooks. Production runs leave these at their defaults.
  std::vector<Point> discrete_support;  // restricts s to these points (uniform prior)
  bool freeze_detection_params = false;
  bool clamp_ids = false;  // never propose ID swaps
  std::optional<DetectionParams> initial_params;

  /// Throws Error(InvalidArgument) on bad values.
  void validate() const;
};

/// Copy of `config` with every defaulted optional filled in for `space`.
SamplerConfig resolve_defaults(const SamplerConfig& config, const StateSpace& space);

struct AcceptanceCounter {
  std::size_t attempts = 0;
  std::size_t accepts = 0;
  double rate() const { return attempts == 0 ? 0.0 : double(accepts) / double(attempts); }
};

struct AcceptanceStats {
  AcceptanceCounter lambda0;
  AcceptanceCounter sigma;
  AcceptanceCounter s;
  AcceptanceCounter id;
};

/// All unknowns at one iteration, plus caches that must stay consistent with
/// them: right_star = reorder_right(right, id), captures[i] pools left row i
/// with right_star row i, active_ll[i] is row i's log-likelihood given z = 1,
/// loglik is the sum of active_ll over rows with z = 1.
struct LatentState {
  DetectionParams params;
  double psi = 0.5;
  std::vector<std::uint8_t> z;
  std::vector<Point> s;
  IdAssignment id;
  EncounterMatrix right_star;
  double loglik = 0.0;

  std::vector<RowCaptures> captures;
  std::vector<double> active_ll;
};

/// Everything about a chain that stays fixed while it runs. Holds references
/// to `data` and `traps`; both must outlive the context.
class ChainContext {
 public:
  ChainContext(const AugmentedDataset& data, const TrapArray& traps, const StateSpace& space,
               const SamplerConfig& config);

  const AugmentedDataset& data() const { return *data_; }
  const TrapArray& traps() const { return *traps_; }
  const StateSpace& space() const { return space_; }
  const SamplerConfig& config() const { return config_; }  // defaults resolved
  kernels::HazardRowFn kernel() const { return kernel_; }
  const CentroidCache& centroids() const { return centroids_; }

  /// Unknown-ID right rows with at least one capture; the rows a swap starts from.
  const std::vector<std::size_t>& swappable_rows() const { return swappable_; }

  /// Rows whose z is fixed at 1 regardless of data (known rows in KnownId mode).
  std::size_t pinned_rows() const;

  double active_loglik(Point s, DetectionParams params, const RowCaptures& captures, int sides,
                       std::span<double> scratch) const;

 private:
  const AugmentedDataset* data_;
  const TrapArray* traps_;
  StateSpace space_;
  SamplerConfig config_;
  kernels::HazardRowFn kernel_;
  CentroidCache centroids_;
  std::vector<std::size_t> swappable_;
};

LatentState initialize(const ChainContext& ctx, Rng& rng);

void update_detection_params(LatentState& state, const ChainContext& ctx, Rng& rng,
                             AcceptanceStats& stats);
void update_psi(LatentState& state, const ChainContext& ctx, Rng& rng);
void update_z(LatentState& state, const ChainContext& ctx, Rng& rng);
void update_activity_centers(LatentState& state, const ChainContext& ctx, Rng& rng,
                             AcceptanceStats& stats);
void update_ids(LatentState& state, const ChainContext& ctx, Rng& rng, AcceptanceStats& stats);

/// Population size implied by the state: n_known + sum of unknown-row z in
/// KnownId mode (known z are pinned to 1), sum of z otherwise.
int population_size(const LatentState& state, const ChainContext& ctx);

/// total_loglik recomputed from scratch, ignoring every cache.
double recompute_loglik(const LatentState& state, const ChainContext& ctx);

/// Throws Error(Internal) if any structural invariant of the state is broken.
void check_invariants(const LatentState& state, const ChainContext& ctx);

struct ChainSample {
  std::size_t iter = 0;
  double lambda0 = 0.0;
  double sigma = 0.0;
  double psi = 0.0;
  int N = 0;
  double loglik = 0.0;

  friend bool operator==(const ChainSample&, const ChainSample&) = default;
};

struct IdSample {
  std::size_t iter = 0;
  std::size_t right_index = 0;  // 0-based
  std::size_t left_index = 0;   // 0-based

  friend bool operator==(const IdSample&, const IdSample&) = default;
};

struct ChainOutput {
  std::vector<ChainSample> samples;
  std::vector<IdSample> id_samples;
  AcceptanceStats acceptance;
  SamplerMode mode = SamplerMode::Full;
  std::string n_definition;
  SamplerConfig config;  // effective configuration, defaults resolved
  kernels::KernelChoice kernel = kernels::KernelChoice::Scalar;  // variant actually used
};

struct Progress {
  std::size_t iter = 0;
  std::size_t iters = 0;
  const AcceptanceStats* acceptance = nullptr;
};
using ProgressFn = std::function<void(const Progress&)>;

/// Runs initialize and then `iters` sweeps in the order detection params, ID
/// swaps, z, psi, s. Deterministic given config.seed and the kernel variant.
ChainOutput run_chain(const AugmentedDataset& data, const TrapArray& traps,
                      const StateSpace& space, const SamplerConfig& config,
                      const ProgressFn& progress = {});

/// Two independent SCR likelihoods (left, right) sharing lambda0, sigma, psi;
/// no identity variable. N per draw is round((sum z_left + sum z_right) / 2).
ChainOutput run_heuristic(const AugmentedDataset& data, const TrapArray& traps,
                          const StateSpace& space, const SamplerConfig& config,
                          const ProgressFn& progress = {});

/// Dispatches on config.mode.
ChainOutput fit(const AugmentedDataset& data, const TrapArray& traps, const StateSpace& space,
                const SamplerConfig& config, const ProgressFn& progress = {});

}  // namespace scrid
