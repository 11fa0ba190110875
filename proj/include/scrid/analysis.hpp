#pragma once

// Posterior summaries, identity-match tables, recovery scoring, and the
// replicate study harness.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scrid/geometry.hpp"
#include "scrid/identity.hpp"
#include "scrid/model.hpp"
#include "scrid/sampler.hpp"
#include "scrid/simulator.hpp"

namespace scrid {

/// Linear-interpolation ("type 7") sample quantile of already sorted values.
double quantile_sorted(std::span<const double> sorted, double prob);

struct ParamSummary {
  double mean = 0.0;
  double sd = 0.0;  // n - 1 denominator
  double q025 = 0.0;
  double q25 = 0.0;
  double q50 = 0.0;
  double q75 = 0.0;
  double q975 = 0.0;
};

ParamSummary summarize_values(std::span<const double> values);

/// Most frequent value; smallest on ties.
int posterior_mode(std::span<const int> values);

struct PosteriorSummary {
  ParamSummary lambda0;
  ParamSummary sigma;
  ParamSummary psi;
  ParamSummary N;
  int N_mode = 0;
  std::size_t draws = 0;
};

/// Requires at least 2 samples.
PosteriorSummary summarize(const ChainOutput& chain);

struct IdMatchEntry {
  std::optional<std::size_t> left_index;  // nullopt = NEW (uncaptured left row)
  std::size_t count = 0;
};

struct IdMatchTable {
  std::size_t right_index = 0;
  std::vector<IdMatchEntry> entries;  // captured rows by count desc then index; NEW last
  std::size_t total = 0;
};

/// Posterior frequency of each left match for one right row. A left row
/// counts as captured if it has a capture or is a known row.
IdMatchTable id_match_table(const ChainOutput& chain, std::size_t right_index,
                            const AugmentedDataset& data);

struct IdRecoveryRow {
  std::size_t right_index = 0;
  int n_caps = 0;
  std::optional<std::size_t> true_left;  // nullopt = truly a new individual
  double prob_true = 0.0;
  bool modal_correct = false;
  std::size_t n_candidates = 0;  // captured left rows + 1 (NEW)
};

struct IdRecoveryReport {
  std::vector<IdRecoveryRow> rows;
  double mean_prob_true = 0.0;
  double frac_modal_correct = 0.0;
};

/// Scores recorded ID draws against the simulator's answer key. Assignments to
/// any uncaptured, unknown left row are pooled as NEW.
IdRecoveryReport score_id_recovery(const ChainOutput& chain, const AugmentedDataset& data,
                                   const IdAssignment& answer_key);

// --- replicate study -------------------------------------------------------

struct Scenario {
  std::string name;
  int N = 120;
  DetectionParams params;
  int K = 10;
  std::size_t M = 250;
  TrapArray traps;
  StateSpace space;
};

enum class EstimatorKind { Full, Known, AllKnown, Heuristic };

struct Estimator {
  EstimatorKind kind = EstimatorKind::Full;
  std::size_t n_known = 0;  // for Known

  std::string label() const;  // "nID=0", "nID=10", "nID=all", "heur"
};

Estimator parse_estimator(const std::string& label);

struct ReplicateResult {
  std::size_t scenario = 0;
  std::size_t estimator = 0;
  std::size_t replicate = 0;
  bool ok = false;
  std::string error;
  PosteriorSummary summary;
  bool covered = false;
  std::size_t n_left = 0;
  std::size_t n_right = 0;
  std::vector<std::size_t> N_histogram;  // counts of each N value 0..M
};

struct StudyMetrics {
  std::size_t scenario = 0;
  std::size_t estimator = 0;
  std::string scenario_name;
  std::string estimator_label;
  int N_true = 0;
  double mean_of_means = 0.0;
  double sd_of_means = 0.0;
  double mean_of_modes = 0.0;
  double sd_of_modes = 0.0;
  double avg_post_sd = 0.0;
  double coverage = 0.0;
  int pooled_mode = 0;
  std::size_t R = 0;  // effective replicate count
};

struct FitRequest {
  const Scenario* scenario = nullptr;
  const Estimator* estimator = nullptr;
  const ScrambledData* data = nullptr;
  const SimTruth* truth = nullptr;
  SamplerConfig config;  // seeded for this replicate
};
using FitFn = std::function<ChainOutput(const FitRequest&)>;

struct StudyOptions {
  std::size_t R = 200;
  SamplerConfig base;
  std::uint64_t master_seed = 1;
  std::size_t workers = 1;
  FitFn fitter;  // empty = the real sampler
  std::function<void(const ReplicateResult&)> on_replicate;
};

struct StudyResult {
  std::vector<StudyMetrics> metrics;  // scenario-major, estimator-minor
  std::vector<ReplicateResult> replicates;
  std::vector<std::string> warnings;
};

/// Simulates R datasets per scenario (shared by all estimators of that
/// replicate), fits every estimator and aggregates. Seeds derive from
/// (master_seed, scenario, replicate[, estimator]), so results do not depend
/// on the worker count or scheduling.
StudyResult run_study(const std::vector<Scenario>& scenarios,
                      const std::vector<Estimator>& estimators, const StudyOptions& options);

std::vector<StudyMetrics> aggregate(const std::vector<Scenario>& scenarios,
                                    const std::vector<Estimator>& estimators,
                                    const std::vector<ReplicateResult>& replicates);

/// The 8-scenario factorial grid (N in {80,120} x sigma in {0.7,0.5} x
/// lambda0 in {0.2,0.1}) on a 5x5 unit grid buffered by 2.
std::vector<Scenario> factorial_grid(int K, std::size_t M);

/// nID=0, nID=10, nID=all, heur.
std::vector<Estimator> standard_estimators();

}  // namespace scrid
