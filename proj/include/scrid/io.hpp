#pragma once

// File formats: CSV for rectangular data, JSON for configuration and run
// metadata. Every index written to a file is 1-based.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "scrid/analysis.hpp"
#include "scrid/geometry.hpp"
#include "scrid/model.hpp"
#include "scrid/sampler.hpp"
#include "scrid/simulator.hpp"

namespace scrid::io {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Writes to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

// traps.csv: header `trap_id,x,y`, ids 1..J in any order.
TrapArray parse_traps(std::istream& in);
TrapArray read_traps(const std::filesystem::path& path);
std::string format_traps(const TrapArray& traps);

// left.csv / right.csv: header `t1,...,tJ`, one row per individual.
EncounterMatrix parse_encounters(std::istream& in, std::size_t J, int K);
EncounterMatrix read_encounters(const std::filesystem::path& path, std::size_t J, int K);
/// First `rows` rows (all rows if nullopt).
std::string format_encounters(const EncounterMatrix& m, std::optional<std::size_t> rows = {});

// chain.csv: `iter,lambda0,sigma,psi,N,loglik`.
std::string format_chain(const std::vector<ChainSample>& samples);
std::vector<ChainSample> parse_chain(std::istream& in);

// id_samples.csv: `iter,right_index,left_index`.
std::string format_id_samples(const std::vector<IdSample>& samples);
std::vector<IdSample> parse_id_samples(std::istream& in);

// summary.csv: `parameter,mean,sd,q2.5,q25,q50,q75,q97.5,mode,draws`; mode
// is blank except on the N row.
std::string format_summary(const PosteriorSummary& summary);
PosteriorSummary parse_summary(std::istream& in);

// id_table.csv: `right_index,left_index,frequency,total`; NEW for uncaptured.
std::string format_id_table(const IdMatchTable& table);
IdMatchTable parse_id_table(std::istream& in);

// metrics.csv: one row per scenario x estimator.
std::string format_metrics(const std::vector<StudyMetrics>& metrics,
                           const std::vector<Scenario>& scenarios);
std::vector<StudyMetrics> parse_metrics(std::istream& in);

// replicates.csv: per-replicate posterior summaries of N.
std::string format_replicates(const std::vector<ReplicateResult>& replicates,
                              const std::vector<Scenario>& scenarios,
                              const std::vector<Estimator>& estimators);

nlohmann::json to_json(const SamplerConfig& config);
/// Reads known keys over `base`; unknown keys are an error.
SamplerConfig sampler_config_from_json(const nlohmann::json& j, SamplerConfig base = {});

nlohmann::json to_json(const AcceptanceStats& stats);
nlohmann::json to_json(const PosteriorSummary& summary);

/// Run metadata for fit outputs: seed, effective config, acceptance, N
/// definition, kernel, quantile rule, data shape.
nlohmann::json chain_meta(const ChainOutput& chain, const AugmentedDataset& data, bool swapped);

nlohmann::json truth_json(const SimTruth& truth, const ScrambledData& scrambled);

}  // namespace scrid::io
