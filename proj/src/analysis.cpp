#include "scrid/analysis.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <string>

#include "scrid/error.hpp"

namespace scrid {

double quantile_sorted(std::span<const double> sorted, double prob) {
  if (sorted.empty()) throw Error(ErrorKind::InvalidArgument, "quantile of an empty sample");
  if (!(prob >= 0.0 && prob <= 1.0))
    throw Error(ErrorKind::InvalidArgument, "quantile probability outside [0, 1]");
  const double h = (double(sorted.size()) - 1.0) * prob;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - double(lo)) * (sorted[hi] - sorted[lo]);
}

ParamSummary summarize_values(std::span<const double> values) {
  if (values.size() < 2)
    throw Error(ErrorKind::InvalidArgument, "at least 2 samples are needed for a summary");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  // Summing in sorted order keeps the result independent of sample order.
  const double n = double(sorted.size());
  const double mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : sorted) ss += (v - mean) * (v - mean);

  ParamSummary out;
  out.mean = mean;
  out.sd = std::sqrt(ss / (n - 1.0));
  out.q025 = quantile_sorted(sorted, 0.025);
  out.q25 = quantile_sorted(sorted, 0.25);
  out.q50 = quantile_sorted(sorted, 0.5);
  out.q75 = quantile_sorted(sorted, 0.75);
  out.q975 = quantile_sorted(sorted, 0.975);
  return out;
}

int posterior_mode(std::span<const int> values) {
  if (values.empty()) throw Error(ErrorKind::InvalidArgument, "mode of an empty sample");
  std::map<int, std::size_t> counts;
  for (int v : values) ++counts[v];
  int best = counts.begin()->first;
  std::size_t best_count = 0;
  for (const auto& [v, c] : counts) {
    if (c > best_count) {
      best = v;
      best_count = c;
    }
  }
  return best;
}

PosteriorSummary summarize(const ChainOutput& chain) {
  const auto& samples = chain.samples;
  if (samples.size() < 2)
    throw Error(ErrorKind::InvalidArgument, "chain has fewer than 2 recorded samples");
  std::vector<double> lambda0, sigma, psi, N;
  std::vector<int> N_int;
  for (const auto& s : samples) {
    lambda0.push_back(s.lambda0);
    sigma.push_back(s.sigma);
    psi.push_back(s.psi);
    N.push_back(double(s.N));
    N_int.push_back(s.N);
  }
  PosteriorSummary out;
  out.lambda0 = summarize_values(lambda0);
  out.sigma = summarize_values(sigma);
  out.psi = summarize_values(psi);
  out.N = summarize_values(N);
  out.N_mode = posterior_mode(N_int);
  out.draws = samples.size();
  return out;
}

// --- identity tables ------------------------------------------------------------------

namespace {

bool left_is_captured(const AugmentedDataset& data, std::size_t l) {
  return l < data.n_known || !data.left.row_is_zero(l);
}

}  // namespace

IdMatchTable id_match_table(const ChainOutput& chain, std::size_t right_index,
                            const AugmentedDataset& data) {
  if (chain.id_samples.empty())
    throw Error(ErrorKind::InvalidArgument, "chain has no recorded ID samples");
  if (right_index >= data.M) throw Error(ErrorKind::Dimension, "right index out of range");

  std::map<std::size_t, std::size_t> counts;
  std::size_t new_count = 0;
  IdMatchTable table;
  table.right_index = right_index;
  for (const auto& s : chain.id_samples) {
    if (s.right_index != right_index) continue;
    if (s.left_index >= data.M) throw Error(ErrorKind::Dimension, "ID sample out of range");
    ++table.total;
    if (left_is_captured(data, s.left_index))
      ++counts[s.left_index];
    else
      ++new_count;
  }
  if (table.total == 0)
    throw Error(ErrorKind::InvalidArgument,
                "no ID samples for right row " + std::to_string(right_index + 1));
  for (const auto& [l, c] : counts) table.entries.push_back({l, c});
  std::stable_sort(table.entries.begin(), table.entries.end(),
                   [](const IdMatchEntry& a, const IdMatchEntry& b) { return a.count > b.count; });
  if (new_count > 0) table.entries.push_back({std::nullopt, new_count});
  return table;
}

IdRecoveryReport score_id_recovery(const ChainOutput& chain, const AugmentedDataset& data,
                                   const IdAssignment& answer_key) {
  if (answer_key.size() != data.M || answer_key.n_known() != data.n_known)
    throw Error(ErrorKind::Dimension, "answer key does not match the dataset");

  std::size_t unknown_captured_left = 0;
  for (std::size_t l = data.n_known; l < data.M; ++l)
    if (!data.left.row_is_zero(l)) ++unknown_captured_left;

  IdRecoveryReport report;
  for (std::size_t r = data.n_known; r < data.M; ++r) {
    if (data.right.row_is_zero(r)) continue;
    const IdMatchTable table = id_match_table(chain, r, data);
    IdRecoveryRow row;
    row.right_index = r;
    row.n_caps = data.right.row_total(r);
    if (left_is_captured(data, answer_key[r])) row.true_left = answer_key[r];
    row.n_candidates = unknown_captured_left + 1;
    for (const auto& e : table.entries)
      if (e.left_index == row.true_left) row.prob_true = double(e.count) / double(table.total);
    // Mode over classes; ties go to the captured row listed first.
    const IdMatchEntry* best = &table.entries.front();
    for (const auto& e : table.entries)
      if (e.count > best->count) best = &e;
    row.modal_correct = best->left_index == row.true_left;
    report.rows.push_back(row);
  }
  if (!report.rows.empty()) {
    double p = 0.0;
    std::size_t correct = 0;
    for (const auto& row : report.rows) {
      p += row.prob_true;
      correct += row.modal_correct;
    }
    report.mean_prob_true = p / double(report.rows.size());
    report.frac_modal_correct = double(correct) / double(report.rows.size());
  }
  return report;
}

// --- estimators and scenarios -----------------------------------------------------------

std::string Estimator::label() const {
  switch (kind) {
    case EstimatorKind::Full: return "nID=0";
    case EstimatorKind::Known: return "nID=" + std::to_string(n_known);
    case EstimatorKind::AllKnown: return "nID=all";
    case EstimatorKind::Heuristic: return "heur";
  }
  return "nID=0";
}

Estimator parse_estimator(const std::string& label) {
  if (label == "nID=0" || label == "full") return {EstimatorKind::Full, 0};
  if (label == "nID=all" || label == "all_known") return {EstimatorKind::AllKnown, 0};
  if (label == "heur" || label == "heuristic") return {EstimatorKind::Heuristic, 0};
  if (label.rfind("nID=", 0) == 0) {
    const std::string digits = label.substr(4);
    if (!digits.empty() && std::all_of(digits.begin(), digits.end(), ::isdigit)) {
      const std::size_t n = std::stoul(digits);
      if (n > 0) return {EstimatorKind::Known, n};
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown estimator '" + label + "'");
}

std::vector<Scenario> factorial_grid(int K, std::size_t M) {
  const TrapArray traps = TrapArray::square_grid(5);
  const StateSpace space = StateSpace::buffered(traps, 2.0);
  std::vector<Scenario> out;
  for (int N : {120, 80}) {
    for (double sigma : {0.7, 0.5}) {
      for (double lambda0 : {0.2, 0.1}) {
        char name[64];
        std::snprintf(name, sizeof name, "N%d_sigma%.1f_lambda%.1f", N, sigma, lambda0);
        out.push_back({name, N, {lambda0, sigma}, K, M, traps, space});
      }
    }
  }
  return out;
}

std::vector<Estimator> standard_estimators() {
  return {{EstimatorKind::Full, 0},
          {EstimatorKind::Known, 10},
          {EstimatorKind::AllKnown, 0},
          {EstimatorKind::Heuristic, 0}};
}

// --- aggregation ------------------------------------------------------------------------

namespace {

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
}

double sd_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / double(v.size() - 1));
}

}  // namespace

std::vector<StudyMetrics> aggregate(const std::vector<Scenario>& scenarios,
                                    const std::vector<Estimator>& estimators,
                                    const std::vector<ReplicateResult>& replicates) {
  std::vector<StudyMetrics> out;
  for (std::size_t si = 0; si < scenarios.size(); ++si) {
    for (std::size_t ei = 0; ei < estimators.size(); ++ei) {
      StudyMetrics m;
      m.scenario = si;
      m.estimator = ei;
      m.scenario_name = scenarios[si].name;
      m.estimator_label = estimators[ei].label();
      m.N_true = scenarios[si].N;

      std::vector<double> means, modes, sds;
      std::size_t covered = 0;
      std::vector<std::size_t> pooled;
      for (const auto& r : replicates) {
        if (r.scenario != si || r.estimator != ei || !r.ok) continue;
        means.push_back(r.summary.N.mean);
        modes.push_back(double(r.summary.N_mode));
        sds.push_back(r.summary.N.sd);
        covered += r.covered;
        if (pooled.size() < r.N_histogram.size()) pooled.resize(r.N_histogram.size(), 0);
        for (std::size_t v = 0; v < r.N_histogram.size(); ++v) pooled[v] += r.N_histogram[v];
      }
      m.R = means.size();
      m.mean_of_means = mean_of(means);
      m.sd_of_means = sd_of(means);
      m.mean_of_modes = mean_of(modes);
      m.sd_of_modes = sd_of(modes);
      m.avg_post_sd = mean_of(sds);
      m.coverage = m.R == 0 ? 0.0 : double(covered) / double(m.R);
      if (!pooled.empty())
        m.pooled_mode = int(std::max_element(pooled.begin(), pooled.end()) - pooled.begin());
      out.push_back(m);
    }
  }
  return out;
}

}  // namespace scrid
