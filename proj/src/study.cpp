#include <algorithm>
#include <atomic>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "scrid/analysis.hpp"
#include "scrid/error.hpp"

namespace scrid {

namespace {

ChainOutput default_fit(const FitRequest& req) {
  return fit(req.data->data, req.scenario->traps, req.scenario->space, req.config);
}

SamplerMode mode_for(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::Full: return SamplerMode::Full;
    case EstimatorKind::Known: return SamplerMode::KnownId;
    case EstimatorKind::AllKnown: return SamplerMode::AllKnown;
    case EstimatorKind::Heuristic: return SamplerMode::Heuristic;
  }
  return SamplerMode::Full;
}

// Simulates one replicate of one scenario and fits every estimator to it.
// Datasets that need the same known-ID count share one scramble.
void run_replicate(const Scenario& sc, std::size_t si, std::size_t rep,
                   const std::vector<Estimator>& estimators, const StudyOptions& opt,
                   ReplicateResult* results) {
  const FitFn& fitter = opt.fitter ? opt.fitter : FitFn(default_fit);
  SimTruth truth;
  try {
    Rng rng(derive_seed(opt.master_seed, {si, rep, 0}));
    truth = simulate(sc.N, sc.traps, sc.space, sc.params, sc.K, rng);
  } catch (const std::exception& e) {
    for (std::size_t ei = 0; ei < estimators.size(); ++ei)
      results[ei].error = std::string("simulation failed: ") + e.what();
    return;
  }

  for (std::size_t ei = 0; ei < estimators.size(); ++ei) {
    const Estimator& est = estimators[ei];
    ReplicateResult& res = results[ei];
    try {
      ScrambledData data;
      if (est.kind == EstimatorKind::AllKnown) {
        data = reconcile(truth, sc.M);
      } else {
        const std::size_t nk = est.kind == EstimatorKind::Known ? est.n_known : 0;
        Rng rng(derive_seed(opt.master_seed, {si, rep, 1, nk}));
        data = scramble(truth, nk, sc.M, rng);
      }
      FitRequest req{&sc, &est, &data, &truth, opt.base};
      req.config.mode = mode_for(est.kind);
      req.config.M = 0;
      req.config.record_id_samples = false;
      req.config.progress_every = 0;
      req.config.seed = derive_seed(opt.master_seed, {si, rep, 2, ei});

      const ChainOutput chain = fitter(req);
      res.summary = summarize(chain);
      res.covered = res.summary.N.q025 <= sc.N && sc.N <= res.summary.N.q975;
      res.n_left = data.data.n_left;
      res.n_right = data.data.n_right;
      res.N_histogram.assign(data.data.M + 1, 0);
      for (const auto& s : chain.samples) {
        if (s.N < 0 || std::size_t(s.N) > data.data.M)
          throw Error(ErrorKind::Internal, "N draw outside [0, M]");
        ++res.N_histogram[s.N];
      }
      res.ok = true;
    } catch (const std::exception& e) {
      res.ok = false;
      res.error = e.what();
    }
  }
}

}  // namespace

StudyResult run_study(const std::vector<Scenario>& scenarios,
                      const std::vector<Estimator>& estimators, const StudyOptions& options) {
  if (options.R < 2) throw Error(ErrorKind::InvalidArgument, "a study needs R >= 2 replicates");
  if (scenarios.empty() || estimators.empty())
    throw Error(ErrorKind::InvalidArgument, "a study needs at least one scenario and estimator");
  options.base.validate();

  const std::size_t E = estimators.size();
  const std::size_t tasks = scenarios.size() * options.R;
  std::vector<ReplicateResult> results(tasks * E);
  for (std::size_t t = 0; t < tasks; ++t) {
    for (std::size_t ei = 0; ei < E; ++ei) {
      ReplicateResult& r = results[t * E + ei];
      r.scenario = t / options.R;
      r.replicate = t % options.R;
      r.estimator = ei;
    }
  }

  std::atomic<std::size_t> next{0};
  std::mutex callback_mutex;
  auto worker = [&] {
    for (std::size_t t = next++; t < tasks; t = next++) {
      const std::size_t si = t / options.R;
      run_replicate(scenarios[si], si, t % options.R, estimators, options, &results[t * E]);
      if (options.on_replicate) {
        std::lock_guard lock(callback_mutex);
        for (std::size_t ei = 0; ei < E; ++ei) options.on_replicate(results[t * E + ei]);
      }
    }
  };
  const std::size_t n_workers = std::max<std::size_t>(1, std::min(options.workers, tasks));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }

  StudyResult out;
  for (const auto& r : results) {
    if (r.ok) continue;
    out.warnings.push_back("scenario '" + scenarios[r.scenario].name + "', estimator " +
                           estimators[r.estimator].label() + ", replicate " +
                           std::to_string(r.replicate + 1) + " excluded: " + r.error);
  }
  out.metrics = aggregate(scenarios, estimators, results);
  out.replicates = std::move(results);
  return out;
}

}  // namespace scrid
