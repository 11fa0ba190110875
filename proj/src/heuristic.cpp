#include <cmath>
#include <string>

#include "sampler_detail.hpp"
#include "scrid/error.hpp"
#include "scrid/sampler.hpp"

namespace scrid {

namespace {

struct SideState {
  std::vector<std::uint8_t> z;
  std::vector<Point> s;
  std::vector<RowCaptures> captures;
  std::vector<double> active_ll;

  detail::RowBlock block() { return {&z, &s, &captures, &active_ll, 1, 0}; }
};

SideState init_side(const EncounterMatrix& y, const ChainContext& ctx, Rng& rng) {
  const std::size_t M = y.rows();
  const int K = ctx.data().K;
  SideState side;
  side.captures.resize(M);
  side.z.assign(M, 0);
  side.s.resize(M);
  for (std::size_t i = 0; i < M; ++i) {
    side.captures[i] = row_captures(y.row(i), K);
    side.z[i] = side.captures[i].empty() ? (rng.bernoulli(0.5) ? 1 : 0) : 1;
  }
  const auto& support = ctx.config().discrete_support;
  for (std::size_t i = 0; i < M; ++i) {
    const CaptureCentroid c = centroid(y.row(i), ctx.traps());
    if (!c.location) {
      side.s[i] = detail::draw_center(ctx, rng);
    } else if (support.empty()) {
      side.s[i] = *c.location;
    } else {
      Point best = support.front();
      for (Point p : support)
        if (dist2(p, *c.location) < dist2(best, *c.location)) best = p;
      side.s[i] = best;
    }
  }
  side.active_ll.assign(M, 0.0);
  return side;
}

std::size_t included(const SideState& side) {
  std::size_t n = 0;
  for (auto v : side.z) n += v;
  return n;
}

}  // namespace

ChainOutput run_heuristic(const AugmentedDataset& data, const TrapArray& traps,
                          const StateSpace& space, const SamplerConfig& config,
                          const ProgressFn& progress) {
  SamplerConfig cfg_in = config;
  cfg_in.mode = SamplerMode::Heuristic;
  const ChainContext ctx(data, traps, space, cfg_in);
  const SamplerConfig& cfg = ctx.config();
  Rng rng(cfg.seed);

  SideState left = init_side(data.left, ctx, rng);
  SideState right = init_side(data.right, ctx, rng);
  DetectionParams params = *cfg.initial_params;
  const std::size_t M = data.M;
  double psi = (double(included(left) + included(right)) + 1.0) / (2.0 * double(M) + 2.0);

  detail::RowBlock blocks[] = {left.block(), right.block()};
  double loglik = 0.0;
  for (auto& b : blocks) {
    detail::refresh_block(b, params, ctx);
    loglik += detail::block_loglik(b);
  }
  if (!std::isfinite(loglik))
    throw Error(ErrorKind::Internal, "initial state has non-finite log-likelihood");

  ChainOutput out;
  out.mode = SamplerMode::Heuristic;
  out.n_definition =
      "N = round((sum(z_left) + sum(z_right)) / 2), halves rounded away from zero";
  out.config = cfg;
  out.kernel = kernels::resolved(cfg.kernel);
  out.samples.reserve((cfg.iters - cfg.burnin) / cfg.thin);

  for (std::size_t t = 1; t <= cfg.iters; ++t) {
    if (!cfg.freeze_detection_params)
      detail::update_detection_params(params, blocks, loglik, ctx, rng, out.acceptance);
    for (auto& b : blocks) detail::update_z_block(b, psi, loglik, rng);
    const std::size_t on = included(left) + included(right);
    psi = rng.beta(1.0 + double(on), 1.0 + double(2 * M - on));
    for (auto& b : blocks) detail::update_s_block(b, params, loglik, ctx, rng, out.acceptance.s);

    if (detail::is_recorded(t, cfg)) {
      const double total = double(included(left) + included(right));
      out.samples.push_back({t, params.lambda0, params.sigma, psi,
                             static_cast<int>(std::lround(total / 2.0)), loglik});
    }
    if (progress && cfg.progress_every != 0 && t % cfg.progress_every == 0)
      progress({t, cfg.iters, &out.acceptance});
  }
  return out;
}

}  // namespace scrid
