#include "scrid/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sampler_detail.hpp"
#include "scrid/error.hpp"

namespace scrid {

std::string_view to_string(SamplerMode mode) {
  switch (mode) {
    case SamplerMode::Full: return "full";
    case SamplerMode::KnownId: return "known_id";
    case SamplerMode::AllKnown: return "all_known";
    case SamplerMode::Heuristic: return "heuristic";
  }
  return "full";
}

SamplerMode parse_mode(std::string_view text) {
  if (text == "full") return SamplerMode::Full;
  if (text == "known_id") return SamplerMode::KnownId;
  if (text == "all_known") return SamplerMode::AllKnown;
  if (text == "heuristic") return SamplerMode::Heuristic;
  throw Error(ErrorKind::InvalidArgument, "unknown mode '" + std::string(text) + "'");
}

void SamplerConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidArgument, msg); };
  if (iters == 0) fail("iters must be positive");
  if (!(burnin < iters)) fail("burnin must be smaller than iters");
  if (thin < 1) fail("thin must be at least 1");
  if (!(proposal_sd_log_lambda0 > 0.0) || !(proposal_sd_log_sigma > 0.0) ||
      !(proposal_sd_s > 0.0))
    fail("proposal scales must be positive");
  if (n_swaps_per_iter < 1) fail("n_swaps_per_iter must be at least 1");
  if (swap_radius && !(*swap_radius > 0.0)) fail("swap_radius must be positive");
  if (!(prior_upper_lambda0 > 0.0)) fail("prior_upper_lambda0 must be positive");
  if (prior_upper_sigma && !(*prior_upper_sigma > 0.0)) fail("prior_upper_sigma must be positive");
  if (initial_params) {
    if (!initial_params->valid()) fail("initial detection parameters must be positive");
    if (initial_params->lambda0 > prior_upper_lambda0 ||
        (prior_upper_sigma && initial_params->sigma > *prior_upper_sigma))
      fail("initial detection parameters lie outside the prior support");
  }
}

SamplerConfig resolve_defaults(const SamplerConfig& config, const StateSpace& space) {
  SamplerConfig out = config;
  if (!out.prior_upper_sigma) out.prior_upper_sigma = 0.5 * space.diagonal();
  if (!out.initial_params)
    out.initial_params = DetectionParams{0.5 * out.prior_upper_lambda0, 0.5 * *out.prior_upper_sigma};
  if (!out.swap_radius) out.swap_radius = 3.0 * out.initial_params->sigma;
  return out;
}

// --- ChainContext ------------------------------------------------------------------

ChainContext::ChainContext(const AugmentedDataset& data, const TrapArray& traps,
                           const StateSpace& space, const SamplerConfig& config)
    : data_(&data), traps_(&traps), space_(space) {
  config.validate();
  data.validate();
  if (traps.size() != data.J)
    throw Error(ErrorKind::Dimension, "trap count does not match encounter matrix columns");
  space.validate(traps);
  if (config.M != 0 && config.M != data.M)
    throw Error(ErrorKind::Dimension, "configured M does not match the dataset");
  if (config.mode == SamplerMode::AllKnown &&
      !(data.n_known == data.n_left && data.n_known == data.n_right))
    throw Error(ErrorKind::InvalidArgument,
                "all_known mode requires every observed row to be a known individual");
  config_ = resolve_defaults(config, space);
  config_.M = data.M;
  config_.validate();
  kernel_ = kernels::select(config_.kernel);
  centroids_ = CentroidCache(data, traps);
  for (std::size_t i = data.n_known; i < data.n_right; ++i)
    if (!data.right.row_is_zero(i)) swappable_.push_back(i);
}

std::size_t ChainContext::pinned_rows() const {
  return config_.mode == SamplerMode::KnownId ? data_->n_known : 0;
}

double ChainContext::active_loglik(Point s, DetectionParams params, const RowCaptures& captures,
                                   int sides, std::span<double> scratch) const {
  return active_row_loglik(kernel_, *traps_, s, params, data_->K, sides, captures, scratch);
}

// --- shared block updates --------------------------------------------------------------

namespace detail {

double block_loglik(const RowBlock& block) {
  double total = 0.0;
  for (std::size_t i = 0; i < block.z->size(); ++i)
    if ((*block.z)[i]) total += (*block.active_ll)[i];
  return total;
}

Point draw_center(const ChainContext& ctx, Rng& rng) {
  const auto& support = ctx.config().discrete_support;
  if (!support.empty()) return support[rng.index(support.size())];
  const StateSpace& sp = ctx.space();
  const double x = rng.uniform(sp.xmin, sp.xmax);
  const double y = rng.uniform(sp.ymin, sp.ymax);
  return {x, y};
}

void refresh_block(RowBlock& block, DetectionParams params, const ChainContext& ctx) {
  std::vector<double> scratch(ctx.traps().size());
  for (std::size_t i = 0; i < block.z->size(); ++i)
    (*block.active_ll)[i] =
        ctx.active_loglik((*block.s)[i], params, (*block.captures)[i], block.sides, scratch);
}

namespace {

void propose_param(bool is_lambda0, DetectionParams& params, std::span<RowBlock> blocks,
                   double& loglik, const ChainContext& ctx, Rng& rng, AcceptanceCounter& counter) {
  const SamplerConfig& cfg = ctx.config();
  const double current = is_lambda0 ? params.lambda0 : params.sigma;
  const double sd = is_lambda0 ? cfg.proposal_sd_log_lambda0 : cfg.proposal_sd_log_sigma;
  const double upper = is_lambda0 ? cfg.prior_upper_lambda0 : *cfg.prior_upper_sigma;

  const double candidate = current * std::exp(sd * rng.normal());
  ++counter.attempts;
  if (!(candidate > 0.0 && candidate <= upper)) return;

  DetectionParams proposed = params;
  (is_lambda0 ? proposed.lambda0 : proposed.sigma) = candidate;

  // Only z = 1 rows enter the acceptance ratio; z = 0 rows are refreshed on accept.
  std::vector<double> scratch(ctx.traps().size());
  std::vector<std::vector<double>> fresh(blocks.size());
  double proposed_total = 0.0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const RowBlock& blk = blocks[b];
    fresh[b].assign(blk.z->size(), 0.0);
    for (std::size_t i = 0; i < blk.z->size(); ++i) {
      if (!(*blk.z)[i]) continue;
      fresh[b][i] = ctx.active_loglik((*blk.s)[i], proposed, (*blk.captures)[i], blk.sides, scratch);
      proposed_total += fresh[b][i];
    }
  }
  const double log_ratio = proposed_total - loglik + std::log(candidate) - std::log(current);
  if (!mh_accept(rng, log_ratio)) return;

  params = proposed;
  loglik = proposed_total;
  ++counter.accepts;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    RowBlock& blk = blocks[b];
    for (std::size_t i = 0; i < blk.z->size(); ++i)
      if (!(*blk.z)[i])
        fresh[b][i] =
            ctx.active_loglik((*blk.s)[i], proposed, (*blk.captures)[i], blk.sides, scratch);
    blk.active_ll->swap(fresh[b]);
  }
}

}  // namespace

void update_detection_params(DetectionParams& params, std::span<RowBlock> blocks, double& loglik,
                             const ChainContext& ctx, Rng& rng, AcceptanceStats& stats) {
  propose_param(true, params, blocks, loglik, ctx, rng, stats.lambda0);
  propose_param(false, params, blocks, loglik, ctx, rng, stats.sigma);
}

void update_z_block(RowBlock& block, double psi, double& loglik, Rng& rng) {
  auto& z = *block.z;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (i < block.pinned || !(*block.captures)[i].empty()) {
      z[i] = 1;
      continue;
    }
    // Given z = 1, an all-zero row has probability q = exp(active_ll).
    const double log_q = (*block.active_ll)[i];
    const double on = psi * std::exp(log_q);
    const double prob = on / (on + (1.0 - psi));
    const std::uint8_t next = rng.uniform() < prob ? 1 : 0;
    if (next != z[i]) {
      loglik += next ? log_q : -log_q;
      z[i] = next;
    }
  }
}

void update_s_block(RowBlock& block, DetectionParams params, double& loglik,
                    const ChainContext& ctx, Rng& rng, AcceptanceCounter& counter) {
  const SamplerConfig& cfg = ctx.config();
  const auto& support = cfg.discrete_support;
  std::vector<double> scratch(ctx.traps().size());
  auto& z = *block.z;
  auto& s = *block.s;
  auto& ll = *block.active_ll;
  const auto& caps = *block.captures;

  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!z[i]) {
      // Exact conditional: the likelihood does not involve s when z = 0.
      s[i] = draw_center(ctx, rng);
      ll[i] = ctx.active_loglik(s[i], params, caps[i], block.sides, scratch);
      continue;
    }
    Point candidate;
    ++counter.attempts;
    if (!support.empty()) {
      candidate = support[rng.index(support.size())];
    } else {
      candidate.x = s[i].x + cfg.proposal_sd_s * rng.normal();
      candidate.y = s[i].y + cfg.proposal_sd_s * rng.normal();
      if (!ctx.space().contains(candidate)) continue;
    }
    const double fresh = ctx.active_loglik(candidate, params, caps[i], block.sides, scratch);
    if (!mh_accept(rng, fresh - ll[i])) continue;
    loglik += fresh - ll[i];
    s[i] = candidate;
    ll[i] = fresh;
    ++counter.accepts;
  }
}

}  // namespace detail

// --- paired-identity chain ----------------------------------------------------------------

namespace {

detail::RowBlock block_of(LatentState& state, const ChainContext& ctx) {
  return {&state.z, &state.s, &state.captures, &state.active_ll, 2, ctx.pinned_rows()};
}

Point nearest_support_point(const std::vector<Point>& support, Point p) {
  return *std::min_element(support.begin(), support.end(),
                           [&](Point a, Point b) { return dist2(a, p) < dist2(b, p); });
}

}  // namespace

LatentState initialize(const ChainContext& ctx, Rng& rng) {
  const AugmentedDataset& data = ctx.data();
  const SamplerConfig& cfg = ctx.config();
  const std::size_t M = data.M;

  LatentState st;
  st.id = cfg.mode == SamplerMode::AllKnown ? IdAssignment::identity(M, data.n_known)
                                            : greedy_init(data, ctx.traps());
  st.right_star = reorder_right(data.right, st.id);
  st.captures.resize(M);
  for (std::size_t i = 0; i < M; ++i)
    st.captures[i] = row_captures(data.left.row(i), st.right_star.row(i), data.K);

  st.z.assign(M, 0);
  for (std::size_t i = 0; i < M; ++i) {
    if (i < ctx.pinned_rows() || !st.captures[i].empty())
      st.z[i] = 1;
    else
      st.z[i] = rng.bernoulli(0.5) ? 1 : 0;
  }

  st.s.resize(M);
  for (std::size_t i = 0; i < M; ++i) {
    const CaptureCentroid left_c = centroid(data.left.row(i), ctx.traps());
    const CaptureCentroid right_c = centroid(st.right_star.row(i), ctx.traps());
    const int n = left_c.n_caps + right_c.n_caps;
    if (n == 0) {
      st.s[i] = detail::draw_center(ctx, rng);
      continue;
    }
    Point c{0.0, 0.0};
    for (const auto* part : {&left_c, &right_c}) {
      if (!part->location) continue;
      c.x += part->n_caps * part->location->x;
      c.y += part->n_caps * part->location->y;
    }
    c.x /= n;
    c.y /= n;
    st.s[i] = cfg.discrete_support.empty() ? c : nearest_support_point(cfg.discrete_support, c);
  }

  st.params = *cfg.initial_params;
  const std::size_t pinned = ctx.pinned_rows();
  std::size_t included = 0;
  for (std::size_t i = pinned; i < M; ++i) included += st.z[i];
  st.psi = (double(included) + 1.0) / (double(M - pinned) + 2.0);

  st.active_ll.assign(M, 0.0);
  auto block = block_of(st, ctx);
  detail::refresh_block(block, st.params, ctx);
  st.loglik = detail::block_loglik(block);
  if (!std::isfinite(st.loglik))
    throw Error(ErrorKind::Internal, "initial state has non-finite log-likelihood");
  return st;
}

void update_detection_params(LatentState& state, const ChainContext& ctx, Rng& rng,
                             AcceptanceStats& stats) {
  detail::RowBlock blocks[] = {block_of(state, ctx)};
  detail::update_detection_params(state.params, blocks, state.loglik, ctx, rng, stats);
}

void update_psi(LatentState& state, const ChainContext& ctx, Rng& rng) {
  const std::size_t pinned = ctx.pinned_rows();
  std::size_t on = 0;
  for (std::size_t i = pinned; i < state.z.size(); ++i) on += state.z[i];
  const std::size_t off = state.z.size() - pinned - on;
  state.psi = rng.beta(1.0 + double(on), 1.0 + double(off));
}

void update_z(LatentState& state, const ChainContext& ctx, Rng& rng) {
  auto block = block_of(state, ctx);
  detail::update_z_block(block, state.psi, state.loglik, rng);
}

void update_activity_centers(LatentState& state, const ChainContext& ctx, Rng& rng,
                             AcceptanceStats& stats) {
  auto block = block_of(state, ctx);
  detail::update_s_block(block, state.params, state.loglik, ctx, rng, stats.s);
}

void update_ids(LatentState& state, const ChainContext& ctx, Rng& rng, AcceptanceStats& stats) {
  const auto& rows = ctx.swappable_rows();
  if (rows.empty()) return;
  const AugmentedDataset& data = ctx.data();
  const double radius = *ctx.config().swap_radius;
  std::vector<double> scratch(ctx.traps().size());

  for (std::size_t t = 0; t < ctx.config().n_swaps_per_iter; ++t) {
    const std::size_t i = rows[rng.index(rows.size())];
    ++stats.id.attempts;
    const auto forward = swap_neighborhood(i, state.id, data, ctx.centroids(), radius);
    if (forward.empty()) continue;
    const std::size_t partner = forward[rng.index(forward.size())];

    const std::size_t a = state.id[i];        // left row losing right row i
    const std::size_t b = state.id[partner];  // left row receiving right row i
    state.id.swap_rows(i, partner);
    // The move is reversible only if the reverse swap is itself a candidate
    // from the post-swap state.
    const auto reverse = swap_neighborhood(i, state.id, data, ctx.centroids(), radius);
    if (!std::binary_search(reverse.begin(), reverse.end(), partner)) {
      state.id.swap_rows(i, partner);
      continue;
    }

    RowCaptures caps_a = row_captures(data.left.row(a), data.right.row(partner), data.K);
    RowCaptures caps_b = row_captures(data.left.row(b), data.right.row(i), data.K);
    if ((!state.z[a] && !caps_a.empty()) || (!state.z[b] && !caps_b.empty())) {
      state.id.swap_rows(i, partner);  // a capture on an excluded individual
      continue;
    }
    const double ll_a = ctx.active_loglik(state.s[a], state.params, caps_a, 2, scratch);
    const double ll_b = ctx.active_loglik(state.s[b], state.params, caps_b, 2, scratch);
    double delta = 0.0;
    if (state.z[a]) delta += ll_a - state.active_ll[a];
    if (state.z[b]) delta += ll_b - state.active_ll[b];
    const double log_ratio =
        delta + std::log(double(forward.size())) - std::log(double(reverse.size()));
    if (!detail::mh_accept(rng, log_ratio)) {
      state.id.swap_rows(i, partner);
      continue;
    }

    auto row_a = state.right_star.row(a);
    auto row_b = state.right_star.row(b);
    std::swap_ranges(row_a.begin(), row_a.end(), row_b.begin());
    state.captures[a] = std::move(caps_a);
    state.captures[b] = std::move(caps_b);
    state.active_ll[a] = ll_a;
    state.active_ll[b] = ll_b;
    state.loglik += delta;
    ++stats.id.accepts;
  }
}

int population_size(const LatentState& state, const ChainContext&) {
  int n = 0;
  for (auto v : state.z) n += v;
  return n;
}

double recompute_loglik(const LatentState& state, const ChainContext& ctx) {
  const EncounterMatrix right_star = reorder_right(ctx.data().right, state.id);
  return total_loglik(ctx.data(), right_star, state.z, state.s, ctx.traps(), state.params);
}

void check_invariants(const LatentState& state, const ChainContext& ctx) {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::Internal, msg); };
  const AugmentedDataset& data = ctx.data();
  const std::size_t M = data.M;
  if (state.z.size() != M || state.s.size() != M || state.id.size() != M ||
      state.captures.size() != M || state.active_ll.size() != M)
    fail("latent state has wrong dimensions");
  try {
    IdAssignment check(std::vector<std::size_t>(state.id.values().begin(), state.id.values().end()),
                       data.n_known);
  } catch (const Error& e) {
    fail(std::string("ID vector invalid: ") + e.what());
  }
  if (!(state.right_star == reorder_right(data.right, state.id)))
    fail("right_star out of sync with ID vector");
  const auto& support = ctx.config().discrete_support;
  for (std::size_t i = 0; i < M; ++i) {
    const bool captured = !data.left.row_is_zero(i) || !state.right_star.row_is_zero(i);
    if (captured && !state.z[i]) fail("captured row " + std::to_string(i) + " has z = 0");
    if (i < ctx.pinned_rows() && !state.z[i]) fail("pinned row has z = 0");
    if (support.empty() ? !ctx.space().contains(state.s[i])
                        : std::find(support.begin(), support.end(), state.s[i]) == support.end())
      fail("activity center outside its support");
  }
  if (!(state.psi > 0.0 && state.psi < 1.0)) fail("psi outside (0, 1)");
  if (!std::isfinite(state.loglik)) fail("non-finite log-likelihood");
}

// --- driver -----------------------------------------------------------------------------

namespace {

std::string n_definition(SamplerMode mode) {
  switch (mode) {
    case SamplerMode::KnownId: return "N = n_known + sum(z[i]) over unknown-ID rows";
    case SamplerMode::Heuristic:
      return "N = round((sum(z_left) + sum(z_right)) / 2), halves rounded away from zero";
    case SamplerMode::Full:
    case SamplerMode::AllKnown: break;
  }
  return "N = sum(z)";
}

}  // namespace

ChainOutput run_chain(const AugmentedDataset& data, const TrapArray& traps,
                      const StateSpace& space, const SamplerConfig& config,
                      const ProgressFn& progress) {
  if (config.mode == SamplerMode::Heuristic)
    throw Error(ErrorKind::InvalidArgument, "run_chain does not handle heuristic mode");
  const ChainContext ctx(data, traps, space, config);
  const SamplerConfig& cfg = ctx.config();
  Rng rng(cfg.seed);
  LatentState state = initialize(ctx, rng);

  ChainOutput out;
  out.mode = cfg.mode;
  out.n_definition = n_definition(cfg.mode);
  out.config = cfg;
  out.kernel = kernels::resolved(cfg.kernel);
  out.samples.reserve((cfg.iters - cfg.burnin) / cfg.thin);

  const bool sample_ids = (cfg.mode == SamplerMode::Full || cfg.mode == SamplerMode::KnownId) &&
                          !cfg.clamp_ids;
  for (std::size_t t = 1; t <= cfg.iters; ++t) {
    if (!cfg.freeze_detection_params) update_detection_params(state, ctx, rng, out.acceptance);
    if (sample_ids) update_ids(state, ctx, rng, out.acceptance);
    update_z(state, ctx, rng);
    update_psi(state, ctx, rng);
    update_activity_centers(state, ctx, rng, out.acceptance);

    if (detail::is_recorded(t, cfg)) {
      out.samples.push_back({t, state.params.lambda0, state.params.sigma, state.psi,
                             population_size(state, ctx), state.loglik});
      if (cfg.record_id_samples)
        for (std::size_t i : ctx.swappable_rows()) out.id_samples.push_back({t, i, state.id[i]});
    }
    if (progress && cfg.progress_every != 0 && t % cfg.progress_every == 0)
      progress({t, cfg.iters, &out.acceptance});
  }
  return out;
}

ChainOutput fit(const AugmentedDataset& data, const TrapArray& traps, const StateSpace& space,
                const SamplerConfig& config, const ProgressFn& progress) {
  if (config.mode == SamplerMode::Heuristic)
    return run_heuristic(data, traps, space, config, progress);
  return run_chain(data, traps, space, config, progress);
}

}  // namespace scrid
