// scrid: simulate paired left/right capture data, fit the latent-identity
// model, and summarize or batch the results.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "scrid/analysis.hpp"
#include "scrid/error.hpp"
#include "scrid/io.hpp"
#include "scrid/sampler.hpp"
#include "scrid/simulator.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace scrid;

namespace {

// Settings are gathered into one JSON object: the --config file first, then
// every flag given on the command line on top of it.
struct Settings {
  std::string config_path;
  json flags = json::object();

  json merged() const {
    json j = json::object();
    if (!config_path.empty()) {
      try {
        j = json::parse(io::read_file(config_path));
      } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Parse, config_path + ": " + e.what());
      }
      if (!j.is_object()) throw Error(ErrorKind::Parse, config_path + ": expected a JSON object");
    }
    j.update(flags);
    return j;
  }
};

template <typename T>
void option(CLI::App* app, Settings& s, const std::string& flag, const std::string& key,
            const std::string& help) {
  app->add_option_function<T>(flag, [&s, key](const T& v) { s.flags[key] = v; }, help);
}

void flag(CLI::App* app, Settings& s, const std::string& name, const std::string& key,
          const std::string& help) {
  app->add_flag_function(name, [&s, key](std::int64_t) { s.flags[key] = true; }, help);
}

void config_option(CLI::App* app, Settings& s) {
  app->add_option("--config", s.config_path, "JSON file with settings; flags override it")
      ->check(CLI::ExistingFile);
}

void sampler_options(CLI::App* app, Settings& s) {
  option<std::size_t>(app, s, "--iters", "iters", "Total MCMC iterations");
  option<std::size_t>(app, s, "--burnin", "burnin", "Iterations discarded before recording");
  option<std::size_t>(app, s, "--thin", "thin", "Record every thin-th iteration after burn-in");
  option<std::uint64_t>(app, s, "--seed", "seed", "Chain seed (random if omitted)");
  option<std::size_t>(app, s, "--swaps", "n_swaps_per_iter", "ID swap proposals per iteration");
  option<double>(app, s, "--swap-radius", "swap_radius", "Centroid distance bound for swap partners");
  option<double>(app, s, "--sd-log-lambda0", "proposal_sd_log_lambda0", "Random-walk scale for log lambda0");
  option<double>(app, s, "--sd-log-sigma", "proposal_sd_log_sigma", "Random-walk scale for log sigma");
  option<double>(app, s, "--sd-s", "proposal_sd_s", "Random-walk scale for activity centers");
  option<double>(app, s, "--lambda0-max", "prior_upper_lambda0", "Upper bound of the lambda0 prior");
  option<double>(app, s, "--sigma-max", "prior_upper_sigma", "Upper bound of the sigma prior");
  option<double>(app, s, "--init-lambda0", "initial_lambda0", "Starting lambda0");
  option<double>(app, s, "--init-sigma", "initial_sigma", "Starting sigma");
  option<std::string>(app, s, "--kernel", "kernel", "Hazard kernel: auto, scalar or avx2");
  option<std::size_t>(app, s, "--progress-every", "progress_every", "Report progress to stderr");
}

// Removes a CLI-level key from the merged settings and converts it.
template <typename T>
std::optional<T> take(json& j, const std::string& key) {
  if (!j.contains(key)) return std::nullopt;
  json v = j[key];
  j.erase(key);
  if (v.is_null()) return std::nullopt;
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::Parse, "setting '" + key + "' has the wrong type");
  }
}

template <typename T>
T require(json& j, const std::string& key) {
  auto v = take<T>(j, key);
  if (!v) throw Error(ErrorKind::InvalidArgument, "missing required setting '" + key + "'");
  return *v;
}

std::uint64_t fresh_seed() {
  std::random_device rd;
  return (std::uint64_t(rd()) << 32) ^ rd();
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create directory " + dir.string());
}

TrapArray traps_from(json& j) {
  if (auto path = take<std::string>(j, "traps")) {
    j.erase("grid");
    return io::read_traps(*path);
  }
  const auto side = take<std::size_t>(j, "grid").value_or(5);
  const auto spacing = take<double>(j, "spacing").value_or(1.0);
  return TrapArray::square_grid(side, spacing);
}

void report_progress(const Progress& p) {
  const AcceptanceStats& a = *p.acceptance;
  std::cerr << "iter " << p.iter << "/" << p.iters << " accept lambda0=" << a.lambda0.rate()
            << " sigma=" << a.sigma.rate() << " s=" << a.s.rate() << " id=" << a.id.rate() << "\n";
}

// --- commands ------------------------------------------------------------------------

void cmd_simulate(const Settings& s) {
  json j = s.merged();
  const TrapArray traps = traps_from(j);
  const double buffer = take<double>(j, "buffer").value_or(2.0);
  const StateSpace space = StateSpace::buffered(traps, buffer);
  const int N = require<int>(j, "N");
  const int K = require<int>(j, "K");
  const DetectionParams params{require<double>(j, "lambda0"), require<double>(j, "sigma")};
  const auto n_known = take<std::size_t>(j, "n_known").value_or(0);
  const auto M = require<std::size_t>(j, "M");
  const bool reconciled = take<bool>(j, "reconcile").value_or(false);
  const std::uint64_t seed = take<std::uint64_t>(j, "seed").value_or(fresh_seed());
  const fs::path out = require<std::string>(j, "out");
  if (!j.empty()) throw Error(ErrorKind::Parse, "unknown setting '" + j.begin().key() + "'");

  Rng sim_rng(derive_seed(seed, {0}));
  const SimTruth truth = simulate(N, traps, space, params, K, sim_rng);
  Rng scramble_rng(derive_seed(seed, {1}));
  const ScrambledData data = reconciled ? reconcile(truth, M) : scramble(truth, n_known, M, scramble_rng);

  ensure_dir(out);
  io::write_file_atomic(out / "traps.csv", io::format_traps(traps));
  io::write_file_atomic(out / "left.csv", io::format_encounters(data.data.left, data.data.n_left));
  io::write_file_atomic(out / "right.csv", io::format_encounters(data.data.right, data.data.n_right));
  json truth_j = io::truth_json(truth, data);
  truth_j["seed"] = seed;
  truth_j["buffer"] = buffer;
  io::write_file_atomic(out / "truth.json", truth_j.dump(2) + "\n");
}

void cmd_fit(const Settings& s, bool heuristic) {
  json j = s.merged();
  const TrapArray traps = traps_from(j);
  const double buffer = take<double>(j, "buffer").value_or(2.0);
  const StateSpace space = StateSpace::buffered(traps, buffer);
  const int K = require<int>(j, "K");
  const auto left_path = require<std::string>(j, "left");
  const auto right_path = require<std::string>(j, "right");
  const auto n_known = take<std::size_t>(j, "n_known").value_or(0);
  const fs::path out = require<std::string>(j, "out");

  SamplerConfig config = io::sampler_config_from_json(j);
  if (config.M == 0) throw Error(ErrorKind::InvalidArgument, "missing required setting 'M'");
  if (heuristic) config.mode = SamplerMode::Heuristic;
  else if (config.mode == SamplerMode::Heuristic)
    throw Error(ErrorKind::InvalidArgument, "use fit-heuristic for the heuristic estimator");
  if (!j.contains("seed")) config.seed = fresh_seed();

  const EncounterMatrix left = io::read_encounters(left_path, traps.size(), K);
  const EncounterMatrix right = io::read_encounters(right_path, traps.size(), K);
  const CanonicalData canon = canonicalize(left, right, n_known, config.M);

  const ChainOutput chain =
      fit(canon.data, traps, space, config, config.progress_every ? report_progress : ProgressFn{});

  ensure_dir(out);
  const AugmentedDataset& d = canon.data;
  io::write_file_atomic(out / "left.csv", io::format_encounters(d.left, d.n_left));
  io::write_file_atomic(out / "right.csv", io::format_encounters(d.right, d.n_right));
  io::write_file_atomic(out / "chain.csv", io::format_chain(chain.samples));
  if (chain.config.record_id_samples)
    io::write_file_atomic(out / "id_samples.csv", io::format_id_samples(chain.id_samples));
  json meta = io::chain_meta(chain, d, canon.swapped);
  meta["buffer"] = buffer;
  meta["state_space"] = {space.xmin, space.xmax, space.ymin, space.ymax};
  io::write_file_atomic(out / "meta.json", meta.dump(2) + "\n");
}

void cmd_summarize(const Settings& s) {
  json j = s.merged();
  const auto chain_path = require<std::string>(j, "chain");
  const auto out = take<std::string>(j, "out");
  if (!j.empty()) throw Error(ErrorKind::Parse, "unknown setting '" + j.begin().key() + "'");

  std::istringstream in(io::read_file(chain_path));
  ChainOutput chain;
  chain.samples = io::parse_chain(in);
  const std::string text = io::format_summary(summarize(chain));
  if (out) io::write_file_atomic(*out, text);
  else std::cout << text;
}

void cmd_id_table(const Settings& s) {
  json j = s.merged();
  const fs::path dir = require<std::string>(j, "fit_dir");
  const auto right_index = require<std::size_t>(j, "right_index");
  const auto out = take<std::string>(j, "out");
  if (!j.empty()) throw Error(ErrorKind::Parse, "unknown setting '" + j.begin().key() + "'");
  if (right_index == 0) throw Error(ErrorKind::InvalidArgument, "right index is 1-based");

  const json meta = json::parse(io::read_file(dir / "meta.json"));
  const auto& shape = meta.at("data");
  const std::size_t J = shape.at("J").get<std::size_t>();
  const int K = shape.at("K").get<int>();
  const EncounterMatrix left = io::read_encounters(dir / "left.csv", J, K);
  const EncounterMatrix right = io::read_encounters(dir / "right.csv", J, K);
  const CanonicalData canon = canonicalize(left, right, shape.at("n_known").get<std::size_t>(),
                                           shape.at("M").get<std::size_t>());
  if (!fs::exists(dir / "id_samples.csv"))
    throw Error(ErrorKind::InvalidArgument, "fit was run without recording ID samples");
  std::istringstream in(io::read_file(dir / "id_samples.csv"));
  ChainOutput chain;
  chain.id_samples = io::parse_id_samples(in);

  const std::string text = io::format_id_table(id_match_table(chain, right_index - 1, canon.data));
  if (out) io::write_file_atomic(*out, text);
  else std::cout << text;
}

std::vector<Scenario> study_scenarios(json& j, int K, std::size_t M) {
  auto scenarios_j = take<json>(j, "scenarios");
  const auto grid = take<std::string>(j, "grid");
  if (!scenarios_j) {
    if (grid && *grid != "factorial") throw Error(ErrorKind::InvalidArgument, "unknown grid '" + *grid + "'");
    return factorial_grid(K, M);
  }
  if (!scenarios_j->is_array() || scenarios_j->empty())
    throw Error(ErrorKind::InvalidArgument, "scenarios must be a non-empty array");
  const TrapArray traps = TrapArray::square_grid(5);
  const StateSpace space = StateSpace::buffered(traps, 2.0);
  std::vector<Scenario> out;
  for (const auto& sc : *scenarios_j) {
    Scenario s;
    s.N = sc.at("N").get<int>();
    s.params = {sc.at("lambda0").get<double>(), sc.at("sigma").get<double>()};
    s.K = sc.value("K", K);
    s.M = sc.value("M", M);
    s.traps = traps;
    s.space = space;
    s.name = sc.value("name", "scenario" + std::to_string(out.size() + 1));
    out.push_back(std::move(s));
  }
  return out;
}

void cmd_simstudy(const Settings& s) {
  json j = s.merged();
  const int K = require<int>(j, "K");
  const auto M = take<std::size_t>(j, "M").value_or(250);
  StudyOptions opt;
  opt.R = take<std::size_t>(j, "R").value_or(200);
  opt.workers = take<std::size_t>(j, "workers").value_or(1);
  const auto labels = take<std::vector<std::string>>(j, "estimators");
  const fs::path out = require<std::string>(j, "out");
  const std::vector<Scenario> scenarios = study_scenarios(j, K, M);
  std::vector<Estimator> estimators;
  if (labels) {
    for (const auto& l : *labels) estimators.push_back(parse_estimator(l));
  } else {
    estimators = standard_estimators();
  }
  opt.master_seed = take<std::uint64_t>(j, "seed").value_or(fresh_seed());
  opt.base = io::sampler_config_from_json(j);
  opt.base.seed = opt.master_seed;
  if (opt.base.progress_every) {
    opt.on_replicate = [&](const ReplicateResult& r) {
      std::cerr << scenarios[r.scenario].name << " " << estimators[r.estimator].label() << " rep "
                << r.replicate + 1 << (r.ok ? " ok" : " failed") << "\n";
    };
  }

  const StudyResult result = run_study(scenarios, estimators, opt);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";

  ensure_dir(out);
  io::write_file_atomic(out / "metrics.csv", io::format_metrics(result.metrics, scenarios));
  io::write_file_atomic(out / "replicates.csv",
                        io::format_replicates(result.replicates, scenarios, estimators));
  json meta;
  meta["seed"] = opt.master_seed;
  meta["R"] = opt.R;
  meta["K"] = K;
  meta["M"] = M;
  meta["config"] = io::to_json(opt.base);
  meta["warnings"] = result.warnings;
  meta["quantile_rule"] = "linear interpolation between order statistics (type 7)";
  json sc = json::array();
  for (const auto& x : scenarios)
    sc.push_back({{"name", x.name}, {"N", x.N}, {"lambda0", x.params.lambda0},
                  {"sigma", x.params.sigma}, {"K", x.K}, {"M", x.M}});
  meta["scenarios"] = sc;
  io::write_file_atomic(out / "study.json", meta.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatial capture-recapture with uncertain left/right identity"};
  app.require_subcommand(1);
  Settings settings;

  auto* sim = app.add_subcommand("simulate", "Simulate a population and its scrambled data");
  config_option(sim, settings);
  option<std::string>(sim, settings, "--traps", "traps", "Trap file (trap_id,x,y)");
  option<std::size_t>(sim, settings, "--grid", "grid", "Side of a square unit trap grid (default 5)");
  option<double>(sim, settings, "--buffer", "buffer", "State-space buffer around the traps (default 2)");
  option<int>(sim, settings, "--N", "N", "Population size");
  option<int>(sim, settings, "--K", "K", "Sampling occasions");
  option<double>(sim, settings, "--lambda0", "lambda0", "Baseline hazard");
  option<double>(sim, settings, "--sigma", "sigma", "Spatial scale");
  option<std::size_t>(sim, settings, "--n-known", "n_known", "Individuals with known identity");
  option<std::size_t>(sim, settings, "--M", "M", "Augmented size");
  flag(sim, settings, "--reconcile", "reconcile", "Emit perfectly matched data instead");
  option<std::uint64_t>(sim, settings, "--seed", "seed", "Simulation seed");
  option<std::string>(sim, settings, "--out", "out", "Output directory");

  auto add_fit = [&](const char* name, const char* help, bool with_mode) {
    auto* cmd = app.add_subcommand(name, help);
    config_option(cmd, settings);
    option<std::string>(cmd, settings, "--traps", "traps", "Trap file (trap_id,x,y)");
    option<std::string>(cmd, settings, "--left", "left", "Left encounter file");
    option<std::string>(cmd, settings, "--right", "right", "Right encounter file");
    option<int>(cmd, settings, "--K", "K", "Sampling occasions");
    option<std::size_t>(cmd, settings, "--n-known", "n_known", "Leading rows with known identity");
    option<std::size_t>(cmd, settings, "--M", "M", "Augmented size");
    option<double>(cmd, settings, "--buffer", "buffer", "State-space buffer around the traps (default 2)");
    option<std::string>(cmd, settings, "--out", "out", "Output directory");
    sampler_options(cmd, settings);
    if (with_mode) {
      option<std::string>(cmd, settings, "--mode", "mode", "full, known_id or all_known");
      flag(cmd, settings, "--record-ids", "record_id_samples", "Write id_samples.csv");
    }
    return cmd;
  };
  auto* fit_cmd = add_fit("fit", "Fit the latent-identity model", true);
  auto* heur_cmd = add_fit("fit-heuristic", "Fit the independent-sides heuristic", false);

  auto* sum = app.add_subcommand("summarize", "Posterior summary table from chain.csv");
  config_option(sum, settings);
  option<std::string>(sum, settings, "--chain", "chain", "chain.csv");
  option<std::string>(sum, settings, "--out", "out", "Output file (stdout if omitted)");

  auto* idt = app.add_subcommand("id-table", "Posterior left matches for one right row");
  config_option(idt, settings);
  option<std::string>(idt, settings, "--fit-dir", "fit_dir", "Output directory of a fit run");
  option<std::size_t>(idt, settings, "--right-index", "right_index", "Right row (1-based)");
  option<std::string>(idt, settings, "--out", "out", "Output file (stdout if omitted)");

  auto* study = app.add_subcommand("simstudy", "Replicated simulation study");
  config_option(study, settings);
  option<int>(study, settings, "--K", "K", "Sampling occasions");
  option<std::size_t>(study, settings, "--M", "M", "Augmented size (default 250)");
  option<std::size_t>(study, settings, "--R", "R", "Replicates per scenario (default 200)");
  option<std::size_t>(study, settings, "--workers", "workers", "Parallel workers (default 1)");
  option<std::vector<std::string>>(study, settings, "--estimators", "estimators",
                                   "Estimators, e.g. nID=0 nID=10 nID=all heur");
  option<std::string>(study, settings, "--grid", "grid", "Scenario grid (factorial)");
  option<std::string>(study, settings, "--out", "out", "Output directory");
  option<std::size_t>(study, settings, "--iters", "iters", "Total MCMC iterations");
  option<std::size_t>(study, settings, "--burnin", "burnin", "Iterations discarded before recording");
  option<std::size_t>(study, settings, "--thin", "thin", "Record every thin-th iteration");
  option<std::uint64_t>(study, settings, "--seed", "seed", "Master seed");
  option<std::string>(study, settings, "--kernel", "kernel", "Hazard kernel: auto, scalar or avx2");
  option<std::size_t>(study, settings, "--progress-every", "progress_every",
                      "Nonzero reports each finished replicate to stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << e.what() << "\n";
    return 2;
  }

  try {
    if (sim->parsed()) cmd_simulate(settings);
    else if (fit_cmd->parsed()) cmd_fit(settings, false);
    else if (heur_cmd->parsed()) cmd_fit(settings, true);
    else if (sum->parsed()) cmd_summarize(settings);
    else if (idt->parsed()) cmd_id_table(settings);
    else if (study->parsed()) cmd_simstudy(settings);
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
