#include "scrid/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include "scrid/error.hpp"

namespace scrid::io {

using nlohmann::json;

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw Error(ErrorKind::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorKind::Io, "cannot move output into place at " + path.string());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --- CSV helpers ----------------------------------------------------------------------

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && (s[a] == ' ' || s[a] == '\t')) ++a;
  while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

// Non-blank lines with their 1-based line numbers.
struct Csv {
  std::vector<std::string> header;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
};

Csv read_csv(std::istream& in, const std::string& what) {
  Csv csv;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    if (!have_header) {
      csv.header = split(line);
      have_header = true;
    } else {
      csv.rows.emplace_back(lineno, split(line));
    }
  }
  if (!have_header) throw Error(ErrorKind::Parse, what + ": empty file");
  return csv;
}

void expect_header(const Csv& csv, const std::vector<std::string>& expected,
                   const std::string& what) {
  if (csv.header != expected) {
    std::string want;
    for (std::size_t i = 0; i < expected.size(); ++i) want += (i ? "," : "") + expected[i];
    throw Error(ErrorKind::Parse, what + ": expected header '" + want + "'");
  }
}

std::string where(const std::string& what, std::size_t lineno) {
  return what + " line " + std::to_string(lineno);
}

template <typename T>
T parse_number(const std::string& field, const std::string& context) {
  T value{};
  const char* begin = field.data();
  const char* end = begin + field.size();
  if (!field.empty() && *begin == '+') ++begin;
  const auto res = std::from_chars(begin, end, value);
  if (field.empty() || res.ec != std::errc() || res.ptr != end)
    throw Error(ErrorKind::Parse, context + ": '" + field + "' is not a valid number");
  return value;
}

void expect_columns(const std::vector<std::string>& row, std::size_t n, const std::string& ctx) {
  if (row.size() != n)
    throw Error(ErrorKind::Dimension, ctx + ": expected " + std::to_string(n) + " columns, found " +
                                          std::to_string(row.size()));
}

std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += fields[i];
  }
  out += '\n';
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return in;
}

}  // namespace

// --- traps ------------------------------------------------------------------------------

TrapArray parse_traps(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos)
    throw Error(ErrorKind::Parse, "no traps");
  std::istringstream body(text);

  const Csv csv = read_csv(body, "traps");
  expect_header(csv, {"trap_id", "x", "y"}, "traps");
  if (csv.rows.empty()) throw Error(ErrorKind::Parse, "no traps");

  std::map<long, Point> by_id;
  for (const auto& [lineno, row] : csv.rows) {
    const std::string ctx = where("traps", lineno);
    expect_columns(row, 3, ctx);
    const long id = parse_number<long>(row[0], ctx);
    const double x = parse_number<double>(row[1], ctx);
    const double y = parse_number<double>(row[2], ctx);
    if (!by_id.emplace(id, Point{x, y}).second)
      throw Error(ErrorKind::Parse, "duplicate trap id " + std::to_string(id));
  }
  std::vector<Point> coords;
  long expected = 1;
  for (const auto& [id, p] : by_id) {
    if (id != expected) throw Error(ErrorKind::Parse, "gap in trap ids");
    coords.push_back(p);
    ++expected;
  }
  return TrapArray(std::move(coords));
}

TrapArray read_traps(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_traps(in);
}

std::string format_traps(const TrapArray& traps) {
  std::string out = "trap_id,x,y\n";
  for (std::size_t j = 0; j < traps.size(); ++j)
    out += join({std::to_string(j + 1), format_double(traps[j].x), format_double(traps[j].y)});
  return out;
}

// --- encounter matrices ---------------------------------------------------------------------

EncounterMatrix parse_encounters(std::istream& in, std::size_t J, int K) {
  if (K < 1) throw Error(ErrorKind::InvalidArgument, "K must be at least 1");
  const Csv csv = read_csv(in, "encounters");
  if (csv.header.size() != J)
    throw Error(ErrorKind::Dimension, "encounters: header has " +
                                          std::to_string(csv.header.size()) + " columns but there are " +
                                          std::to_string(J) + " traps");
  for (std::size_t j = 0; j < J; ++j)
    if (csv.header[j] != "t" + std::to_string(j + 1))
      throw Error(ErrorKind::Parse, "encounters: expected header t1..t" + std::to_string(J));

  EncounterMatrix m(0, J, K);
  std::vector<int> values(J);
  std::size_t r = 0;
  for (const auto& [lineno, row] : csv.rows) {
    ++r;
    const std::string ctx = where("encounters", lineno);
    expect_columns(row, J, ctx);
    for (std::size_t j = 0; j < J; ++j) {
      const int v = parse_number<int>(row[j], ctx);
      if (v < 0)
        throw Error(ErrorKind::InvalidArgument, "negative count at row " + std::to_string(r) +
                                                    ", column " + std::to_string(j + 1));
      if (v > K)
        throw Error(ErrorKind::InvalidArgument,
                    "count " + std::to_string(v) + " exceeds K = " + std::to_string(K) +
                        " at row " + std::to_string(r) + ", column " + std::to_string(j + 1));
      values[j] = v;
    }
    m.append_row(values);
  }
  return m;
}

EncounterMatrix read_encounters(const std::filesystem::path& path, std::size_t J, int K) {
  auto in = open_in(path);
  return parse_encounters(in, J, K);
}

std::string format_encounters(const EncounterMatrix& m, std::optional<std::size_t> rows) {
  const std::size_t n = rows ? std::min(*rows, m.rows()) : m.rows();
  std::vector<std::string> fields(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) fields[j] = "t" + std::to_string(j + 1);
  std::string out = join(fields);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) fields[j] = std::to_string(m(i, j));
    out += join(fields);
  }
  return out;
}

// --- chains ---------------------------------------------------------------------------------

std::string format_chain(const std::vector<ChainSample>& samples) {
  std::string out = "iter,lambda0,sigma,psi,N,loglik\n";
  for (const auto& s : samples)
    out += join({std::to_string(s.iter), format_double(s.lambda0), format_double(s.sigma),
                 format_double(s.psi), std::to_string(s.N), format_double(s.loglik)});
  return out;
}

std::vector<ChainSample> parse_chain(std::istream& in) {
  const Csv csv = read_csv(in, "chain");
  expect_header(csv, {"iter", "lambda0", "sigma", "psi", "N", "loglik"}, "chain");
  std::vector<ChainSample> out;
  for (const auto& [lineno, row] : csv.rows) {
    const std::string ctx = where("chain", lineno);
    expect_columns(row, 6, ctx);
    out.push_back({parse_number<std::size_t>(row[0], ctx), parse_number<double>(row[1], ctx),
                   parse_number<double>(row[2], ctx), parse_number<double>(row[3], ctx),
                   parse_number<int>(row[4], ctx), parse_number<double>(row[5], ctx)});
  }
  return out;
}

std::string format_id_samples(const std::vector<IdSample>& samples) {
  std::string out = "iter,right_index,left_index\n";
  for (const auto& s : samples)
    out += join({std::to_string(s.iter), std::to_string(s.right_index + 1),
                 std::to_string(s.left_index + 1)});
  return out;
}

std::vector<IdSample> parse_id_samples(std::istream& in) {
  const Csv csv = read_csv(in, "id_samples");
  expect_header(csv, {"iter", "right_index", "left_index"}, "id_samples");
  std::vector<IdSample> out;
  for (const auto& [lineno, row] : csv.rows) {
    const std::string ctx = where("id_samples", lineno);
    expect_columns(row, 3, ctx);
    const auto iter = parse_number<std::size_t>(row[0], ctx);
    const auto r = parse_number<std::size_t>(row[1], ctx);
    const auto l = parse_number<std::size_t>(row[2], ctx);
    if (r == 0 || l == 0) throw Error(ErrorKind::Parse, ctx + ": indices are 1-based");
    out.push_back({iter, r - 1, l - 1});
  }
  return out;
}

// --- summaries --------------------------------------------------------------------------------

namespace {

const std::vector<std::string> kSummaryHeader = {"parameter", "mean", "sd",    "q2.5", "q25",
                                                 "q50",       "q75",  "q97.5", "mode", "draws"};

std::vector<std::string> summary_row(const std::string& name, const ParamSummary& p,
                                     const std::string& mode, std::size_t draws) {
  return {name,
          format_double(p.mean),
          format_double(p.sd),
          format_double(p.q025),
          format_double(p.q25),
          format_double(p.q50),
          format_double(p.q75),
          format_double(p.q975),
          mode,
          std::to_string(draws)};
}

}  // namespace

std::string format_summary(const PosteriorSummary& s) {
  std::string out = join(kSummaryHeader);
  out += join(summary_row("lambda0", s.lambda0, "", s.draws));
  out += join(summary_row("sigma", s.sigma, "", s.draws));
  out += join(summary_row("psi", s.psi, "", s.draws));
  out += join(summary_row("N", s.N, std::to_string(s.N_mode), s.draws));
  return out;
}

PosteriorSummary parse_summary(std::istream& in) {
  const Csv csv = read_csv(in, "summary");
  expect_header(csv, kSummaryHeader, "summary");
  PosteriorSummary out;
  std::map<std::string, ParamSummary*> slots = {
      {"lambda0", &out.lambda0}, {"sigma", &out.sigma}, {"psi", &out.psi}, {"N", &out.N}};
  std::size_t seen = 0;
  for (const auto& [lineno, row] : csv.rows) {
    const std::string ctx = where("summary", lineno);
    expect_columns(row, kSummaryHeader.size(), ctx);
    const auto it = slots.find(row[0]);
    if (it == slots.end()) throw Error(ErrorKind::Parse, ctx + ": unknown parameter '" + row[0] + "'");
    ParamSummary& p = *it->second;
    p.mean = parse_number<double>(row[1], ctx);
    p.sd = parse_number<double>(row[2], ctx);
    p.q025 = parse_number<double>(row[3], ctx);
    p.q25 = parse_number<double>(row[4], ctx);
    p.q50 = parse_number<double>(row[5], ctx);
    p.q75 = parse_number<double>(row[6], ctx);
    p.q975 = parse_number<double>(row[7], ctx);
    if (row[0] == "N") out.N_mode = parse_number<int>(row[8], ctx);
    out.draws = parse_number<std::size_t>(row[9], ctx);
    ++seen;
  }
  if (seen != 4) throw Error(ErrorKind::Parse, "summary: expected rows lambda0, sigma, psi, N");
  return out;
}

std::string format_id_table(const IdMatchTable& table) {
  std::string out = "right_index,left_index,frequency,total\n";
  for (const auto& e : table.entries)
    out += join({std::to_string(table.right_index + 1),
                 e.left_index ? std::to_string(*e.left_index + 1) : std::string("NEW"),
                 std::to_string(e.count), std::to_string(table.total)});
  return out;
}

IdMatchTable parse_id_table(std::istream& in) {
  const Csv csv = read_csv(in, "id_table");
  expect_header(csv, {"right_index", "left_index", "frequency", "total"}, "id_table");
  IdMatchTable table;
  bool first = true;
  for (const auto& [lineno, row] : csv.rows) {
    const std::string ctx = where("id_table", lineno);
    expect_columns(row, 4, ctx);
    const auto r = parse_number<std::size_t>(row[0], ctx);
    if (r == 0) throw Error(ErrorKind::Parse, ctx + ": indices are 1-based");
    const auto total = parse_number<std::size_t>(row[3], ctx);
    if (first) {
      table.right_index = r - 1;
      table.total = total;
      first = false;
    } else if (r - 1 != table.right_index || total != table.total) {
      throw Error(ErrorKind::Parse, ctx + ": rows describe different tables");
    }
    IdMatchEntry e;
    if (row[1] != "NEW") {
      const auto l = parse_number<std::size_t>(row[1], ctx);
      if (l == 0) throw Error(ErrorKind::Parse, ctx + ": indices are 1-based");
      e.left_index = l - 1;
    }
    e.count = parse_number<std::size_t>(row[2], ctx);
    table.entries.push_back(e);
  }
  return table;
}

// --- study tables -------------------------------------------------------------------------------

namespace {

const std::vector<std::string> kMetricsHeader = {
    "scenario", "N", "lambda0", "sigma", "model", "mean", "sd",
    "mode",     "sd_mode", "postSD", "95cover", "pmode", "R"};

}  // namespace

std::string format_metrics(const std::vector<StudyMetrics>& metrics,
                           const std::vector<Scenario>& scenarios) {
  std::string out = join(kMetricsHeader);
  for (const auto& m : metrics) {
    const Scenario& sc = scenarios.at(m.scenario);
    out += join({m.scenario_name, std::to_string(m.N_true), format_double(sc.params.lambda0),
                 format_double(sc.params.sigma), m.estimator_label, format_double(m.mean_of_means),
                 format_double(m.sd_of_means), format_double(m.mean_of_modes),
                 format_double(m.sd_of_modes), format_double(m.avg_post_sd),
                 format_double(m.coverage), std::to_string(m.pooled_mode), std::to_string(m.R)});
  }
  return out;
}

std::vector<StudyMetrics> parse_metrics(std::istream& in) {
  const Csv csv = read_csv(in, "metrics");
  expect_header(csv, kMetricsHeader, "metrics");
  std::vector<StudyMetrics> out;
  std::map<std::string, std::size_t> scenario_index;
  std::map<std::string, std::size_t> estimator_index;
  for (const auto& [lineno, row] : csv.rows) {
    const std::string ctx = where("metrics", lineno);
    expect_columns(row, kMetricsHeader.size(), ctx);
    StudyMetrics m;
    m.scenario_name = row[0];
    m.N_true = parse_number<int>(row[1], ctx);
    parse_number<double>(row[2], ctx);
    parse_number<double>(row[3], ctx);
    m.estimator_label = row[4];
    m.mean_of_means = parse_number<double>(row[5], ctx);
    m.sd_of_means = parse_number<double>(row[6], ctx);
    m.mean_of_modes = parse_number<double>(row[7], ctx);
    m.sd_of_modes = parse_number<double>(row[8], ctx);
    m.avg_post_sd = parse_number<double>(row[9], ctx);
    m.coverage = parse_number<double>(row[10], ctx);
    m.pooled_mode = parse_number<int>(row[11], ctx);
    m.R = parse_number<std::size_t>(row[12], ctx);
    m.scenario = scenario_index.emplace(m.scenario_name, scenario_index.size()).first->second;
    m.estimator = estimator_index.emplace(m.estimator_label, estimator_index.size()).first->second;
    out.push_back(m);
  }
  return out;
}

std::string format_replicates(const std::vector<ReplicateResult>& replicates,
                              const std::vector<Scenario>& scenarios,
                              const std::vector<Estimator>& estimators) {
  std::string out = join({"scenario", "model", "replicate", "ok", "n_left", "n_right", "mean", "sd",
                          "q2.5", "q50", "q97.5", "mode", "covered", "error"});
  for (const auto& r : replicates) {
    std::string error = r.error;
    std::replace(error.begin(), error.end(), ',', ';');
    std::replace(error.begin(), error.end(), '\n', ' ');
    const auto& N = r.summary.N;
    out += join({scenarios.at(r.scenario).name, estimators.at(r.estimator).label(),
                 std::to_string(r.replicate + 1), r.ok ? "1" : "0", std::to_string(r.n_left),
                 std::to_string(r.n_right), format_double(N.mean), format_double(N.sd),
                 format_double(N.q025), format_double(N.q50), format_double(N.q975),
                 std::to_string(r.summary.N_mode), r.covered ? "1" : "0", error});
  }
  return out;
}

// --- JSON -----------------------------------------------------------------------------------

json to_json(const SamplerConfig& c) {
  json j;
  j["iters"] = c.iters;
  j["burnin"] = c.burnin;
  j["thin"] = c.thin;
  j["M"] = c.M;
  j["proposal_sd_log_lambda0"] = c.proposal_sd_log_lambda0;
  j["proposal_sd_log_sigma"] = c.proposal_sd_log_sigma;
  j["proposal_sd_s"] = c.proposal_sd_s;
  j["n_swaps_per_iter"] = c.n_swaps_per_iter;
  j["swap_radius"] = c.swap_radius ? json(*c.swap_radius) : json(nullptr);
  j["prior_upper_lambda0"] = c.prior_upper_lambda0;
  j["prior_upper_sigma"] = c.prior_upper_sigma ? json(*c.prior_upper_sigma) : json(nullptr);
  j["mode"] = std::string(to_string(c.mode));
  j["record_id_samples"] = c.record_id_samples;
  j["seed"] = c.seed;
  j["kernel"] = std::string(kernels::name(c.kernel));
  j["progress_every"] = c.progress_every;
  if (c.initial_params) {
    j["initial_lambda0"] = c.initial_params->lambda0;
    j["initial_sigma"] = c.initial_params->sigma;
  } else {
    j["initial_lambda0"] = nullptr;
    j["initial_sigma"] = nullptr;
  }
  json support = json::array();
  for (Point p : c.discrete_support) support.push_back({p.x, p.y});
  j["discrete_support"] = support;
  j["freeze_detection_params"] = c.freeze_detection_params;
  j["clamp_ids"] = c.clamp_ids;
  return j;
}

namespace {

template <typename T>
T get_as(const json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::Parse, "config key '" + key + "' has the wrong type");
  }
}

std::size_t get_count(const json& v, const std::string& key) {
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<long long>() < 0))
    throw Error(ErrorKind::Parse, "config key '" + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

std::optional<double> get_optional(const json& v, const std::string& key) {
  if (v.is_null()) return std::nullopt;
  if (!v.is_number()) throw Error(ErrorKind::Parse, "config key '" + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

SamplerConfig sampler_config_from_json(const json& j, SamplerConfig c) {
  if (!j.is_object()) throw Error(ErrorKind::Parse, "config must be a JSON object");
  std::optional<double> init_lambda0;
  std::optional<double> init_sigma;
  if (c.initial_params) {
    init_lambda0 = c.initial_params->lambda0;
    init_sigma = c.initial_params->sigma;
  }
  for (const auto& [key, v] : j.items()) {
    if (key == "iters") c.iters = get_count(v, key);
    else if (key == "burnin") c.burnin = get_count(v, key);
    else if (key == "thin") c.thin = get_count(v, key);
    else if (key == "M") c.M = get_count(v, key);
    else if (key == "proposal_sd_log_lambda0") c.proposal_sd_log_lambda0 = get_as<double>(v, key);
    else if (key == "proposal_sd_log_sigma") c.proposal_sd_log_sigma = get_as<double>(v, key);
    else if (key == "proposal_sd_s") c.proposal_sd_s = get_as<double>(v, key);
    else if (key == "n_swaps_per_iter") c.n_swaps_per_iter = get_count(v, key);
    else if (key == "swap_radius") c.swap_radius = get_optional(v, key);
    else if (key == "prior_upper_lambda0") c.prior_upper_lambda0 = get_as<double>(v, key);
    else if (key == "prior_upper_sigma") c.prior_upper_sigma = get_optional(v, key);
    else if (key == "mode") c.mode = parse_mode(get_as<std::string>(v, key));
    else if (key == "record_id_samples") c.record_id_samples = get_as<bool>(v, key);
    else if (key == "seed") c.seed = get_as<std::uint64_t>(v, key);
    else if (key == "kernel") c.kernel = kernels::parse_choice(get_as<std::string>(v, key));
    else if (key == "progress_every") c.progress_every = get_count(v, key);
    else if (key == "initial_lambda0") init_lambda0 = get_optional(v, key);
    else if (key == "initial_sigma") init_sigma = get_optional(v, key);
    else if (key == "freeze_detection_params") c.freeze_detection_params = get_as<bool>(v, key);
    else if (key == "clamp_ids") c.clamp_ids = get_as<bool>(v, key);
    else if (key == "discrete_support") {
      c.discrete_support.clear();
      if (!v.is_array()) throw Error(ErrorKind::Parse, "discrete_support must be an array");
      for (const auto& p : v) {
        if (!p.is_array() || p.size() != 2)
          throw Error(ErrorKind::Parse, "discrete_support entries must be [x, y]");
        c.discrete_support.push_back({get_as<double>(p[0], key), get_as<double>(p[1], key)});
      }
    } else {
      throw Error(ErrorKind::Parse, "unknown config key '" + key + "'");
    }
  }
  if (init_lambda0.has_value() != init_sigma.has_value())
    throw Error(ErrorKind::InvalidArgument,
                "initial_lambda0 and initial_sigma must be given together");
  c.initial_params.reset();
  if (init_lambda0 && init_sigma) c.initial_params = DetectionParams{*init_lambda0, *init_sigma};
  return c;
}

json to_json(const AcceptanceStats& stats) {
  auto one = [](const AcceptanceCounter& c) {
    return json{{"attempts", c.attempts}, {"accepts", c.accepts}, {"rate", c.rate()}};
  };
  return json{{"lambda0", one(stats.lambda0)},
              {"sigma", one(stats.sigma)},
              {"s", one(stats.s)},
              {"id", one(stats.id)}};
}

json to_json(const PosteriorSummary& s) {
  auto one = [](const ParamSummary& p) {
    return json{{"mean", p.mean}, {"sd", p.sd},   {"q2.5", p.q025}, {"q25", p.q25},
                {"q50", p.q50},   {"q75", p.q75}, {"q97.5", p.q975}};
  };
  json j{{"lambda0", one(s.lambda0)},
         {"sigma", one(s.sigma)},
         {"psi", one(s.psi)},
         {"N", one(s.N)},
         {"draws", s.draws}};
  j["N"]["mode"] = s.N_mode;
  return j;
}

json chain_meta(const ChainOutput& chain, const AugmentedDataset& data, bool swapped) {
  json j;
  j["seed"] = chain.config.seed;
  j["config"] = to_json(chain.config);
  j["acceptance"] = to_json(chain.acceptance);
  j["mode"] = std::string(to_string(chain.mode));
  j["n_definition"] = chain.n_definition;
  j["kernel"] = std::string(kernels::name(chain.kernel));
  j["quantile_rule"] = "linear interpolation between order statistics (type 7)";
  j["samples"] = chain.samples.size();
  j["data"] = json{{"M", data.M},
                   {"J", data.J},
                   {"K", data.K},
                   {"n_left", data.n_left},
                   {"n_right", data.n_right},
                   {"n_known", data.n_known},
                   {"sides_swapped", swapped}};
  j["index_base"] = 1;
  return j;
}

json truth_json(const SimTruth& truth, const ScrambledData& scrambled) {
  json j;
  j["N"] = truth.N;
  j["K"] = truth.K;
  j["lambda0"] = truth.params.lambda0;
  j["sigma"] = truth.params.sigma;
  json s = json::array();
  for (Point p : truth.s_true) s.push_back({p.x, p.y});
  j["s_true"] = s;
  json key = json::array();
  for (std::size_t r = 0; r < scrambled.answer_key.size(); ++r) key.push_back(scrambled.answer_key[r] + 1);
  j["answer_key"] = key;
  auto individuals = [](const std::vector<int>& v) {
    json a = json::array();
    for (int n : v) a.push_back(n < 0 ? json(nullptr) : json(n + 1));
    return a;
  };
  j["left_individual"] = individuals(scrambled.left_individual);
  j["right_individual"] = individuals(scrambled.right_individual);
  j["n_known"] = scrambled.data.n_known;
  j["M"] = scrambled.data.M;
  j["sides_swapped"] = scrambled.swapped;
  j["index_base"] = 1;
  return j;
}

}  // namespace scrid::io
