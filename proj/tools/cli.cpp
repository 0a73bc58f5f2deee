#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "rdetect/analysis.hpp"
#include "rdetect/convergence.hpp"
#include "rdetect/export.hpp"
#include "rdetect/parser.hpp"
#include "rdetect/robust_detect.hpp"
#include "rdetect/simulator.hpp"

namespace rdetect::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr const char* kSeedEnv = "RDETECT_SEED";

struct Options {
  std::vector<Count> n;
  std::optional<Count> k;
  std::optional<int> s;
  std::optional<double> beta;
  std::optional<std::string> strategy;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> runs;
  std::optional<double> time;
  std::optional<double> record_every;
  std::string out;
  std::string format = "csv";
  std::string preset;

  double epsilon = 0.02;
  double theta = 1.0;
  std::optional<double> min_success;
  std::string init = "x1";
  double remove_at = 100.0;
  std::optional<double> readd_at;
  double window = 40.0;
  double low = 0.05;
  double high = 0.62;
  bool log_events = false;
};

/// One (k, beta, strategy) setting of an experiment.
struct Condition {
  std::string label;
  Count k = 0;
  double beta = 0.0;
  std::string strategy;  // "", none, fp, fn, custom:<file>
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path + "'");
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write '" + path + "'");
  os << content;
  if (!os) throw IoError("error writing '" + path + "'");
}

std::uint64_t resolve_seed(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv(kSeedEnv)) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ValidationError(std::string(kSeedEnv) + " is not an unsigned integer");
    }
  }
  return 1;
}

std::string format_label(double beta) {
  std::ostringstream ss;
  ss << beta;
  return ss.str();
}

Condition make_condition(Count k, double beta, std::string strategy = "") {
  return {"k" + std::to_string(k) + "_beta" + format_label(beta), k, beta, std::move(strategy)};
}

/// Resolves the strategy name for a condition. An unset strategy with beta > 0
/// picks the worst case for the setting: fp without D, fn with D.
LeakModel leak_for(const Condition& c) {
  LeakModel leak;
  leak.beta = c.beta;
  std::string name = c.strategy;
  if (name.empty()) name = c.beta > 0.0 ? (c.k == 0 ? "fp" : "fn") : "none";
  if (name == "none") {
    leak.strategy = LeakStrategy::none;
  } else if (name == "fp") {
    leak.strategy = LeakStrategy::worst_false_positive;
  } else if (name == "fn") {
    leak.strategy = LeakStrategy::worst_false_negative;
  } else if (name.rfind("custom:", 0) == 0) {
    leak.strategy = LeakStrategy::custom;
    const auto text = read_file(name.substr(7));
    std::istringstream lines(text);
    std::string line;
    int line_no = 0;
    while (std::getline(lines, line)) {
      ++line_no;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      std::string from, arrow, to, extra;
      if (!(ls >> from)) continue;
      if (!(ls >> arrow >> to) || arrow != "->" || (ls >> extra))
        throw ValidationError("leak map line " + std::to_string(line_no) +
                              ": expected '<from> -> <to>'");
      leak.custom.emplace_back(from, to);
    }
  } else {
    throw ValidationError("unknown strategy '" + name + "' (none, fp, fn, custom:<file>)");
  }
  return leak;
}

std::string strategy_name(const LeakModel& leak) {
  switch (leak.strategy) {
    case LeakStrategy::none: return "none";
    case LeakStrategy::worst_false_positive: return "fp";
    case LeakStrategy::worst_false_negative: return "fn";
    case LeakStrategy::custom: return "custom";
  }
  return "?";
}

void check_format(const Options& o) {
  if (o.format != "csv" && o.format != "json")
    throw ValidationError("format must be csv or json");
}

Count single_n(const Options& o, Count fallback) {
  if (o.n.empty()) return fallback;
  if (o.n.size() > 1) throw ValidationError("this command takes a single --n");
  return o.n.front();
}

void check_population(Count n, Count k) {
  if (n < 2) throw ValidationError("--n must be at least 2");
  if (k < 0 || k > n) throw ValidationError("--k must lie in [0, n]");
}

Count to_interactions(double parallel_time, Count n, const char* flag) {
  if (!(parallel_time >= 0.0) || !std::isfinite(parallel_time))
    throw ValidationError(std::string(flag) + " must be a non-negative parallel time");
  return static_cast<Count>(std::llround(parallel_time * static_cast<double>(n)));
}

/// Writes one document per condition. With several conditions and an output
/// path, files are named <stem>_<label><ext>; on stdout each block is
/// preceded by a '# <label>' line.
void emit_blocks(const Options& o, const std::vector<std::pair<std::string, std::string>>& blocks,
                 std::ostream& out) {
  if (o.out.empty()) {
    for (const auto& [label, text] : blocks) {
      if (blocks.size() > 1) out << "# " << label << '\n';
      out << text;
    }
    return;
  }
  if (blocks.size() == 1) {
    write_file(o.out, blocks.front().second);
    return;
  }
  const fs::path base(o.out);
  for (const auto& [label, text] : blocks) {
    fs::path p = base.parent_path() /
                 (base.stem().string() + "_" + label + base.extension().string());
    write_file(p.string(), text);
  }
}

void emit_json(const Options& o, const json& doc, std::ostream& out) {
  const auto text = doc.dump(2) + "\n";
  if (o.out.empty())
    out << text;
  else
    write_file(o.out, text);
}

// ---------------------------------------------------------------- generate

int cmd_generate(const Options& o, bool truncated, std::ostream& out) {
  const int s = o.s.value_or(default_levels(single_n(o, 10000)));
  if (s < 1) throw ValidationError("--s must be at least 1");
  const auto p = truncated ? build_truncated_ideal(s) : build_robust_detect(s);
  const auto text = serialize_protocol(p);
  if (o.out.empty())
    out << text;
  else
    write_file(o.out, text);
  return kSuccess;
}

// ---------------------------------------------------------------- validate

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
  const auto text = read_file(path);
  Protocol p;
  try {
    p = parse_protocol(text);
  } catch (const ParseError& e) {
    err << path << ":" << e.line() << ":" << e.column() << ": error: "
        << std::string(e.what()).substr(std::string(e.what()).find(": ") + 2) << '\n';
    return kValidationError;
  }
  if (p.species_count() == 0) err << path << ": warning: empty protocol\n";
  const auto part = classify_catalytic(p);
  auto names = [&p](const std::vector<SpeciesId>& ids) {
    std::string s;
    for (auto id : ids) s += (s.empty() ? "" : " ") + p.species(id).name;
    return s;
  };
  out << "species: " << p.species_count() << '\n';
  out << "reactions: " << p.canonical_rules().size() << '\n';
  out << "catalytic: " << names(part.catalytic) << '\n';
  out << "non-catalytic: " << names(part.non_catalytic) << '\n';
  return kSuccess;
}

// ---------------------------------------------------------------- steady

StationaryProfile profile_for(const Condition& c, Count n, int s) {
  const auto leak = leak_for(c);
  if (leak.strategy == LeakStrategy::none || c.beta == 0.0)
    return stationary_no_leak(n, c.k, s);
  if (leak.strategy == LeakStrategy::worst_false_positive) {
    if (c.k != 0)
      throw ValidationError("false-positive profile is defined for k = 0 only");
    return stationary_false_positive(n, c.beta, s);
  }
  if (leak.strategy == LeakStrategy::worst_false_negative) {
    if (c.k == 0) return stationary_no_leak(n, 0, s);
    return stationary_false_negative(n, c.k, c.beta, s);
  }
  throw ValidationError("stationary profiles exist for none, fp and fn strategies only");
}

std::vector<Condition> conditions_from(const Options& o, std::vector<Condition> preset,
                                       Count default_k) {
  if (!preset.empty() && !o.k && !o.beta && !o.strategy) return preset;
  const Count k = o.k.value_or(default_k);
  const double beta = o.beta.value_or(0.0);
  if (beta < 0.0) throw ValidationError("--beta must be >= 0");
  return {make_condition(k, beta, o.strategy.value_or(""))};
}

int cmd_steady(const Options& o, std::ostream& out) {
  check_format(o);
  std::vector<Condition> preset;
  Count n_default = 10000;
  int s_default = 0;
  if (o.preset == "figure1") {
    preset = {make_condition(1, 0.0), make_condition(0, 0.01, "fp"),
              make_condition(0, 0.1, "fp")};
    s_default = 14;
  } else if (!o.preset.empty()) {
    throw ValidationError("steady presets: figure1");
  }
  const Count n = single_n(o, n_default);
  const int s = o.s.value_or(s_default > 0 ? s_default : default_levels(n));
  if (s < 1) throw ValidationError("--s must be at least 1");
  const auto conditions = conditions_from(o, preset, 1);
  for (const auto& c : conditions) check_population(n, c.k);

  std::vector<std::pair<std::string, StationaryProfile>> profiles;
  for (const auto& c : conditions) profiles.emplace_back(c.label, profile_for(c, n, s));

  if (o.format == "json") {
    json doc{{"command", "steady"}, {"n", n}, {"s", s}, {"profiles", json::array()}};
    for (const auto& [label, prof] : profiles) {
      auto j = profile_json(prof);
      j["label"] = label;
      const auto b = theorem_bounds(n, prof.beta);
      j["theorem_bounds"] = {{"false_positive", b.false_positive},
                             {"false_negative", b.false_negative}};
      doc["profiles"].push_back(j);
    }
    emit_json(o, doc, out);
  } else {
    std::vector<std::pair<std::string, std::string>> blocks;
    for (const auto& [label, prof] : profiles) {
      std::ostringstream ss;
      write_profile_csv(ss, prof);
      blocks.emplace_back(label, ss.str());
    }
    emit_blocks(o, blocks, out);
  }
  return kSuccess;
}

// ---------------------------------------------------------------- simulate

struct SimSetup {
  Count n;
  int s;
  Count t_max;
  Count record_every;
  std::size_t runs;
  std::uint64_t seed;
};

SimSetup sim_setup(const Options& o, Count n_default, int s_default, double time_default,
                   double record_default, std::size_t runs_default) {
  SimSetup st{};
  st.n = single_n(o, n_default);
  if (st.n < 2) throw ValidationError("--n must be at least 2");
  st.s = o.s.value_or(s_default > 0 ? s_default : default_levels(st.n));
  if (st.s < 1) throw ValidationError("--s must be at least 1");
  st.t_max = to_interactions(o.time.value_or(time_default), st.n, "--time");
  st.record_every = to_interactions(o.record_every.value_or(record_default), st.n, "--record-every");
  if (st.record_every < 1) throw ValidationError("--record-every must cover at least one interaction");
  st.runs = o.runs.value_or(runs_default);
  if (st.runs < 1) throw ValidationError("--runs must be at least 1");
  st.seed = resolve_seed(o);
  return st;
}

SimParams make_params(const SimSetup& st, const Condition& c, const Protocol& p) {
  check_population(st.n, c.k);
  SimParams params;
  params.protocol = p;
  params.init = initial_configuration(p, DetectParams{st.n, c.k, st.s});
  params.leak = leak_for(c);
  params.seed = st.seed;
  params.t_max = st.t_max;
  params.record_every = st.record_every;
  params.validate();
  return params;
}

RunInfo info_for(const SimSetup& st, const Condition& c, const SimParams& params) {
  return {st.n, c.k, st.s, c.beta, strategy_name(params.leak), st.seed, st.runs,
          st.t_max, st.record_every};
}

int cmd_simulate(const Options& o, std::ostream& out) {
  check_format(o);
  std::vector<Condition> preset;
  int s_default = 0;
  if (o.preset == "figure2a") {
    preset = {make_condition(1, 0.0), make_condition(0, 0.1, "fp")};
    s_default = 14;
  } else if (o.preset == "figure2b") {
    preset = {make_condition(1, 0.0), make_condition(0, 0.01, "fp")};
    s_default = 17;
  } else if (!o.preset.empty()) {
    throw ValidationError("simulate presets: figure2a, figure2b");
  }
  const auto st = sim_setup(o, 10000, s_default, 100.0, 1.0, 1);
  const auto conditions = conditions_from(o, preset, 1);
  const auto protocol = build_robust_detect(st.s);

  json doc{{"command", "simulate"}, {"conditions", json::array()}};
  std::vector<std::pair<std::string, std::string>> blocks;
  for (const auto& c : conditions) {
    auto params = make_params(st, c, protocol);
    params.log_events = o.log_events && st.runs == 1;
    const auto info = info_for(st, c, params);
    std::ostringstream ss;
    json j;
    if (st.runs == 1) {
      const auto traj = run(params);
      write_trajectory_csv(ss, traj, protocol);
      j = trajectory_json(traj, protocol, info);
    } else {
      const auto batch = run_batch(params, st.runs);
      write_batch_csv(ss, batch, protocol, st.n);
      j = batch_json(batch, protocol, info);
    }
    j["label"] = c.label;
    doc["conditions"].push_back(std::move(j));
    blocks.emplace_back(c.label, ss.str());
  }
  if (o.format == "json")
    emit_json(o, doc, out);
  else
    emit_blocks(o, blocks, out);
  return kSuccess;
}

// ---------------------------------------------------------------- mix

int cmd_mix(const Options& o, std::ostream& out, std::ostream& err) {
  check_format(o);
  std::vector<Count> ns = o.n.empty() ? std::vector<Count>{1000, 4000, 16000} : o.n;
  const Count k = o.k.value_or(1);
  const double beta = o.beta.value_or(0.0);
  if (beta < 0.0) throw ValidationError("--beta must be >= 0");
  if (!(o.epsilon > 0.0 && o.epsilon < 1.0)) throw ValidationError("--epsilon must lie in (0, 1)");
  const auto condition = make_condition(k, beta, o.strategy.value_or(""));

  json rows = json::array();
  std::vector<double> xs, ys;
  bool all_converged = true;
  std::ostringstream csv;
  csv << "n,s,parallel_time,fitted_constant,final_gap\n";
  for (const Count n : ns) {
    Options per_n = o;
    per_n.n = {n};
    const double log2n = std::log2(static_cast<double>(std::max<Count>(n, 2)));
    const auto st = sim_setup(per_n, n, 0, 20.0 * log2n, 0.5, 20);
    const auto protocol = build_robust_detect(st.s);
    const auto params = make_params(st, condition, protocol);
    const auto est = estimate_convergence_time(params, o.epsilon, st.runs);
    auto row = convergence_json(est);
    row["n"] = n;
    row["s"] = st.s;
    row["limit_parallel_time"] = 10.0 * log2n;
    rows.push_back(row);
    csv << n << ',' << st.s << ','
        << (est.parallel_time ? format_number(*est.parallel_time) : "") << ','
        << (est.fitted_constant ? format_number(*est.fitted_constant) : "") << ','
        << format_number(est.final_gap) << '\n';
    if (est.parallel_time) {
      xs.push_back(static_cast<double>(n));
      ys.push_back(*est.parallel_time);
    } else {
      all_converged = false;
      err << "n=" << n << ": gap stayed above epsilon (final gap " << est.final_gap << ")\n";
    }
  }
  json doc{{"command", "mix"}, {"epsilon", o.epsilon}, {"k", k}, {"beta", beta}, {"estimates", rows}};
  if (xs.size() >= 2) {
    const auto fit = fit_log_trend(xs, ys);
    doc["trend"] = {{"slope_per_ln_n", fit.slope}, {"intercept", fit.intercept},
                    {"r_squared", fit.r_squared}};
    csv << "# trend slope_per_ln_n=" << format_number(fit.slope)
        << " r_squared=" << format_number(fit.r_squared) << '\n';
  }
  if (o.format == "json")
    emit_json(o, doc, out);
  else
    emit_blocks(o, {{"mix", csv.str()}}, out);
  return all_converged ? kSuccess : kExperimentFailure;
}

// ---------------------------------------------------------------- clean

int cmd_clean(const Options& o, std::ostream& out) {
  check_format(o);
  const Count n = single_n(o, 1000);
  if (n < 2) throw ValidationError("--n must be at least 2");
  const int s = o.s.value_or(10);
  if (s < 1) throw ValidationError("--s must be at least 1");
  const std::size_t runs = o.runs.value_or(100);
  if (runs < 1) throw ValidationError("--runs must be at least 1");
  const double min_success = o.min_success.value_or(0.95);

  DecayConfig cfg;
  cfg.protocol = build_truncated_ideal(s);
  if (o.init == "x1") {
    cfg.init = initial_configuration(cfg.protocol, DetectParams{n, 0, s}, {{"X1", n}});
  } else if (o.init == "n") {
    cfg.init = initial_configuration(cfg.protocol, DetectParams{n, 0, s});
  } else {
    throw ValidationError("--init must be x1 or n");
  }
  cfg.runs = runs;
  cfg.seed = resolve_seed(o);
  cfg.theta = o.theta;
  const auto rep = decay_experiment(cfg);

  if (o.format == "json") {
    auto doc = decay_json(rep);
    doc["command"] = "clean";
    doc["n"] = n;
    doc["s"] = s;
    doc["runs"] = runs;
    doc["seed"] = cfg.seed;
    doc["max_pair_contraction"] = max_pair_contraction(cfg.protocol);
    emit_json(o, doc, out);
  } else {
    std::ostringstream ss;
    ss << "t,parallel_time,mean_phi\n";
    for (std::size_t i = 0; i < rep.times.size(); ++i)
      ss << rep.times[i] << ',' << format_number(double(rep.times[i]) / double(n)) << ','
         << format_number(rep.mean_phi[i]) << '\n';
    ss << "# t_star=" << rep.t_star << " cleared_by_t_star=" << rep.cleared_by_t_star << '/'
       << runs << '\n';
    emit_blocks(o, {{"clean", ss.str()}}, out);
  }
  return rep.cleared_fraction >= min_success ? kSuccess : kExperimentFailure;
}

// ---------------------------------------------------------------- stabilize

int cmd_stabilize(const Options& o, std::ostream& out) {
  check_format(o);
  const double readd_at = o.readd_at.value_or(o.remove_at + o.window);
  if (o.remove_at < 0.0 || readd_at < o.remove_at)
    throw ValidationError("need 0 <= --remove-at <= --readd-at");
  const auto st = sim_setup(o, 10000, 0, readd_at + o.window, 0.25, 20);
  const auto condition = make_condition(o.k.value_or(1), o.beta.value_or(0.0),
                                        o.strategy.value_or(""));
  if (condition.k < 1) throw ValidationError("stabilize needs --k >= 1");
  const auto protocol = build_robust_detect(st.s);
  auto params = make_params(st, condition, protocol);
  const Count remove_t = to_interactions(o.remove_at, st.n, "--remove-at");
  const Count readd_t = to_interactions(readd_at, st.n, "--readd-at");
  params.d_changes = {{remove_t, 0}, {readd_t, condition.k}};
  const double min_success = o.min_success.value_or(0.9);

  const auto batch = run_batch(params, st.runs, true);
  const double nd = static_cast<double>(st.n);
  std::size_t successes = 0;
  json runs = json::array();
  for (const auto& traj : batch.trajectories) {
    std::optional<double> drop, rise;
    for (const auto& snap : traj.snapshots) {
      const double f = detect_fraction(snap, protocol);
      if (!drop && snap.t >= remove_t && snap.t < readd_t && f < o.low)
        drop = (snap.t - remove_t) / nd;
      if (!rise && snap.t >= readd_t && f > o.high) rise = (snap.t - readd_t) / nd;
    }
    const bool ok = drop && rise && *drop <= o.window && *rise <= o.window;
    if (ok) ++successes;
    runs.push_back({{"drop_time", drop ? json(*drop) : json()},
                    {"rise_time", rise ? json(*rise) : json()},
                    {"success", ok}});
  }
  const double fraction = static_cast<double>(successes) / static_cast<double>(st.runs);
  if (o.format == "json") {
    json doc{{"command", "stabilize"},
             {"params", to_json(info_for(st, condition, params))},
             {"remove_at", o.remove_at},
             {"readd_at", readd_at},
             {"window", o.window},
             {"low", o.low},
             {"high", o.high},
             {"runs", runs},
             {"successes", successes},
             {"mean_detect", batch.mean_detect},
             {"times", batch.times}};
    emit_json(o, doc, out);
  } else {
    std::ostringstream ss;
    write_batch_csv(ss, batch, protocol, st.n);
    ss << "# successes=" << successes << '/' << st.runs << '\n';
    emit_blocks(o, {{"stabilize", ss.str()}}, out);
  }
  return fraction >= min_success ? kSuccess : kExperimentFailure;
}

// ---------------------------------------------------------------- wiring

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--n", o.n, "Population size (molecule count)");
  cmd->add_option("--k", o.k, "Number of D molecules");
  cmd->add_option("--s", o.s, "Number of alert levels (default ceil(log2 n))");
  cmd->add_option("--beta", o.beta, "Leak parameter; each step leaks with probability beta/n");
  cmd->add_option("--strategy", o.strategy, "Leak strategy: none, fp, fn, custom:<file>");
  cmd->add_option("--seed", o.seed, std::string("Base seed (default $") + kSeedEnv + " or 1)");
  cmd->add_option("--runs", o.runs, "Independent runs");
  cmd->add_option("--time", o.time, "Horizon in parallel time (interactions / n)");
  cmd->add_option("--record-every", o.record_every, "Snapshot spacing in parallel time");
  cmd->add_option("--out", o.out, "Output path (default stdout)");
  cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Leak-robust detection protocol toolkit"};
  app.require_subcommand(1);
  Options o;
  std::string path;
  bool truncated = false;

  auto* gen = app.add_subcommand("generate", "Write the detection protocol as a .pp file");
  gen->add_option("--s", o.s, "Number of alert levels");
  gen->add_option("--n", o.n, "Population size used for the default s");
  gen->add_flag("--truncated", truncated, "Emit the collapsed level chain instead");
  gen->add_option("--out", o.out, "Output path (default stdout)");

  auto* validate = app.add_subcommand("validate", "Parse a .pp file and report its structure");
  validate->add_option("file", path, "Protocol file")->required();

  auto* steady = app.add_subcommand("steady", "Stationary per-level probabilities");
  add_common(steady, o);
  steady->add_option("--preset", o.preset, "figure1");

  auto* simulate = app.add_subcommand(
      "simulate",
      "Simulate trajectories. Sampling ties resolve to nondetect.");
  add_common(simulate, o);
  simulate->add_option("--preset", o.preset, "figure2a or figure2b");
  simulate->add_flag("--events", o.log_events, "Include the event log (single run, json)");

  auto* mix = app.add_subcommand("mix", "Estimate convergence time against the stationary profile");
  add_common(mix, o);
  mix->add_option("--epsilon", o.epsilon, "Cumulative-gap threshold");

  auto* clean = app.add_subcommand("clean", "Clearing experiment without D or leaks");
  add_common(clean, o);
  clean->add_option("--init", o.init, "Initial state: x1 (all X1) or n (all N)");
  clean->add_option("--theta", o.theta, "Exponent of n inside the clearing bound");
  clean->add_option("--min-success", o.min_success, "Required fraction of cleared runs");

  auto* stabilize = app.add_subcommand("stabilize", "Remove and re-add D mid-run");
  add_common(stabilize, o);
  stabilize->add_option("--remove-at", o.remove_at, "Parallel time at which D is removed");
  stabilize->add_option("--readd-at", o.readd_at, "Parallel time at which D is re-added");
  stabilize->add_option("--window", o.window, "Allowed response time (parallel time)");
  stabilize->add_option("--low", o.low, "Detect fraction to reach after removal");
  stabilize->add_option("--high", o.high, "Detect fraction to reach after re-adding");
  stabilize->add_option("--min-success", o.min_success, "Required fraction of successful runs");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kSuccess : kValidationError;
  }

  try {
    if (*gen) return cmd_generate(o, truncated, out);
    if (*validate) return cmd_validate(path, out, err);
    if (*steady) return cmd_steady(o, out);
    if (*simulate) return cmd_simulate(o, out);
    if (*mix) return cmd_mix(o, out, err);
    if (*clean) return cmd_clean(o, out);
    if (*stabilize) return cmd_stabilize(o, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }
  return kValidationError;
}

}  // namespace rdetect::cli
