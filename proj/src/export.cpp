#include "rdetect/export.hpp"

#include <charconv>

namespace rdetect {

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

nlohmann::json to_json(const RunInfo& info) {
  return {{"n", info.n},
          {"k", info.k},
          {"s", info.s},
          {"beta", info.beta},
          {"strategy", info.strategy},
          {"seed", info.seed},
          {"runs", info.runs},
          {"t_max", info.t_max},
          {"parallel_time", info.n > 0 ? static_cast<double>(info.t_max) / info.n : 0.0},
          {"record_every", info.record_every},
          {"rng", std::string(Rng::algorithm)}};
}

namespace {

void write_header(std::ostream& os, const Protocol& p) {
  os << "t,parallel_time";
  for (const auto& s : p.species()) os << ',' << s.name;
  os << ",detect_fraction\n";
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const Protocol& p) {
  write_header(os, p);
  for (const auto& snap : traj.snapshots) {
    const Configuration c(snap.counts);
    os << snap.t << ',' << format_number(c.n() ? double(snap.t) / double(c.n()) : 0.0);
    for (auto v : snap.counts) os << ',' << v;
    os << ',' << format_number(c.detect_fraction(p)) << '\n';
  }
}

nlohmann::json trajectory_json(const Trajectory& traj, const Protocol& p, const RunInfo& info) {
  nlohmann::json snaps = nlohmann::json::array();
  for (const auto& snap : traj.snapshots) {
    const Configuration c(snap.counts);
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& s : p.species()) counts[s.name] = snap.counts[s.id];
    snaps.push_back({{"t", snap.t},
                     {"parallel_time", c.n() ? double(snap.t) / double(c.n()) : 0.0},
                     {"counts", counts},
                     {"detect_fraction", c.detect_fraction(p)}});
  }
  nlohmann::json species = nlohmann::json::array();
  for (const auto& s : p.species()) species.push_back(s.name);
  nlohmann::json out{{"params", to_json(info)}, {"species", species}, {"snapshots", snaps}};
  if (!traj.events.empty()) {
    nlohmann::json ev = nlohmann::json::array();
    for (const auto& e : traj.events)
      ev.push_back({{"t", e.t},
                    {"kind", std::string(to_string(e.kind))},
                    {"participants", {e.participants[0], e.participants[1]}}});
    out["events"] = ev;
  }
  return out;
}

void write_batch_csv(std::ostream& os, const BatchResult& batch, const Protocol& p, Count n) {
  write_header(os, p);
  const double nd = static_cast<double>(n);
  for (std::size_t j = 0; j < batch.times.size(); ++j) {
    os << batch.times[j] << ',' << format_number(n ? double(batch.times[j]) / nd : 0.0);
    for (double f : batch.mean_fraction[j]) os << ',' << format_number(f * nd);
    os << ',' << format_number(batch.mean_detect[j]) << '\n';
  }
}

nlohmann::json batch_json(const BatchResult& batch, const Protocol& p, const RunInfo& info) {
  const double nd = static_cast<double>(info.n);
  nlohmann::json snaps = nlohmann::json::array();
  for (std::size_t j = 0; j < batch.times.size(); ++j) {
    nlohmann::json counts = nlohmann::json::object();
    nlohmann::json var = nlohmann::json::object();
    for (const auto& s : p.species()) {
      counts[s.name] = batch.mean_fraction[j][s.id] * nd;
      var[s.name] = batch.var_fraction[j][s.id];
    }
    snaps.push_back({{"t", batch.times[j]},
                     {"parallel_time", info.n ? double(batch.times[j]) / nd : 0.0},
                     {"counts", counts},
                     {"fraction_variance", var},
                     {"detect_fraction", batch.mean_detect[j]},
                     {"detect_fraction_variance", batch.var_detect[j]}});
  }
  nlohmann::json species = nlohmann::json::array();
  for (const auto& s : p.species()) species.push_back(s.name);
  return {{"params", to_json(info)}, {"species", species}, {"snapshots", snaps}};
}

void write_profile_csv(std::ostream& os, const StationaryProfile& profile) {
  os << "i,p_leq,p\n";
  for (std::size_t i = 0; i < profile.p_leq.size(); ++i)
    os << i << ',' << format_number(profile.p_leq[i]) << ',' << format_number(profile.p[i])
       << '\n';
}

nlohmann::json profile_json(const StationaryProfile& profile) {
  nlohmann::json out{{"mode", std::string(to_string(profile.mode))},
                     {"n", profile.n},
                     {"k", profile.k},
                     {"beta", profile.beta},
                     {"s", profile.s},
                     {"p_leq", profile.p_leq},
                     {"p", profile.p},
                     {"detect_probability", detect_probability(profile)}};
  if (profile.mode == ProfileMode::false_positive) {
    out["p_leq_closed_form"] = profile.p_leq_closed_form;
    out["closed_form_discrepancy"] = profile.closed_form_discrepancy;
  }
  if (profile.detect_lower_bound) out["detect_lower_bound"] = *profile.detect_lower_bound;
  return out;
}

nlohmann::json decay_json(const DecayReport& r) {
  nlohmann::json clearing = nlohmann::json::array();
  for (const auto& t : r.clearing_times) clearing.push_back(t ? nlohmann::json(*t) : nlohmann::json());
  return {{"t_star", r.t_star},
          {"clearing_times", clearing},
          {"cleared_by_t_star", r.cleared_by_t_star},
          {"cleared_fraction", r.cleared_fraction},
          {"times", r.times},
          {"mean_phi", r.mean_phi},
          {"mean_step_ratio", r.mean_step_ratio},
          {"step_ratio_stderr", r.step_ratio_stderr},
          {"ratio_samples", r.ratio_samples},
          {"contraction_bound", r.contraction_bound}};
}

nlohmann::json convergence_json(const ConvergenceEstimate& est) {
  return {{"parallel_time", est.parallel_time ? nlohmann::json(*est.parallel_time) : nlohmann::json()},
          {"fitted_constant",
           est.fitted_constant ? nlohmann::json(*est.fitted_constant) : nlohmann::json()},
          {"final_gap", est.final_gap},
          {"times", est.times},
          {"gaps", est.gaps}};
}

}  // namespace rdetect
