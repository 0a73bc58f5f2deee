#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "rdetect/analysis.hpp"
#include "rdetect/convergence.hpp"
#include "rdetect/simulator.hpp"

namespace rdetect {

/// Parameter echo written next to exported data.
struct RunInfo {
  Count n = 0;
  Count k = 0;
  int s = 0;
  double beta = 0.0;
  std::string strategy = "none";
  std::uint64_t seed = 0;
  std::size_t runs = 1;
  Count t_max = 0;
  Count record_every = 1;
};

nlohmann::json to_json(const RunInfo& info);

// Header: t,parallel_time,<species names>,detect_fraction
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const Protocol& p);
nlohmann::json trajectory_json(const Trajectory& traj, const Protocol& p, const RunInfo& info);

// Same columns as a trajectory; species columns hold mean counts.
void write_batch_csv(std::ostream& os, const BatchResult& batch, const Protocol& p, Count n);
nlohmann::json batch_json(const BatchResult& batch, const Protocol& p, const RunInfo& info);

// Header: i,p_leq,p
void write_profile_csv(std::ostream& os, const StationaryProfile& profile);
nlohmann::json profile_json(const StationaryProfile& profile);

nlohmann::json decay_json(const DecayReport& report);
nlohmann::json convergence_json(const ConvergenceEstimate& est);

/// Shortest round-trip decimal form used for every floating value in CSV.
std::string format_number(double v);

}  // namespace rdetect
