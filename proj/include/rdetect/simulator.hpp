#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rdetect/configuration.hpp"
#include "rdetect/protocol.hpp"
#include "rdetect/rng.hpp"

namespace rdetect {

enum class LeakStrategy { none, worst_false_positive, worst_false_negative, custom };

/// Each step is a leak with probability beta/n. A leak picks one molecule
/// uniformly and rewrites its species per the strategy; catalytic molecules
/// are left untouched.
struct LeakModel {
  double beta = 0.0;
  LeakStrategy strategy = LeakStrategy::none;
  // (from, to) species names; only consulted for LeakStrategy::custom.
  std::vector<std::pair<std::string, std::string>> custom;

  double probability(Count n) const {
    return strategy == LeakStrategy::none || n <= 0 ? 0.0 : beta / static_cast<double>(n);
  }
};

/// Per-species leak target for `p`. worst_false_positive sends every
/// non-catalytic species to level 1, worst_false_negative to the neutral
/// species. Catalytic species map to themselves. Throws ProtocolError on a
/// custom map that touches a catalytic species or names an unknown one.
std::vector<SpeciesId> leak_targets(const Protocol& p, const LeakModel& leak);

enum class EventKind { reaction, null, leak };

std::string_view to_string(EventKind kind);

struct Event {
  Count t = 0;
  EventKind kind = EventKind::null;
  // Reactants for a pair step; (from, to) for a leak.
  SpeciesPair participants{};
};

/// Precomputed step kernel over species counts.
class Stepper {
 public:
  Stepper(const Protocol& p, const LeakModel& leak, Count n);

  /// One interaction: with probability beta/n a leak, otherwise a uniformly
  /// drawn ordered pair of distinct molecules reacts. `who` receives the
  /// participants when non-null.
  EventKind step(Configuration& config, Rng& rng, SpeciesPair* who = nullptr) const;

  double leak_probability() const { return leak_probability_; }

 private:
  SpeciesId draw(const Configuration& config, std::uint64_t r,
                 std::optional<SpeciesId> removed) const;

  std::size_t species_ = 0;
  // Flat ordered-pair table; a first product equal to kNull marks a null entry.
  std::vector<SpeciesPair> table_;
  std::vector<SpeciesId> leak_target_;
  std::vector<bool> catalytic_;
  double leak_probability_ = 0.0;

  static constexpr SpeciesId kNull = ~SpeciesId{0};
};

/// Single-step convenience wrapper over Stepper.
std::pair<Configuration, EventKind> step(const Configuration& config, const Protocol& p,
                                         const LeakModel& leak, Rng& rng);

/// Sets the number of D molecules to k_new. Removed D become N; added D
/// consume N first, then X1, X2, ... in level order. Throws
/// ConfigurationError when k_new is outside [0, n].
Configuration set_d_count(const Configuration& config, const Protocol& p, Count k_new);

struct SampleResult {
  Output majority = Output::nondetect;
  Count detect = 0;
  Count nondetect = 0;
};

/// m uniform samples with replacement; ties go to nondetect.
SampleResult sample_output(const Configuration& config, const Protocol& p, Count m,
                           Rng& rng);

enum class ExecutionMode { counts, agents };

struct DetectorChange {
  Count t = 0;  // interaction count at which the change applies
  Count k = 0;
};

struct SimParams {
  Protocol protocol;
  Configuration init;
  LeakModel leak;
  std::uint64_t seed = 1;
  Count t_max = 0;
  Count record_every = 1;
  bool log_events = false;
  ExecutionMode mode = ExecutionMode::counts;
  std::vector<DetectorChange> d_changes;

  void validate() const;
};

struct Snapshot {
  Count t = 0;
  std::vector<Count> counts;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  std::vector<Event> events;
};

/// Count-based execution with mid-run control over the D count.
class Simulation {
 public:
  Simulation(const Protocol& p, Configuration init, const LeakModel& leak,
             std::uint64_t seed, std::uint64_t stream = 0);

  EventKind step(SpeciesPair* who = nullptr);
  void advance(Count steps);

  Count time() const { return t_; }
  const Configuration& configuration() const { return config_; }
  const Protocol& protocol() const { return protocol_; }
  Rng& rng() { return rng_; }

  void set_d_count(Count k);

 private:
  Protocol protocol_;
  Configuration config_;
  LeakModel leak_;
  Stepper stepper_;
  Rng rng_;
  Count t_ = 0;
};

/// One step of the individual-molecule scheduler: either a leak hitting
/// molecule `first`, or an ordered pair (first, second) of distinct molecules.
struct ScheduledStep {
  bool leak = false;
  std::uint32_t first = 0;
  std::uint32_t second = 0;
};

/// Draws the shared schedule; the same schedule can drive several coupled
/// populations.
class Scheduler {
 public:
  Scheduler(Count n, double leak_probability, std::uint64_t seed, std::uint64_t stream = 0);
  ScheduledStep next();

 private:
  Count n_;
  double leak_probability_;
  Rng rng_;
};

/// Individual-molecule population, indexed by molecule.
class AgentPopulation {
 public:
  AgentPopulation(const Protocol& p, std::vector<SpeciesId> states,
                  const LeakModel& leak = {});
  AgentPopulation(const Protocol& p, const Configuration& config,
                  const LeakModel& leak = {});

  EventKind apply(const ScheduledStep& s, SpeciesPair* who = nullptr);

  std::span<const SpeciesId> states() const { return states_; }
  SpeciesId state(std::size_t i) const { return states_[i]; }
  Configuration configuration() const;

 private:
  const Protocol* protocol_;
  std::vector<SpeciesId> states_;
  std::vector<SpeciesId> leak_target_;
  std::vector<bool> catalytic_;
};

/// Deterministic given params; `stream` selects an independent random stream
/// for the same seed. Snapshots at every multiple of record_every up to t_max.
Trajectory run(const SimParams& params, std::uint64_t stream = 0);

struct BatchResult {
  std::vector<Count> times;
  // [snapshot][species]
  std::vector<std::vector<double>> mean_fraction;
  std::vector<std::vector<double>> var_fraction;
  std::vector<double> mean_detect;
  std::vector<double> var_detect;
  std::size_t runs = 0;
  // Filled only when requested.
  std::vector<Trajectory> trajectories;
};

/// Runs `runs` independent trajectories (stream = run index) on a worker
/// pool and aggregates per-snapshot mean and sample variance.
BatchResult run_batch(const SimParams& params, std::size_t runs,
                      bool keep_trajectories = false);

double detect_fraction(const Snapshot& snap, const Protocol& p);

}  // namespace rdetect
