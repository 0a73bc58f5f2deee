#include "rdetect/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "rdetect/robust_detect.hpp"

namespace rdetect {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::reaction: return "reaction";
    case EventKind::null: return "null";
    case EventKind::leak: return "leak";
  }
  return "?";
}

std::vector<SpeciesId> leak_targets(const Protocol& p, const LeakModel& leak) {
  const auto part = classify_catalytic(p);
  std::vector<SpeciesId> target(p.species_count());
  for (const auto& s : p.species()) target[s.id] = s.id;

  auto send_all_to = [&](SpeciesId to) {
    for (auto id : part.non_catalytic) target[id] = to;
  };
  switch (leak.strategy) {
    case LeakStrategy::none:
      break;
    case LeakStrategy::worst_false_positive: {
      const auto roles = detection_roles(p);
      if (roles.levels() < 1) throw ProtocolError("protocol has no level 1 species");
      send_all_to(roles.by_level[1]);
      break;
    }
    case LeakStrategy::worst_false_negative:
      send_all_to(detection_roles(p).neutral());
      break;
    case LeakStrategy::custom:
      for (const auto& [from_name, to_name] : leak.custom) {
        const auto from = p.id_of(from_name);
        const auto to = p.id_of(to_name);
        if (part.is_catalytic(from) || part.is_catalytic(to))
          throw ProtocolError("leak " + from_name + " -> " + to_name +
                              " touches a catalytic species");
        target[from] = to;
      }
      break;
  }
  for (auto id : part.catalytic) target[id] = id;
  return target;
}

Stepper::Stepper(const Protocol& p, const LeakModel& leak, Count n)
    : species_(p.species_count()),
      table_(species_ * species_, SpeciesPair{kNull, kNull}),
      leak_target_(leak_targets(p, leak)),
      catalytic_(species_, false),
      leak_probability_(leak.probability(n)) {
  if (leak.beta < 0.0) throw ConfigurationError("leak parameter beta must be >= 0");
  if (leak_probability_ > 1.0) throw ConfigurationError("leak probability beta/n exceeds 1");
  for (SpeciesId a = 0; a < species_; ++a)
    for (SpeciesId b = 0; b < species_; ++b)
      if (auto prod = p.apply(a, b)) table_[a * species_ + b] = *prod;
  for (auto id : classify_catalytic(p).catalytic) catalytic_[id] = true;
}

SpeciesId Stepper::draw(const Configuration& config, std::uint64_t r,
                        std::optional<SpeciesId> removed) const {
  const auto counts = config.counts();
  auto left = static_cast<Count>(r);
  for (SpeciesId id = 0; id + 1 < species_; ++id) {
    const Count c = counts[id] - (removed == id ? 1 : 0);
    if (left < c) return id;
    left -= c;
  }
  return static_cast<SpeciesId>(species_ - 1);
}

EventKind Stepper::step(Configuration& config, Rng& rng, SpeciesPair* who) const {
  const Count n = config.n();
  if (leak_probability_ > 0.0 && rng.bernoulli(leak_probability_)) {
    const auto from = draw(config, rng.below(static_cast<std::uint64_t>(n)), std::nullopt);
    const auto to = catalytic_[from] ? from : leak_target_[from];
    if (who) *who = {from, to};
    if (to != from) config.transfer(from, to);
    return EventKind::leak;
  }
  if (n < 2) {
    if (who) *who = {kNull, kNull};
    return EventKind::null;
  }
  const auto a = draw(config, rng.below(static_cast<std::uint64_t>(n)), std::nullopt);
  const auto b = draw(config, rng.below(static_cast<std::uint64_t>(n - 1)), a);
  if (who) *who = {a, b};
  const auto& prod = table_[a * species_ + b];
  if (prod[0] == kNull) return EventKind::null;
  if (prod[0] != a) config.transfer(a, prod[0]);
  if (prod[1] != b) config.transfer(b, prod[1]);
  return EventKind::reaction;
}

std::pair<Configuration, EventKind> step(const Configuration& config, const Protocol& p,
                                         const LeakModel& leak, Rng& rng) {
  Configuration next = config;
  const auto kind = Stepper(p, leak, config.n()).step(next, rng);
  return {std::move(next), kind};
}

Configuration set_d_count(const Configuration& config, const Protocol& p, Count k_new) {
  const auto roles = detection_roles(p);
  if (k_new < 0 || k_new > config.n())
    throw ConfigurationError("D count must lie in [0, n]");
  std::vector<Count> counts(config.counts().begin(), config.counts().end());
  const SpeciesId d = roles.detector();
  if (k_new <= counts[d]) {
    counts[roles.neutral()] += counts[d] - k_new;
    counts[d] = k_new;
    return Configuration(std::move(counts));
  }
  Count need = k_new - counts[d];
  // N first, then X1, X2, ...
  std::vector<SpeciesId> order{roles.neutral()};
  for (int i = 1; i <= roles.levels(); ++i) order.push_back(roles.by_level[i]);
  for (auto id : order) {
    const Count take = std::min(need, counts[id]);
    counts[id] -= take;
    counts[d] += take;
    need -= take;
  }
  if (need > 0) throw ConfigurationError("not enough non-D molecules to convert");
  return Configuration(std::move(counts));
}

SampleResult sample_output(const Configuration& config, const Protocol& p, Count m,
                           Rng& rng) {
  if (m < 1) throw ConfigurationError("sample count must be >= 1");
  if (config.n() < 1) throw ConfigurationError("cannot sample an empty population");
  const Count detect = config.detect_count(p);
  SampleResult r;
  for (Count i = 0; i < m; ++i) {
    if (static_cast<Count>(rng.below(static_cast<std::uint64_t>(config.n()))) < detect)
      ++r.detect;
    else
      ++r.nondetect;
  }
  r.majority = r.detect > r.nondetect ? Output::detect : Output::nondetect;
  return r;
}

void SimParams::validate() const {
  if (init.species_count() != protocol.species_count())
    throw ConfigurationError("initial configuration does not match the protocol");
  if (t_max < 0) throw ConfigurationError("t_max must be >= 0");
  if (record_every < 1) throw ConfigurationError("record_every must be >= 1");
  if (leak.beta < 0.0) throw ConfigurationError("leak parameter beta must be >= 0");
  if (init.n() > 0 && leak.probability(init.n()) > 1.0)
    throw ConfigurationError("leak probability beta/n exceeds 1");
  for (const auto& c : d_changes)
    if (c.t < 0 || c.k < 0 || c.k > init.n())
      throw ConfigurationError("invalid D count change");
}

Simulation::Simulation(const Protocol& p, Configuration init, const LeakModel& leak,
                       std::uint64_t seed, std::uint64_t stream)
    : protocol_(p),
      config_(std::move(init)),
      leak_(leak),
      stepper_(protocol_, leak_, config_.n()),
      rng_(seed, stream) {}

EventKind Simulation::step(SpeciesPair* who) {
  ++t_;
  return stepper_.step(config_, rng_, who);
}

void Simulation::advance(Count steps) {
  for (Count i = 0; i < steps; ++i) stepper_.step(config_, rng_);
  t_ += steps;
}

void Simulation::set_d_count(Count k) { config_ = rdetect::set_d_count(config_, protocol_, k); }

Scheduler::Scheduler(Count n, double leak_probability, std::uint64_t seed,
                     std::uint64_t stream)
    : n_(n), leak_probability_(leak_probability), rng_(seed, stream) {
  if (n < 2) throw ConfigurationError("scheduler needs at least two molecules");
}

ScheduledStep Scheduler::next() {
  ScheduledStep s;
  const auto n = static_cast<std::uint64_t>(n_);
  if (leak_probability_ > 0.0 && rng_.bernoulli(leak_probability_)) {
    s.leak = true;
    s.first = static_cast<std::uint32_t>(rng_.below(n));
    return s;
  }
  s.first = static_cast<std::uint32_t>(rng_.below(n));
  auto second = rng_.below(n - 1);
  if (second >= s.first) ++second;
  s.second = static_cast<std::uint32_t>(second);
  return s;
}

AgentPopulation::AgentPopulation(const Protocol& p, std::vector<SpeciesId> states,
                                 const LeakModel& leak)
    : protocol_(&p),
      states_(std::move(states)),
      leak_target_(leak_targets(p, leak)),
      catalytic_(p.species_count(), false) {
  for (auto s : states_)
    if (s >= p.species_count()) throw ConfigurationError("unknown species in population");
  for (auto id : classify_catalytic(p).catalytic) catalytic_[id] = true;
}

namespace {
std::vector<SpeciesId> expand(const Configuration& config) {
  std::vector<SpeciesId> states;
  states.reserve(static_cast<std::size_t>(config.n()));
  for (SpeciesId id = 0; id < config.species_count(); ++id)
    states.insert(states.end(), static_cast<std::size_t>(config[id]), id);
  return states;
}
}  // namespace

AgentPopulation::AgentPopulation(const Protocol& p, const Configuration& config,
                                 const LeakModel& leak)
    : AgentPopulation(p, expand(config), leak) {}

EventKind AgentPopulation::apply(const ScheduledStep& s, SpeciesPair* who) {
  if (s.leak) {
    auto& st = states_[s.first];
    const auto to = catalytic_[st] ? st : leak_target_[st];
    if (who) *who = {st, to};
    st = to;
    return EventKind::leak;
  }
  auto& a = states_[s.first];
  auto& b = states_[s.second];
  if (who) *who = {a, b};
  const auto prod = protocol_->apply(a, b);
  if (!prod) return EventKind::null;
  a = (*prod)[0];
  b = (*prod)[1];
  return EventKind::reaction;
}

Configuration AgentPopulation::configuration() const {
  std::vector<Count> counts(protocol_->species_count(), 0);
  for (auto s : states_) ++counts[s];
  return Configuration(std::move(counts));
}

namespace {

template <class StepFn, class CountsFn, class SetDFn>
Trajectory drive(const SimParams& params, StepFn&& step_once, CountsFn&& counts,
                 SetDFn&& set_d) {
  Trajectory traj;
  auto changes = params.d_changes;
  std::stable_sort(changes.begin(), changes.end(),
                   [](const auto& a, const auto& b) { return a.t < b.t; });
  std::size_t next_change = 0;
  auto apply_changes = [&](Count t) {
    while (next_change < changes.size() && changes[next_change].t <= t)
      set_d(changes[next_change++].k);
  };

  apply_changes(0);
  traj.snapshots.push_back({0, counts()});
  for (Count t = 1; t <= params.t_max; ++t) {
    SpeciesPair who{};
    const auto kind = step_once(params.log_events ? &who : nullptr);
    if (params.log_events) traj.events.push_back({t, kind, who});
    apply_changes(t);
    if (t % params.record_every == 0) traj.snapshots.push_back({t, counts()});
  }
  return traj;
}

}  // namespace

Trajectory run(const SimParams& params, std::uint64_t stream) {
  params.validate();
  if (params.mode == ExecutionMode::counts) {
    Simulation sim(params.protocol, params.init, params.leak, params.seed, stream);
    return drive(
        params, [&](SpeciesPair* who) { return sim.step(who); },
        [&] {
          const auto c = sim.configuration().counts();
          return std::vector<Count>(c.begin(), c.end());
        },
        [&](Count k) { sim.set_d_count(k); });
  }

  AgentPopulation pop(params.protocol, params.init, params.leak);
  Scheduler sched(params.init.n(), params.leak.probability(params.init.n()), params.seed,
                  stream);
  return drive(
      params, [&](SpeciesPair* who) { return pop.apply(sched.next(), who); },
      [&] {
        const auto config = pop.configuration();
        return std::vector<Count>(config.counts().begin(), config.counts().end());
      },
      [&](Count k) {
        pop = AgentPopulation(params.protocol,
                              set_d_count(pop.configuration(), params.protocol, k),
                              params.leak);
      });
}

double detect_fraction(const Snapshot& snap, const Protocol& p) {
  return Configuration(snap.counts).detect_fraction(p);
}

BatchResult run_batch(const SimParams& params, std::size_t runs, bool keep_trajectories) {
  if (runs < 1) throw ConfigurationError("batch needs at least one run");
  params.validate();

  std::vector<Trajectory> trajs(runs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (auto i = next++; i < runs; i = next++) trajs[i] = run(params, i);
  };
  const auto hw = std::max(1u, std::thread::hardware_concurrency());
  const auto workers = std::min<std::size_t>(hw, runs);
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  BatchResult out;
  out.runs = runs;
  const auto snaps = trajs.front().snapshots.size();
  const auto species = params.protocol.species_count();
  const double n = static_cast<double>(params.init.n());
  const double denom = runs > 1 ? static_cast<double>(runs - 1) : 1.0;
  out.mean_fraction.assign(snaps, std::vector<double>(species, 0.0));
  out.var_fraction.assign(snaps, std::vector<double>(species, 0.0));
  out.mean_detect.assign(snaps, 0.0);
  out.var_detect.assign(snaps, 0.0);
  for (std::size_t j = 0; j < snaps; ++j) {
    out.times.push_back(trajs.front().snapshots[j].t);
    for (const auto& tr : trajs) {
      const auto& c = tr.snapshots[j].counts;
      for (std::size_t s = 0; s < species; ++s) out.mean_fraction[j][s] += c[s] / n;
      out.mean_detect[j] += detect_fraction(tr.snapshots[j], params.protocol);
    }
    for (auto& m : out.mean_fraction[j]) m /= static_cast<double>(runs);
    out.mean_detect[j] /= static_cast<double>(runs);
    if (runs < 2) continue;
    for (const auto& tr : trajs) {
      const auto& c = tr.snapshots[j].counts;
      for (std::size_t s = 0; s < species; ++s) {
        const double d = c[s] / n - out.mean_fraction[j][s];
        out.var_fraction[j][s] += d * d / denom;
      }
      const double d = detect_fraction(tr.snapshots[j], params.protocol) - out.mean_detect[j];
      out.var_detect[j] += d * d / denom;
    }
  }
  if (keep_trajectories) out.trajectories = std::move(trajs);
  return out;
}

}  // namespace rdetect
