#include "rdetect/robust_detect.hpp"

#include <algorithm>
#include <bit>
#include <string>

namespace rdetect {
namespace {

std::string level_name(int i) { return "X" + std::to_string(i); }

std::vector<SpeciesDecl> level_species(int top, const std::string& neutral_name) {
  std::vector<SpeciesDecl> species;
  species.push_back({"D", Output::detect, 0});
  for (int i = 1; i <= top; ++i) species.push_back({level_name(i), Output::detect, i});
  species.push_back({neutral_name, Output::nondetect, top + 1});
  return species;
}

}  // namespace

void DetectParams::validate() const {
  if (n < 0) throw ConfigurationError("population size must be non-negative");
  if (k < 0 || k > n) throw ConfigurationError("detector count k must lie in [0, n]");
  if (s < 1) throw ConfigurationError("level count s must be at least 1");
}

int default_levels(Count n) {
  if (n < 2) return 1;
  return static_cast<int>(std::bit_width(static_cast<std::uint64_t>(n - 1)));
}

Protocol build_robust_detect(int s) {
  if (s < 1) throw ProtocolError("robust-detect needs s >= 1");
  const auto D = SpeciesId{0};
  const auto N = static_cast<SpeciesId>(s + 1);
  auto X = [](int i) { return static_cast<SpeciesId>(i); };

  std::vector<Reaction> rules;
  for (int i = 2; i <= s; ++i) rules.push_back({{D, X(i)}, {D, X(1)}});
  rules.push_back({{D, N}, {D, X(1)}});
  rules.push_back({{X(s), X(s)}, {N, N}});
  rules.push_back({{X(s), N}, {N, N}});
  for (int i = 1; i <= s - 1; ++i) {
    for (int j = 1; j <= s - 1; ++j) {
      const auto m = X(std::min(i, j) + 1);
      rules.push_back({{X(i), X(j)}, {m, m}});
    }
  }
  for (int i = 1; i <= s - 1; ++i) rules.push_back({{X(i), N}, {X(i + 1), X(i + 1)}});
  return make_protocol(level_species(s, "N"), rules);
}

Protocol build_truncated_ideal(int cap) {
  if (cap < 1) throw ProtocolError("truncation cap must be >= 1");
  const int collapsed = cap + 1;
  // Level of each product when levels a and b meet.
  auto next = [collapsed](int a, int b) {
    return std::pair{a == 0 ? 0 : std::min(std::min(a, b) + 1, collapsed),
                     b == 0 ? 0 : std::min(std::min(a, b) + 1, collapsed)};
  };
  std::vector<Reaction> rules;
  for (int a = 0; a <= collapsed; ++a) {
    for (int b = a; b <= collapsed; ++b) {
      const auto [c, d] = next(a, b);
      if (c == a && d == b) continue;
      rules.push_back({{static_cast<SpeciesId>(a), static_cast<SpeciesId>(b)},
                       {static_cast<SpeciesId>(c), static_cast<SpeciesId>(d)}});
    }
  }
  return make_protocol(level_species(cap, "Xinf"), rules);
}

DetectionRoles detection_roles(const Protocol& p) {
  const auto count = p.species_count();
  if (count < 3) throw ProtocolError("not a detection protocol: too few species");
  DetectionRoles roles;
  roles.by_level.assign(count, count);
  for (const auto& s : p.species()) {
    if (!s.level || *s.level < 0 || static_cast<std::size_t>(*s.level) >= count ||
        roles.by_level[*s.level] != count)
      throw ProtocolError("not a detection protocol: level map incomplete");
    roles.by_level[*s.level] = s.id;
  }
  return roles;
}

Configuration initial_configuration(const Protocol& p, const DetectParams& params) {
  params.validate();
  const auto roles = detection_roles(p);
  std::vector<Count> counts(p.species_count(), 0);
  counts[roles.detector()] = params.k;
  counts[roles.neutral()] = params.n - params.k;
  return Configuration(std::move(counts));
}

Configuration initial_configuration(
    const Protocol& p, const DetectParams& params,
    const std::vector<std::pair<std::string, Count>>& custom) {
  params.validate();
  const auto roles = detection_roles(p);
  std::vector<Count> counts(p.species_count(), 0);
  std::vector<bool> listed(p.species_count(), false);
  counts[roles.detector()] = params.k;
  for (const auto& [name, count] : custom) {
    const auto id = p.id_of(name);
    if (count < 0) throw ConfigurationError("negative count for '" + name + "'");
    if (listed[id]) throw ConfigurationError("species '" + name + "' listed twice");
    listed[id] = true;
    if (id == roles.detector()) {
      if (count != params.k)
        throw ConfigurationError("listed D count disagrees with k");
      continue;
    }
    counts[id] = count;
  }
  Configuration config(std::move(counts));
  if (config.n() != params.n)
    throw ConfigurationError("custom counts sum to " + std::to_string(config.n()) +
                             ", expected n = " + std::to_string(params.n));
  return config;
}

}  // namespace rdetect
