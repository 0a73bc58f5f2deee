#include "rdetect/protocol.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

namespace rdetect {

std::string_view to_string(Output out) {
  return out == Output::detect ? "detect" : "nondetect";
}

bool is_valid_species_name(std::string_view name) {
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name.front())))
    return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

std::optional<SpeciesId> Protocol::find(std::string_view name) const {
  for (const auto& s : species_)
    if (s.name == name) return s.id;
  return std::nullopt;
}

SpeciesId Protocol::id_of(std::string_view name) const {
  if (auto id = find(name)) return *id;
  throw ProtocolError("unknown species '" + std::string(name) + "'");
}

void Protocol::insert(const Reaction& r) {
  auto put = [this](SpeciesPair key, SpeciesPair value) {
    auto& slot = table_[index(key[0], key[1])];
    if (slot && *slot != value) {
      throw ProtocolError("inconsistent rules for " + species_[key[0]].name +
                          " + " + species_[key[1]].name);
    }
    slot = value;
  };
  const auto [a, b] = r.reactants;
  const auto [c, d] = r.products;
  put({a, b}, {c, d});
  // (A,A) has no distinct swapped key.
  if (a != b) put({b, a}, {d, c});
}

bool Protocol::structurally_equal(const Protocol& other) const {
  if (species_.size() != other.species_.size() || table_ != other.table_)
    return false;
  for (std::size_t i = 0; i < species_.size(); ++i) {
    if (species_[i].name != other.species_[i].name ||
        species_[i].output != other.species_[i].output)
      return false;
  }
  return true;
}

std::vector<Reaction> Protocol::canonical_rules() const {
  std::vector<Reaction> out;
  const auto n = static_cast<SpeciesId>(species_.size());
  for (SpeciesId a = 0; a < n; ++a)
    for (SpeciesId b = a; b < n; ++b)
      if (const auto& prod = table_[index(a, b)]) out.push_back({{a, b}, *prod});
  return out;
}

std::size_t Protocol::ordered_rule_count() const {
  return static_cast<std::size_t>(
      std::count_if(table_.begin(), table_.end(),
                    [](const auto& e) { return e.has_value(); }));
}

Protocol make_protocol(std::vector<SpeciesDecl> species,
                       const std::vector<Reaction>& reactions) {
  Protocol p;
  std::unordered_map<std::string, SpeciesId> seen;
  for (auto& decl : species) {
    if (!is_valid_species_name(decl.name))
      throw ProtocolError("invalid species name '" + decl.name + "'");
    const auto id = static_cast<SpeciesId>(p.species_.size());
    if (!seen.emplace(decl.name, id).second)
      throw ProtocolError("duplicate species '" + decl.name + "'");
    p.species_.push_back({id, std::move(decl.name), decl.output, decl.level});
  }
  const auto count = p.species_.size();
  p.table_.assign(count * count, std::nullopt);
  for (const auto& r : reactions) {
    for (SpeciesId id : {r.reactants[0], r.reactants[1], r.products[0], r.products[1]})
      if (id >= count) throw ProtocolError("reaction references undeclared species");
    p.insert(r);
  }
  return p;
}

Protocol make_protocol(std::vector<SpeciesDecl> species,
                       const std::vector<ReactionDecl>& reactions) {
  std::unordered_map<std::string, SpeciesId> ids;
  for (std::size_t i = 0; i < species.size(); ++i)
    ids.emplace(species[i].name, static_cast<SpeciesId>(i));
  auto lookup = [&ids](const std::string& name) {
    auto it = ids.find(name);
    if (it == ids.end()) throw ProtocolError("undeclared species '" + name + "'");
    return it->second;
  };
  std::vector<Reaction> resolved;
  resolved.reserve(reactions.size());
  for (const auto& r : reactions) {
    resolved.push_back({{lookup(r.reactants[0]), lookup(r.reactants[1])},
                        {lookup(r.products[0]), lookup(r.products[1])}});
  }
  return make_protocol(std::move(species), resolved);
}

bool CatalyticPartition::is_catalytic(SpeciesId id) const {
  return std::find(catalytic.begin(), catalytic.end(), id) != catalytic.end();
}

CatalyticPartition classify_catalytic(const Protocol& p) {
  std::vector<bool> changes(p.species_count(), false);
  for (const auto& r : p.canonical_rules()) {
    for (const auto& s : p.species()) {
      const auto in = std::count(r.reactants.begin(), r.reactants.end(), s.id);
      const auto out = std::count(r.products.begin(), r.products.end(), s.id);
      if (in != out) changes[s.id] = true;
    }
  }
  CatalyticPartition part;
  for (const auto& s : p.species())
    (changes[s.id] ? part.non_catalytic : part.catalytic).push_back(s.id);
  return part;
}

}  // namespace rdetect
