#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rdetect {

using SpeciesId = std::uint32_t;

/// Ordered pair of species; position 0 is the first reactant/product.
using SpeciesPair = std::array<SpeciesId, 2>;

enum class Output { detect, nondetect };

std::string_view to_string(Output out);

struct Species {
  SpeciesId id = 0;
  std::string name;
  Output output = Output::nondetect;
  // Alert level for detection protocols: 0 for D, i for X_i, s+1 for N.
  std::optional<int> level;

  bool operator==(const Species&) const = default;
};

struct Reaction {
  SpeciesPair reactants{};
  SpeciesPair products{};

  bool operator==(const Reaction&) const = default;
};

struct SpeciesDecl {
  std::string name;
  Output output = Output::nondetect;
  std::optional<int> level;
};

struct ReactionDecl {
  std::array<std::string, 2> reactants;
  std::array<std::string, 2> products;
};

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A population protocol: species with an output map and a transition table
/// keyed on ordered species pairs. Absent entries are null interactions.
class Protocol {
 public:
  Protocol() = default;

  std::size_t species_count() const { return species_.size(); }
  std::span<const Species> species() const { return species_; }
  const Species& species(SpeciesId id) const { return species_.at(id); }
  std::optional<SpeciesId> find(std::string_view name) const;
  SpeciesId id_of(std::string_view name) const;

  /// Products for the ordered pair (a, b), or nullopt for a null interaction.
  std::optional<SpeciesPair> apply(SpeciesId a, SpeciesId b) const {
    return table_[index(a, b)];
  }

  /// Non-null rules with reactants[0] <= reactants[1], ordered
  /// lexicographically by reactant ids.
  std::vector<Reaction> canonical_rules() const;

  /// Number of non-null ordered-pair entries in the table.
  std::size_t ordered_rule_count() const;

  bool operator==(const Protocol&) const = default;

  /// Equality on names, outputs and the transition table; ignores levels,
  /// which the text format does not carry.
  bool structurally_equal(const Protocol& other) const;

 private:
  friend Protocol make_protocol(std::vector<SpeciesDecl>,
                                const std::vector<ReactionDecl>&);
  friend Protocol make_protocol(std::vector<SpeciesDecl>,
                                const std::vector<Reaction>&);

  std::size_t index(SpeciesId a, SpeciesId b) const {
    return static_cast<std::size_t>(a) * species_.size() + b;
  }
  void insert(const Reaction& r);

  std::vector<Species> species_;
  std::vector<std::optional<SpeciesPair>> table_;
};

/// Builds a validated protocol. Each reaction A + B -> C + D is entered for
/// both (A,B) -> (C,D) and (B,A) -> (D,C). Throws ProtocolError on duplicate
/// or invalid names, undeclared participants, or conflicting entries.
Protocol make_protocol(std::vector<SpeciesDecl> species,
                       const std::vector<ReactionDecl>& reactions);

/// Same as above with reactions given by species index into `species`.
Protocol make_protocol(std::vector<SpeciesDecl> species,
                       const std::vector<Reaction>& reactions);

struct CatalyticPartition {
  std::vector<SpeciesId> catalytic;
  std::vector<SpeciesId> non_catalytic;

  bool is_catalytic(SpeciesId id) const;
};

/// A species is catalytic iff its count is the same in the reactants and the
/// products of every rule.
CatalyticPartition classify_catalytic(const Protocol& p);

bool is_valid_species_name(std::string_view name);

}  // namespace rdetect
