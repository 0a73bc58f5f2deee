#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "rdetect/protocol.hpp"

namespace rdetect {

using Count = std::int64_t;

class ConfigurationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Species counts of a population; the total n is conserved by every step.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(std::vector<Count> counts);

  Count n() const { return n_; }
  std::size_t species_count() const { return counts_.size(); }
  Count operator[](SpeciesId id) const { return counts_[id]; }
  std::span<const Count> counts() const { return counts_; }

  /// Moves one molecule from `from` to `to`. Caller guarantees a molecule of
  /// species `from` exists.
  void transfer(SpeciesId from, SpeciesId to) {
    --counts_[from];
    ++counts_[to];
  }

  /// Fraction of molecules whose species maps to detect.
  double detect_fraction(const Protocol& p) const;
  Count detect_count(const Protocol& p) const;

  bool operator==(const Configuration&) const = default;

 private:
  std::vector<Count> counts_;
  Count n_ = 0;
};

}  // namespace rdetect
