#include "rdetect/configuration.hpp"

#include <numeric>

namespace rdetect {

Configuration::Configuration(std::vector<Count> counts) : counts_(std::move(counts)) {
  for (auto c : counts_)
    if (c < 0) throw ConfigurationError("negative species count");
  n_ = std::accumulate(counts_.begin(), counts_.end(), Count{0});
}

Count Configuration::detect_count(const Protocol& p) const {
  Count detect = 0;
  for (const auto& s : p.species())
    if (s.output == Output::detect) detect += counts_[s.id];
  return detect;
}

double Configuration::detect_fraction(const Protocol& p) const {
  return n_ == 0 ? 0.0 : static_cast<double>(detect_count(p)) / static_cast<double>(n_);
}

}  // namespace rdetect
