#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rdetect/configuration.hpp"
#include "rdetect/protocol.hpp"

namespace rdetect {

struct DetectParams {
  Count n = 0;
  Count k = 0;
  int s = 1;

  void validate() const;
};

/// ceil(log2 n) for n >= 2, and 1 otherwise.
int default_levels(Count n);

/// Detection protocol with catalytic detector D, alert levels X1..Xs and a
/// neutral species N. Levels: D -> 0, Xi -> i, N -> s+1.
///
///   D  + Xi -> D  + X1            i in 2..s
///   D  + N  -> D  + X1
///   Xs + Xs -> N  + N
///   Xs + N  -> N  + N
///   Xi + Xj -> Xm + Xm            m = min(i,j)+1, i,j in 1..s-1
///   Xi + N  -> Xi+1 + Xi+1        i in 1..s-1
///
/// All other pairs are null, including D + X1, D + D, N + N and Xi + Xs for
/// i < s. The last family is where this table differs from
/// build_truncated_ideal(s), which sends Xi + Xs to Xi+1 + Xi+1.
Protocol build_robust_detect(int s);

/// The unbounded level chain (D + Xi -> D + X1, Xi + Xj -> Xm + Xm with
/// m = min(i,j)+1) with every level above `cap` collapsed into the
/// absorbing nondetect species "Xinf" (level cap+1). Identity rules are left
/// as null interactions. Level of every product is a monotone function of
/// the reactant levels, which is what the min-coupling property relies on.
Protocol build_truncated_ideal(int cap);

/// Species ids of a detection protocol indexed by level: [0] is D,
/// [1..s] are X1..Xs, [s+1] is the neutral/collapsed species.
struct DetectionRoles {
  std::vector<SpeciesId> by_level;

  SpeciesId detector() const { return by_level.front(); }
  SpeciesId neutral() const { return by_level.back(); }
  int levels() const { return static_cast<int>(by_level.size()) - 2; }
};

/// Throws ProtocolError if the protocol does not carry a complete level map.
DetectionRoles detection_roles(const Protocol& p);

/// k molecules of D, the remaining n-k in N.
Configuration initial_configuration(const Protocol& p, const DetectParams& params);

/// k molecules of D plus the listed (species name, count) entries, which must
/// bring the total to n. A listed D count must equal k.
Configuration initial_configuration(
    const Protocol& p, const DetectParams& params,
    const std::vector<std::pair<std::string, Count>>& custom);

}  // namespace rdetect
