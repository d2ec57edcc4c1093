#pragma once

// Preference matrices used by the experiment families. Identifiers:
//   arxiv6, cyclic4       stochastic Borda benchmarks (Condorcet = Borda winner)
//   borda_vn5             Borda winner differs from the von-Neumann winner
//   copeland5             Borda winner differs from the Copeland winner
//   copeland_vn5          von-Neumann winner uniform on the first three arms
//   vn16                  copeland_vn5 padded to 16 arms
//   arithmetic8           P(i, j) = 1/2 + (j - i)/20 with utilities 1 - i/10
//   sushi16               not embedded; must be read from a matrix file

#include <optional>
#include <string>
#include <vector>

#include "duelbench/core.h"

namespace duelbench {

struct Dataset {
  std::string id;
  PreferenceMatrix preferences;
  // Present only for datasets generated from a utility vector.
  std::optional<UtilityVector> utilities;
};

// Throws std::invalid_argument for unknown ids and for sushi16, which has no
// built-in copy.
Dataset BuiltinDataset(const std::string& id);

// Every id BuiltinDataset accepts.
std::vector<std::string> BuiltinDatasetIds();

}  // namespace duelbench
