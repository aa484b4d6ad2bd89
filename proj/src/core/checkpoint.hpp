#pragma once

#include <map>
#include <string>

#include "core/policy.hpp"

namespace rg {

// On-disk checkpoint: JSON object with version, architecture, policy params,
// log stds, value params, rng states and the training iteration.
struct Checkpoint {
  PolicyParams policy;
  ValueParams value;
  std::map<std::string, std::string> rng_state;
  int iteration = 0;
};

void save_checkpoint(const std::string& path, const Checkpoint& ck);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace rg
