#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "core/env.hpp"
#include "core/types.hpp"

namespace rg {

// Fixed-capacity ring buffer of binary outcomes.
class RewardHistory {
 public:
  RewardHistory() = default;
  explicit RewardHistory(std::vector<uint8_t> values) : values_(std::move(values)) {}

  void push(bool success, int capacity);
  size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  double mean() const;
  const std::vector<uint8_t>& values() const { return values_; }

 private:
  std::vector<uint8_t> values_;  // oldest first
};

// One curriculum state. Non-seed entries record how they were produced:
// replaying `actions` from the archive entry `parent` reproduces `state` on a
// deterministic environment.
struct RegionEntry {
  StateVec state;
  GoalVec goal;  // cached state_to_goal(state)
  RewardHistory history;
  std::optional<size_t> parent;             // archive index of the rollout anchor
  std::vector<ActionVec> actions;           // Brownian chain from the parent state
  std::optional<size_t> archive_index;      // set once the entry is archived
};

// The current set and the monotonically growing archive. The seed entry is
// archive index 0 with history [1].
struct ReachabilityRegion {
  std::vector<RegionEntry> current;
  std::vector<RegionEntry> archive;

  // Set union with the archive: entries already archived are skipped, new
  // ones are appended and receive their archive index.
  void absorb_current();
};

ReachabilityRegion init_region(const StateVec& seed_state, const Env& env);

// Pushes a binary outcome into the entry's ring buffer.
void record_outcome(ReachabilityRegion& region, size_t entry_index, bool success,
                    int history_capacity);

// Replays an entry's provenance chain from its parent's state; set_state is
// reissued at horizon boundaries so the episode clock never obstructs replay.
StateVec replay_chain(Env& env, const StateVec& anchor,
                      const std::vector<ActionVec>& actions);

}  // namespace rg
