#include "core/region.hpp"

#include <stdexcept>

#include "core/error.hpp"

namespace rg {

void RewardHistory::push(bool success, int capacity) {
  if (capacity < 1) throw std::invalid_argument("history capacity must be >= 1");
  values_.push_back(success ? 1 : 0);
  while (values_.size() > static_cast<size_t>(capacity)) {
    values_.erase(values_.begin());
  }
}

double RewardHistory::mean() const {
  if (values_.empty()) return 0.0;
  double s = 0.0;
  for (uint8_t v : values_) s += v;
  return s / static_cast<double>(values_.size());
}

void ReachabilityRegion::absorb_current() {
  for (auto& entry : current) {
    if (entry.archive_index.has_value()) continue;
    entry.archive_index = archive.size();
    archive.push_back(entry);
  }
}

ReachabilityRegion init_region(const StateVec& seed_state, const Env& env) {
  env.validate_state(seed_state);
  RegionEntry seed;
  seed.state = seed_state;
  seed.goal = env.state_to_goal(seed_state);
  seed.history = RewardHistory({1});
  seed.archive_index = 0;
  ReachabilityRegion region;
  region.current.push_back(seed);
  region.archive.push_back(seed);
  return region;
}

void record_outcome(ReachabilityRegion& region, size_t entry_index, bool success,
                    int history_capacity) {
  if (entry_index >= region.current.size()) {
    throw std::out_of_range("record_outcome: entry index " +
                            std::to_string(entry_index) + " out of range (" +
                            std::to_string(region.current.size()) + " entries)");
  }
  region.current[entry_index].history.push(success, history_capacity);
}

StateVec replay_chain(Env& env, const StateVec& anchor,
                      const std::vector<ActionVec>& actions) {
  env.clear_goal();
  env.set_state(anchor);
  int steps_in_episode = 0;
  for (const auto& a : actions) {
    if (steps_in_episode >= env.spec().horizon) {
      env.set_state(env.observe());  // identical state, fresh episode clock
      steps_in_episode = 0;
    }
    env.step(a);
    ++steps_in_episode;
  }
  return env.observe();
}

}  // namespace rg
