#pragma once

#include <memory>
#include <string>

#include <json.hpp>

#include "core/env.hpp"
#include "core/envs/lineworld.hpp"
#include "core/envs/maze.hpp"
#include "core/envs/reacher.hpp"

namespace rg {

// Environments are compiled in; config holds per-environment overrides
// (unknown keys are rejected).
std::unique_ptr<Env> make_env(const std::string& name,
                              const nlohmann::json& config = nlohmann::json::object());

LineWorldConfig parse_lineworld_config(const nlohmann::json& j);
ReacherConfig parse_reacher_config(const nlohmann::json& j);
MazeConfig parse_maze_config(const nlohmann::json& j);

}  // namespace rg
