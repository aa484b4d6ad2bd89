#include "core/checkpoint.hpp"

#include <json.hpp>

#include "core/error.hpp"
#include "core/io.hpp"

namespace rg {

using nlohmann::json;

namespace {

json vec_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd vec_from_json(const json& a) {
  Eigen::VectorXd v(a.size());
  for (size_t i = 0; i < a.size(); ++i) v[static_cast<int>(i)] = a[i].get<double>();
  return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& ck) {
  json j;
  j["version"] = 1;
  j["architecture"] = {{"input", ck.policy.arch.input},
                       {"output", ck.policy.arch.output},
                       {"hidden", ck.policy.arch.hidden},
                       {"activation", ck.policy.arch.activation}};
  j["params"] = vec_to_json(ck.policy.theta);
  j["log_stds"] = vec_to_json(ck.policy.log_std);
  j["value_params"] = vec_to_json(ck.value.theta);
  j["rng_state"] = ck.rng_state;
  j["iteration"] = ck.iteration;
  write_file(path, j.dump() + "\n");
}

Checkpoint load_checkpoint(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw IoError("checkpoint " + path + " is not valid JSON: " + e.what());
  }
  try {
    if (j.at("version").get<int>() != 1) {
      throw IoError("unsupported checkpoint version in " + path);
    }
    Checkpoint ck;
    const json& arch = j.at("architecture");
    ck.policy.arch.input = arch.at("input").get<int>();
    ck.policy.arch.output = arch.at("output").get<int>();
    ck.policy.arch.hidden = arch.at("hidden").get<std::vector<int>>();
    ck.policy.arch.activation = arch.at("activation").get<std::string>();
    ck.policy.theta = vec_from_json(j.at("params"));
    ck.policy.log_std = vec_from_json(j.at("log_stds"));
    ck.value.arch = ck.policy.arch;
    ck.value.arch.output = 1;
    ck.value.theta = vec_from_json(j.at("value_params"));
    if (j.contains("rng_state")) {
      ck.rng_state = j.at("rng_state").get<std::map<std::string, std::string>>();
    }
    ck.iteration = j.at("iteration").get<int>();
    if (ck.policy.theta.size() != ck.policy.arch.param_count()) {
      throw IoError("checkpoint " + path + ": parameter count does not match architecture");
    }
    if (ck.value.theta.size() != ck.value.arch.param_count()) {
      throw IoError("checkpoint " + path + ": value parameter count does not match architecture");
    }
    return ck;
  } catch (const json::exception& e) {
    throw IoError("checkpoint " + path + " is malformed: " + e.what());
  }
}

}  // namespace rg
