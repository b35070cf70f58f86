// Copyright 2026 The dexsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dexsim/config/run_config.h"

#include <fstream>
#include <sstream>

#include "dexsim/common/errors.h"
#include "json.hpp"

namespace dexsim::config {

namespace {

// Insertion-ordered so overrides apply in file order.
using json = nlohmann::ordered_json;
using ordered_json = nlohmann::ordered_json;

std::string Join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

// Walks one JSON object, marking consumed keys; leftovers are unknown.
class Section {
 public:
  Section(const json& node, std::string path, RunConfig& cfg)
      : node_(node), path_(std::move(path)), cfg_(cfg) {
    if (!node_.is_object()) throw ConfigError(Where() + ": expected an object");
  }

  template <typename T>
  void Get(const std::string& key, T& out) {
    auto it = node_.find(key);
    if (it == node_.end()) return;
    used_.push_back(key);
    const std::string path = Join(path_, key);
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!it->is_boolean()) throw ConfigError("");
      } else if constexpr (std::is_integral_v<T>) {
        if (!it->is_number_integer()) throw ConfigError("");
        if constexpr (std::is_unsigned_v<T>) {
          if (it->is_number_integer() && !it->is_number_unsigned() &&
              it->get<std::int64_t>() < 0) {
            throw ConfigError("");
          }
        }
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!it->is_number()) throw ConfigError("");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!it->is_string()) throw ConfigError("");
      }
      out = it->get<T>();
    } catch (const std::exception&) {
      throw ConfigError(path + ": expected " + TypeName<T>() + ", got " +
                        std::string(it->type_name()));
    }
    cfg_.provenance[path] = "file";
  }

  bool Has(const std::string& key) const { return node_.contains(key); }

  Section Child(const std::string& key) {
    used_.push_back(key);
    return Section(node_.at(key), Join(path_, key), cfg_);
  }

  const json& Raw(const std::string& key) {
    used_.push_back(key);
    return node_.at(key);
  }

  void Finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (std::find(used_.begin(), used_.end(), it.key()) == used_.end()) {
        throw ConfigError("unknown key: " + Join(path_, it.key()));
      }
    }
  }

  std::string Where() const { return path_.empty() ? "<root>" : path_; }
  const std::string& path() const { return path_; }

 private:
  template <typename T>
  static std::string TypeName() {
    if constexpr (std::is_same_v<T, bool>) return "a boolean";
    else if constexpr (std::is_integral_v<T>) return "an integer";
    else if constexpr (std::is_floating_point_v<T>) return "a number";
    else return "a string";
  }

  const json& node_;
  std::string path_;
  RunConfig& cfg_;
  std::vector<std::string> used_;
};

void ParseDistribution(const json& j, const std::string& path,
                       rand::Distribution& d, std::string& target,
                       RunConfig& cfg) {
  Section s(j, path, cfg);
  std::string kind;
  s.Get("path", target);
  s.Get("kind", kind);
  s.Get("a", d.a);
  s.Get("b", d.b);
  s.Finish();
  if (target.empty()) throw ConfigError(path + ".path: required");
  try {
    d.kind = rand::DistributionKindFromString(kind);
  } catch (const std::exception&) {
    throw ConfigError(path + ".kind: unknown distribution '" + kind + "'");
  }
}

void ParseRandomization(Section s, rand::RandomizationSpec& r, RunConfig& cfg) {
  if (s.Has("physical")) {
    Section p = s.Child("physical");
    p.Get("enabled", r.physical.enabled);
    if (p.Has("params")) {
      const json& list = p.Raw("params");
      if (!list.is_array()) {
        throw ConfigError(p.path() + ".params: expected an array");
      }
      r.physical.params.clear();
      for (std::size_t i = 0; i < list.size(); ++i) {
        rand::Distribution d;
        std::string target;
        ParseDistribution(list[i], p.path() + ".params[" + std::to_string(i) + "]",
                          d, target, cfg);
        r.physical.params.emplace_back(target, d);
      }
    }
    p.Finish();
  }
  if (s.Has("observation_noise")) {
    Section o = s.Child("observation_noise");
    auto& l = r.observation_noise;
    o.Get("enabled", l.enabled);
    o.Get("fingertip_correlated", l.fingertip_correlated);
    o.Get("fingertip_uncorrelated", l.fingertip_uncorrelated);
    o.Get("object_position_correlated", l.object_position_correlated);
    o.Get("object_position_uncorrelated", l.object_position_uncorrelated);
    o.Get("orientation_correlated", l.orientation_correlated);
    o.Get("orientation_uncorrelated", l.orientation_uncorrelated);
    o.Get("fingertip_marker", l.fingertip_marker);
    o.Get("hand_base_marker", l.hand_base_marker);
    o.Finish();
  }
  if (s.Has("marker_dropout")) {
    Section o = s.Child("marker_dropout");
    o.Get("enabled", r.marker_dropout.enabled);
    o.Get("rate", r.marker_dropout.rate);
    o.Get("duration", r.marker_dropout.duration);
    o.Finish();
  }
  if (s.Has("marker_occlusion")) {
    Section o = s.Child("marker_occlusion");
    o.Get("enabled", r.marker_occlusion.enabled);
    o.Get("distance", r.marker_occlusion.distance);
    o.Finish();
  }
  if (s.Has("action_noise")) {
    Section o = s.Child("action_noise");
    o.Get("enabled", r.action_noise.enabled);
    o.Get("uncorrelated_additive", r.action_noise.uncorrelated_additive);
    o.Get("correlated_additive", r.action_noise.correlated_additive);
    o.Get("uncorrelated_multiplicative",
          r.action_noise.uncorrelated_multiplicative);
    o.Finish();
  }
  if (s.Has("action_delay")) {
    Section o = s.Child("action_delay");
    o.Get("enabled", r.action_delay.enabled);
    o.Get("probability", r.action_delay.probability);
    o.Finish();
  }
  if (s.Has("timing")) {
    Section o = s.Child("timing");
    o.Get("enabled", r.timing.enabled);
    o.Get("rate_min", r.timing.rate_min);
    o.Get("rate_max", r.timing.rate_max);
    o.Finish();
  }
  if (s.Has("backlash")) {
    Section o = s.Child("backlash");
    o.Get("enabled", r.backlash.enabled);
    o.Get("width_jitter", r.backlash.width_jitter);
    o.Finish();
  }
  if (s.Has("random_force")) {
    Section o = s.Child("random_force");
    auto& l = r.random_force;
    o.Get("enabled", l.enabled);
    o.Get("probability_min", l.probability_min);
    o.Get("probability_max", l.probability_max);
    o.Get("decay", l.decay);
    o.Get("decay_period", l.decay_period);
    o.Get("acceleration_std", l.acceleration_std);
    o.Finish();
  }
  s.Finish();
}

void ParseEnv(const json& node, RunConfig& cfg) {
  if (!node.is_object()) throw ConfigError("env: expected an object");
  for (auto it = node.begin(); it != node.end(); ++it) {
    const std::string path = "env." + it.key();
    if (!it->is_number()) throw ConfigError(path + ": expected a number");
    std::vector<env::ParamRef> refs;
    try {
      refs = env::ResolveParamPath(cfg.train.env, it.key());
    } catch (const ConfigError&) {
      throw ConfigError("unknown key: " + path);
    }
    for (auto& ref : refs) *ref.value = it->get<double>();
    cfg.provenance[path] = "file";
  }
}

void Parse(const json& root, RunConfig& cfg) {
  Section s(root, "", cfg);
  train::TrainConfig& t = cfg.train;
  s.Get("seed", t.seed);
  s.Get("workers", t.workers);
  s.Get("output_dir", cfg.output_dir);
  if (s.Has("env")) ParseEnv(s.Raw("env"), cfg);
  if (s.Has("randomization")) {
    ParseRandomization(s.Child("randomization"), t.randomization, cfg);
  }
  if (s.Has("disabled_layers")) {
    const json& list = s.Raw("disabled_layers");
    if (!list.is_array()) throw ConfigError("disabled_layers: expected an array");
    for (const json& name : list) {
      if (!name.is_string()) {
        throw ConfigError("disabled_layers: expected layer names");
      }
      try {
        t.randomization.LayerEnabled(name.get<std::string>()) = false;
      } catch (const ConfigError&) {
        throw ConfigError("disabled_layers: unknown layer '" +
                          name.get<std::string>() + "'");
      }
      cfg.provenance["randomization." + name.get<std::string>() + ".enabled"] =
          "file";
    }
  }
  if (s.Has("train")) {
    Section o = s.Child("train");
    o.Get("env_slots", t.env_slots);
    o.Get("transitions_per_batch", t.transitions_per_batch);
    o.Get("batches", t.batches);
    o.Get("chunk_length", t.chunk_length);
    o.Get("learning_rate", t.learning_rate);
    o.Get("refresh_hidden", t.refresh_hidden);
    o.Get("eval_every", t.eval_every);
    o.Get("eval_episodes", t.eval_episodes);
    o.Get("checkpoint_every", t.checkpoint_every);
    o.Finish();
  }
  if (s.Has("network")) {
    Section o = s.Child("network");
    o.Get("dense_size", t.dense_size);
    o.Get("lstm_size", t.lstm_size);
    o.Finish();
  }
  if (s.Has("gae")) {
    Section o = s.Child("gae");
    o.Get("gamma", t.gae.gamma);
    o.Get("lambda", t.gae.lambda);
    o.Finish();
  }
  if (s.Has("ppo")) {
    Section o = s.Child("ppo");
    o.Get("clip_epsilon", t.ppo.clip_epsilon);
    o.Get("entropy_coef", t.ppo.entropy_coef);
    o.Get("value_coef", t.ppo.value_coef);
    o.Get("chunks_per_minibatch", t.ppo.chunks_per_minibatch);
    o.Get("epochs", t.ppo.epochs);
    o.Finish();
  }
  if (s.Has("calibration")) {
    Section o = s.Child("calibration");
    CalibrationConfig& c = cfg.calibration;
    o.Get("trajectory_seed", c.trajectory_seed);
    o.Get("max_passes", c.max_passes);
    if (o.Has("parameters")) {
      const json& list = o.Raw("parameters");
      if (!list.is_array()) {
        throw ConfigError("calibration.parameters: expected an array");
      }
      c.parameters.clear();
      for (const json& p : list) {
        if (!p.is_string()) {
          throw ConfigError("calibration.parameters: expected strings");
        }
        c.parameters.push_back(p.get<std::string>());
      }
      cfg.provenance["calibration.parameters"] = "file";
    }
    if (o.Has("perturbation")) {
      const json& m = o.Raw("perturbation");
      if (!m.is_object()) {
        throw ConfigError("calibration.perturbation: expected an object");
      }
      c.perturbation.clear();
      for (auto it = m.begin(); it != m.end(); ++it) {
        if (!it->is_number()) {
          throw ConfigError("calibration.perturbation." + it.key() +
                            ": expected a number");
        }
        c.perturbation.emplace_back(it.key(), it->get<double>());
      }
      cfg.provenance["calibration.perturbation"] = "file";
    }
    o.Finish();
  }
  if (s.Has("randcheck")) {
    Section o = s.Child("randcheck");
    o.Get("samples", cfg.randcheck.samples);
    o.Finish();
  }
  if (s.Has("provenance")) {
    // Present in resolved snapshots, which materialize every value; the
    // recorded origins replace the ones inferred from key presence.
    const json& p = s.Raw("provenance");
    if (!p.is_object()) throw ConfigError("provenance: expected an object");
    cfg.provenance.clear();
    for (auto it = p.begin(); it != p.end(); ++it) {
      if (!it->is_string()) throw ConfigError("provenance: expected strings");
      cfg.provenance[it.key()] = it->get<std::string>();
    }
  }
  s.Finish();
}

void Validate(const RunConfig& cfg) {
  cfg.train.Validate();
  env::EnvParams scratch = cfg.train.env;
  for (const auto& [path, factor] : cfg.calibration.perturbation) {
    env::ResolveParamPath(scratch, path);
    if (!(factor > 0.0)) {
      throw ConfigError("calibration.perturbation." + path + ": must be > 0");
    }
  }
  for (const auto& path : cfg.calibration.parameters) {
    env::ResolveParamPath(scratch, path);
  }
  if (cfg.calibration.max_passes < 1) {
    throw ConfigError("calibration.max_passes: must be >= 1");
  }
  if (cfg.randcheck.samples < 1) {
    throw ConfigError("randcheck.samples: must be >= 1");
  }
}

ordered_json ToJson(const RunConfig& cfg, bool with_runtime) {
  const train::TrainConfig& t = cfg.train;
  ordered_json j;
  j["seed"] = t.seed;
  if (with_runtime) {
    j["workers"] = t.workers;
    j["output_dir"] = cfg.output_dir;
  }
  ordered_json e = ordered_json::object();
  for (const auto& ref : env::ListParams(t.env)) e[ref.name] = *ref.value;
  j["env"] = e;

  const rand::RandomizationSpec& r = t.randomization;
  ordered_json rj;
  ordered_json params = ordered_json::array();
  for (const auto& [path, d] : r.physical.params) {
    params.push_back(ordered_json{{"path", path},
                                  {"kind", rand::ToString(d.kind)},
                                  {"a", d.a},
                                  {"b", d.b}});
  }
  rj["physical"] = {{"enabled", r.physical.enabled}, {"params", params}};
  const auto& o = r.observation_noise;
  rj["observation_noise"] = {
      {"enabled", o.enabled},
      {"fingertip_correlated", o.fingertip_correlated},
      {"fingertip_uncorrelated", o.fingertip_uncorrelated},
      {"object_position_correlated", o.object_position_correlated},
      {"object_position_uncorrelated", o.object_position_uncorrelated},
      {"orientation_correlated", o.orientation_correlated},
      {"orientation_uncorrelated", o.orientation_uncorrelated},
      {"fingertip_marker", o.fingertip_marker},
      {"hand_base_marker", o.hand_base_marker}};
  rj["marker_dropout"] = {{"enabled", r.marker_dropout.enabled},
                          {"rate", r.marker_dropout.rate},
                          {"duration", r.marker_dropout.duration}};
  rj["marker_occlusion"] = {{"enabled", r.marker_occlusion.enabled},
                            {"distance", r.marker_occlusion.distance}};
  rj["action_noise"] = {
      {"enabled", r.action_noise.enabled},
      {"uncorrelated_additive", r.action_noise.uncorrelated_additive},
      {"correlated_additive", r.action_noise.correlated_additive},
      {"uncorrelated_multiplicative",
       r.action_noise.uncorrelated_multiplicative}};
  rj["action_delay"] = {{"enabled", r.action_delay.enabled},
                        {"probability", r.action_delay.probability}};
  rj["timing"] = {{"enabled", r.timing.enabled},
                  {"rate_min", r.timing.rate_min},
                  {"rate_max", r.timing.rate_max}};
  rj["backlash"] = {{"enabled", r.backlash.enabled},
                    {"width_jitter", r.backlash.width_jitter}};
  const auto& f = r.random_force;
  rj["random_force"] = {{"enabled", f.enabled},
                        {"probability_min", f.probability_min},
                        {"probability_max", f.probability_max},
                        {"decay", f.decay},
                        {"decay_period", f.decay_period},
                        {"acceleration_std", f.acceleration_std}};
  j["randomization"] = rj;

  j["train"] = {{"env_slots", t.env_slots},
                {"transitions_per_batch", t.transitions_per_batch},
                {"batches", t.batches},
                {"chunk_length", t.chunk_length},
                {"learning_rate", t.learning_rate},
                {"refresh_hidden", t.refresh_hidden},
                {"eval_every", t.eval_every},
                {"eval_episodes", t.eval_episodes},
                {"checkpoint_every", t.checkpoint_every}};
  j["network"] = {{"dense_size", t.dense_size}, {"lstm_size", t.lstm_size}};
  j["gae"] = {{"gamma", t.gae.gamma}, {"lambda", t.gae.lambda}};
  j["ppo"] = {{"clip_epsilon", t.ppo.clip_epsilon},
              {"entropy_coef", t.ppo.entropy_coef},
              {"value_coef", t.ppo.value_coef},
              {"chunks_per_minibatch", t.ppo.chunks_per_minibatch},
              {"epochs", t.ppo.epochs}};
  ordered_json pert = ordered_json::object();
  for (const auto& [path, factor] : cfg.calibration.perturbation) {
    pert[path] = factor;
  }
  j["calibration"] = {{"perturbation", pert},
                      {"parameters", cfg.calibration.parameters},
                      {"trajectory_seed", cfg.calibration.trajectory_seed},
                      {"max_passes", cfg.calibration.max_passes}};
  j["randcheck"] = {{"samples", cfg.randcheck.samples}};
  return j;
}

}  // namespace

RunConfig ParseRunConfig(const std::string& json_text,
                         const std::string& source) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(source + ": " + e.what());
  }
  RunConfig cfg;
  try {
    Parse(root, cfg);
    Validate(cfg);
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return cfg;
}

RunConfig LoadRunConfig(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file: " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  return ParseRunConfig(buf.str(), path);
}

void OverrideSeed(RunConfig& config, std::uint64_t seed) {
  config.train.seed = seed;
  config.provenance["seed"] = "cli";
}

void OverrideWorkers(RunConfig& config, int workers) {
  if (workers < 1) throw ConfigError("--workers must be >= 1");
  config.train.workers = workers;
  config.provenance["workers"] = "cli";
}

void OverrideOutputDir(RunConfig& config, const std::string& dir) {
  config.output_dir = dir;
  config.provenance["output_dir"] = "cli";
}

void DisableLayer(RunConfig& config, const std::string& layer) {
  config.train.randomization.LayerEnabled(layer) = false;
  config.provenance["randomization." + layer + ".enabled"] = "cli";
}

std::string ResolvedConfigJson(const RunConfig& config) {
  ordered_json j = ToJson(config, true);
  ordered_json p = ordered_json::object();
  for (const auto& [key, origin] : config.provenance) p[key] = origin;
  j["provenance"] = p;
  return j.dump(2) + "\n";
}

std::string ConfigFingerprint(const RunConfig& config) {
  return ToJson(config, false).dump();
}

}  // namespace dexsim::config
