#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "schednet/env.hpp"
#include "schednet/wsa.hpp"

namespace schednet {

struct ConfigError : std::runtime_error {
  std::string path;  // offending field, dotted
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), path(std::move(field)) {}
};

enum class EnvKind { pp, ccn };
enum class Algo { schednet, idqn };

inline const char* env_name(EnvKind e) { return e == EnvKind::pp ? "pp" : "ccn"; }
inline EnvKind env_from_name(const std::string& s) {
  if (s == "pp") return EnvKind::pp;
  if (s == "ccn") return EnvKind::ccn;
  throw ConfigError("env", "unknown environment '" + s + "' (want pp|ccn)");
}

inline const char* algo_name(Algo a) { return a == Algo::schednet ? "schednet" : "idqn"; }
inline Algo algo_from_name(const std::string& s) {
  if (s == "schednet") return Algo::schednet;
  if (s == "idqn") return Algo::idqn;
  throw ConfigError("algo", "unknown algorithm '" + s + "' (want schednet|idqn)");
}

struct Hyperparameters {
  long long training_steps = 750000;
  int episode_length = 1000;
  double gamma = 0.9;
  double lr_actor = 1e-5;
  double lr_critic = 1e-4;
  double tau = 0.05;
  double entropy_weight = 0.01;
  std::size_t buffer_capacity = 100000;
  int batch_size = 64;

  // weight-generator exploration noise: linear anneal from initial to final
  // over the first `anneal_fraction` of training
  double wg_noise_initial = 0.1;
  double wg_noise_final = 0.01;
  double wg_noise_anneal_fraction = 0.5;

  // IDQN epsilon-greedy schedule and learning rate
  double idqn_eps_initial = 1.0;
  double idqn_eps_final = 0.05;
  double idqn_eps_anneal_fraction = 0.2;
  double lr_idqn = 1e-4;

  // evaluation cadence
  long long eval_interval = 10000;
  int eval_episodes = 100;        // periodic checkpoints
  int final_eval_episodes = 1000; // end-of-training evaluation

  double wg_noise_sigma(long long step) const {
    const double horizon = wg_noise_anneal_fraction * static_cast<double>(training_steps);
    if (horizon <= 0.0) return wg_noise_final;
    const double frac = std::min(1.0, static_cast<double>(step) / horizon);
    return wg_noise_initial + frac * (wg_noise_final - wg_noise_initial);
  }

  double idqn_epsilon(long long step) const {
    const double horizon = idqn_eps_anneal_fraction * static_cast<double>(training_steps);
    if (horizon <= 0.0) return idqn_eps_final;
    const double frac = std::min(1.0, static_cast<double>(step) / horizon);
    return idqn_eps_initial + frac * (idqn_eps_final - idqn_eps_initial);
  }

  void validate() const {
    if (training_steps < 0) throw ConfigError("hyper.training_steps", "must be >= 0");
    if (episode_length < 1) throw ConfigError("hyper.episode_length", "must be >= 1");
    if (gamma < 0.0 || gamma > 1.0) throw ConfigError("hyper.gamma", "must be in [0,1]");
    if (tau < 0.0 || tau > 1.0) throw ConfigError("hyper.tau", "must be in [0,1]");
    if (buffer_capacity < 1) throw ConfigError("hyper.buffer_capacity", "must be >= 1");
    if (batch_size < 1) throw ConfigError("hyper.batch_size", "must be >= 1");
    if (eval_interval < 1) throw ConfigError("hyper.eval_interval", "must be >= 1");
    if (eval_episodes < 1) throw ConfigError("hyper.eval_episodes", "must be >= 1");
    if (final_eval_episodes < 1) throw ConfigError("hyper.final_eval_episodes", "must be >= 1");
  }
};

struct ExperimentConfig {
  EnvKind env = EnvKind::pp;
  Algo algo = Algo::schednet;
  wsa::Kind wsa_kind = wsa::Kind::top_k;
  int k = 1;
  int l = 2;
  std::vector<std::uint64_t> seeds{1};
  std::string out_dir = "runs/out";
  int workers = 0;        // 0 -> one per hardware thread, capped at #seeds
  int actor_hidden = 0;   // 0 -> environment default (pp: 32, ccn: 8)
  int critic_hidden = 0;  // 0 -> environment default (pp: 64, ccn: 16)
  Hyperparameters hyper;
  PpParams pp;
  CcnParams ccn;

  int num_agents() const {
    return env == EnvKind::pp ? pp.num_predators : CoopNavigation::kAgents;
  }
  int action_count() const {
    return env == EnvKind::pp ? PredatorPrey::kActions : CoopNavigation::kActions;
  }
  int resolved_actor_hidden() const {
    return actor_hidden > 0 ? actor_hidden : (env == EnvKind::pp ? 32 : 8);
  }
  int resolved_critic_hidden() const {
    return critic_hidden > 0 ? critic_hidden : (env == EnvKind::pp ? 64 : 16);
  }
  int effective_k() const { return wsa::effective_k(wsa_kind, k, num_agents()); }

  Environment make_env() const {
    if (env == EnvKind::pp) {
      PpParams p = pp;
      p.max_steps = hyper.episode_length;
      return Environment(p);
    }
    CcnParams p = ccn;
    p.max_steps = hyper.episode_length;
    return Environment(p);
  }

  void validate() const {
    hyper.validate();
    if (env == EnvKind::pp) {
      try {
        pp.validate();
      } catch (const std::invalid_argument& e) {
        throw ConfigError("pp", e.what());
      }
    } else {
      try {
        ccn.validate();
      } catch (const std::invalid_argument& e) {
        throw ConfigError("ccn", e.what());
      }
    }
    const int n = num_agents();
    if (k < 1 || k > n)
      throw ConfigError("k", "must satisfy 1 <= k <= n (got k=" + std::to_string(k) +
                                 ", n=" + std::to_string(n) + ")");
    if (l < 1) throw ConfigError("l", "must be >= 1");
    if (seeds.empty()) throw ConfigError("seeds", "need at least one seed");
    if (actor_hidden < 0) throw ConfigError("actor_hidden", "must be >= 0");
    if (critic_hidden < 0) throw ConfigError("critic_hidden", "must be >= 0");
    if (workers < 0) throw ConfigError("workers", "must be >= 0");
  }
};

// --------------------------------------------------------------------------
// JSON (de)serialization. Unknown keys are rejected so config typos surface
// immediately, with the dotted field path in the error.

namespace detail {

using nlohmann::json;

template <class T>
void read_field(const json& j, const std::string& scope, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(scope.empty() ? key : scope + "." + key, e.what());
  }
}

inline void check_keys(const json& j, const std::string& scope,
                       std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok)
      throw ConfigError(scope.empty() ? it.key() : scope + "." + it.key(),
                        "unknown config field");
  }
}

}  // namespace detail

inline void from_json_obj(const nlohmann::json& j, Hyperparameters& h,
                          const std::string& scope = "hyper") {
  using detail::read_field;
  detail::check_keys(j, scope,
                     {"training_steps", "episode_length", "gamma", "lr_actor", "lr_critic",
                      "tau", "entropy_weight", "buffer_capacity", "batch_size",
                      "wg_noise_initial", "wg_noise_final", "wg_noise_anneal_fraction",
                      "idqn_eps_initial", "idqn_eps_final", "idqn_eps_anneal_fraction",
                      "lr_idqn", "eval_interval", "eval_episodes", "final_eval_episodes"});
  read_field(j, scope, "training_steps", h.training_steps);
  read_field(j, scope, "episode_length", h.episode_length);
  read_field(j, scope, "gamma", h.gamma);
  read_field(j, scope, "lr_actor", h.lr_actor);
  read_field(j, scope, "lr_critic", h.lr_critic);
  read_field(j, scope, "tau", h.tau);
  read_field(j, scope, "entropy_weight", h.entropy_weight);
  read_field(j, scope, "buffer_capacity", h.buffer_capacity);
  read_field(j, scope, "batch_size", h.batch_size);
  read_field(j, scope, "wg_noise_initial", h.wg_noise_initial);
  read_field(j, scope, "wg_noise_final", h.wg_noise_final);
  read_field(j, scope, "wg_noise_anneal_fraction", h.wg_noise_anneal_fraction);
  read_field(j, scope, "idqn_eps_initial", h.idqn_eps_initial);
  read_field(j, scope, "idqn_eps_final", h.idqn_eps_final);
  read_field(j, scope, "idqn_eps_anneal_fraction", h.idqn_eps_anneal_fraction);
  read_field(j, scope, "lr_idqn", h.lr_idqn);
  read_field(j, scope, "eval_interval", h.eval_interval);
  read_field(j, scope, "eval_episodes", h.eval_episodes);
  read_field(j, scope, "final_eval_episodes", h.final_eval_episodes);
}

inline nlohmann::json to_json_obj(const Hyperparameters& h) {
  return {{"training_steps", h.training_steps},
          {"episode_length", h.episode_length},
          {"gamma", h.gamma},
          {"lr_actor", h.lr_actor},
          {"lr_critic", h.lr_critic},
          {"tau", h.tau},
          {"entropy_weight", h.entropy_weight},
          {"buffer_capacity", h.buffer_capacity},
          {"batch_size", h.batch_size},
          {"wg_noise_initial", h.wg_noise_initial},
          {"wg_noise_final", h.wg_noise_final},
          {"wg_noise_anneal_fraction", h.wg_noise_anneal_fraction},
          {"idqn_eps_initial", h.idqn_eps_initial},
          {"idqn_eps_final", h.idqn_eps_final},
          {"idqn_eps_anneal_fraction", h.idqn_eps_anneal_fraction},
          {"lr_idqn", h.lr_idqn},
          {"eval_interval", h.eval_interval},
          {"eval_episodes", h.eval_episodes},
          {"final_eval_episodes", h.final_eval_episodes}};
}

inline void from_json_obj(const nlohmann::json& j, PpParams& p,
                          const std::string& scope = "pp") {
  using detail::read_field;
  detail::check_keys(j, scope,
                     {"grid_size", "num_predators", "view_radius", "step_penalty",
                      "capture_bonus"});
  read_field(j, scope, "grid_size", p.grid_size);
  read_field(j, scope, "num_predators", p.num_predators);
  read_field(j, scope, "view_radius", p.view_radius);
  read_field(j, scope, "step_penalty", p.step_penalty);
  read_field(j, scope, "capture_bonus", p.capture_bonus);
}

inline nlohmann::json to_json_obj(const PpParams& p) {
  return {{"grid_size", p.grid_size},       {"num_predators", p.num_predators},
          {"view_radius", p.view_radius},   {"step_penalty", p.step_penalty},
          {"capture_bonus", p.capture_bonus}};
}

inline void from_json_obj(const nlohmann::json& j, CcnParams& p,
                          const std::string& scope = "ccn") {
  using detail::read_field;
  detail::check_keys(j, scope,
                     {"length", "start", "dest", "step_penalty", "capture_bonus"});
  read_field(j, scope, "length", p.length);
  read_field(j, scope, "start", p.start);
  read_field(j, scope, "dest", p.dest);
  read_field(j, scope, "step_penalty", p.step_penalty);
  read_field(j, scope, "capture_bonus", p.capture_bonus);
}

inline nlohmann::json to_json_obj(const CcnParams& p) {
  return {{"length", p.length},           {"start", p.start},
          {"dest", p.dest},               {"step_penalty", p.step_penalty},
          {"capture_bonus", p.capture_bonus}};
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  detail::check_keys(j, "",
                     {"env", "algo", "wsa", "k", "l", "seeds", "out_dir", "workers",
                      "actor_hidden", "critic_hidden", "hyper", "pp", "ccn"});
  if (j.contains("env")) c.env = env_from_name(j.at("env").get<std::string>());
  if (j.contains("algo")) c.algo = algo_from_name(j.at("algo").get<std::string>());
  if (j.contains("wsa")) {
    try {
      c.wsa_kind = wsa::kind_from_name(j.at("wsa").get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError("wsa", e.what());
    }
  }
  using detail::read_field;
  read_field(j, "", "k", c.k);
  read_field(j, "", "l", c.l);
  read_field(j, "", "seeds", c.seeds);
  read_field(j, "", "out_dir", c.out_dir);
  read_field(j, "", "workers", c.workers);
  read_field(j, "", "actor_hidden", c.actor_hidden);
  read_field(j, "", "critic_hidden", c.critic_hidden);
  if (j.contains("hyper")) from_json_obj(j.at("hyper"), c.hyper);
  if (j.contains("pp")) from_json_obj(j.at("pp"), c.pp);
  if (j.contains("ccn")) from_json_obj(j.at("ccn"), c.ccn);
  c.validate();
  return c;
}

inline nlohmann::json config_to_json(const ExperimentConfig& c) {
  return {{"env", env_name(c.env)},
          {"algo", algo_name(c.algo)},
          {"wsa", wsa::kind_name(c.wsa_kind)},
          {"k", c.k},
          {"l", c.l},
          {"seeds", c.seeds},
          {"out_dir", c.out_dir},
          {"workers", c.workers},
          {"actor_hidden", c.actor_hidden},
          {"critic_hidden", c.critic_hidden},
          {"hyper", to_json_obj(c.hyper)},
          {"pp", to_json_obj(c.pp)},
          {"ccn", to_json_obj(c.ccn)}};
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("config parse error in " + path + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace schednet
