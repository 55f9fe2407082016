#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "schednet/rng.hpp"

// The two cooperative tasks behind one contract: reset, step with a joint
// action, per-agent partial observations, and a global state for the
// centralized critic. Instances are plain values; copy freely.
namespace schednet {

using Vec = std::vector<double>;
using JointAction = std::vector<int>;
using JointObs = std::vector<Vec>;

struct StepResult {
  Vec state;      // global state after the step
  JointObs obs;   // per-agent observations after the step
  double reward;  // shared by all agents
  bool done = false;
  int steps_elapsed = 0;
};

struct GridPos {
  int x = 0;
  int y = 0;
};

// ---------------------------------------------------------------------------
// Predator-Prey: predators on a grid chase a randomly moving prey; the
// episode ends when every predator's view window contains the prey.
// Observation (dim 5): own position (2, normalized), prey offset (2,
// normalized, zero when unseen), prey-visible flag.

struct PpParams {
  int grid_size = 7;
  int num_predators = 4;
  std::vector<int> view_radius{2, 1, 1, 1};  // 5x5 window for agent 0, 3x3 for the rest
  double step_penalty = -0.01;
  double capture_bonus = 1.0;
  int max_steps = 1000;

  void validate() const {
    if (grid_size < 1) throw std::invalid_argument("pp.grid_size must be >= 1");
    if (num_predators < 1) throw std::invalid_argument("pp.num_predators must be >= 1");
    if (num_predators + 1 > grid_size * grid_size)
      throw std::invalid_argument("pp: more entities than cells");
    if (static_cast<int>(view_radius.size()) != num_predators)
      throw std::invalid_argument("pp.view_radius must have one entry per predator");
    for (int r : view_radius)
      if (r < 0) throw std::invalid_argument("pp.view_radius entries must be >= 0");
    if (max_steps < 1) throw std::invalid_argument("pp.max_steps must be >= 1");
  }
};

class PredatorPrey {
 public:
  // actions: 0=up 1=down 2=left 3=right 4=stay
  static constexpr int kActions = 5;
  static constexpr int kObsDim = 5;

  explicit PredatorPrey(PpParams params) : p_(std::move(params)) { p_.validate(); }

  int num_agents() const { return p_.num_predators; }
  int action_count() const { return kActions; }
  int obs_dim() const { return kObsDim; }
  int state_dim() const { return num_agents() * kObsDim + 2; }
  const PpParams& params() const { return p_; }

  void reset(Rng& rng) {
    const int cells = p_.grid_size * p_.grid_size;
    std::vector<std::uint8_t> used(static_cast<std::size_t>(cells), 0);
    auto draw_cell = [&]() {
      int c = rng.randint(cells);
      while (used[c]) c = rng.randint(cells);
      used[c] = 1;
      return GridPos{c % p_.grid_size, c / p_.grid_size};
    };
    predators_.resize(static_cast<std::size_t>(p_.num_predators));
    for (auto& pos : predators_) pos = draw_cell();
    prey_ = draw_cell();
    steps_ = 0;
    done_ = false;
  }

  StepResult step(const JointAction& actions, Rng& rng) {
    if (done_) throw std::logic_error("PredatorPrey::step: episode already done");
    if (static_cast<int>(actions.size()) != num_agents())
      throw std::invalid_argument("PredatorPrey::step: wrong joint-action size");
    for (int i = 0; i < num_agents(); ++i) move(predators_[i], actions[i]);
    move(prey_, rng.randint(kActions));  // prey walks uniformly at random
    ++steps_;

    double reward = p_.step_penalty;
    if (all_observe_prey()) {
      done_ = true;
      reward += p_.capture_bonus;
    } else if (steps_ >= p_.max_steps) {
      done_ = true;  // truncated, no bonus
    }
    return {global_state(), joint_obs(), reward, done_, steps_};
  }

  Vec observe(int agent) const {
    check_agent(agent);
    const GridPos& a = predators_[agent];
    const double span = norm_span();
    Vec o(kObsDim, 0.0);
    o[0] = a.x / span;
    o[1] = a.y / span;
    if (sees_prey(agent)) {
      o[2] = static_cast<double>(prey_.x - a.x) / p_.grid_size;
      o[3] = static_cast<double>(prey_.y - a.y) / p_.grid_size;
      o[4] = 1.0;
    }
    return o;
  }

  Vec global_state() const {
    Vec s;
    s.reserve(static_cast<std::size_t>(state_dim()));
    for (int i = 0; i < num_agents(); ++i) {
      const Vec o = observe(i);
      s.insert(s.end(), o.begin(), o.end());
    }
    const double span = norm_span();
    s.push_back(prey_.x / span);
    s.push_back(prey_.y / span);
    return s;
  }

  JointObs joint_obs() const {
    JointObs o(static_cast<std::size_t>(num_agents()));
    for (int i = 0; i < num_agents(); ++i) o[i] = observe(i);
    return o;
  }

  bool sees_prey(int agent) const {
    check_agent(agent);
    const GridPos& a = predators_[agent];
    const int r = p_.view_radius[agent];
    return std::abs(prey_.x - a.x) <= r && std::abs(prey_.y - a.y) <= r;
  }

  bool all_observe_prey() const {
    for (int i = 0; i < num_agents(); ++i)
      if (!sees_prey(i)) return false;
    return true;
  }

  bool done() const { return done_; }
  int steps() const { return steps_; }
  GridPos predator_pos(int agent) const { check_agent(agent); return predators_[agent]; }
  GridPos prey_pos() const { return prey_; }

  // direct state injection for tests and traces
  void set_positions(const std::vector<GridPos>& predators, GridPos prey) {
    if (static_cast<int>(predators.size()) != num_agents())
      throw std::invalid_argument("set_positions: wrong predator count");
    predators_ = predators;
    prey_ = prey;
    done_ = false;
    steps_ = 0;
  }

 private:
  void move(GridPos& pos, int action) const {
    switch (action) {
      case 0: pos.y -= 1; break;
      case 1: pos.y += 1; break;
      case 2: pos.x -= 1; break;
      case 3: pos.x += 1; break;
      case 4: break;
      default:
        throw std::invalid_argument("PredatorPrey: invalid action id " + std::to_string(action));
    }
    pos.x = std::clamp(pos.x, 0, p_.grid_size - 1);
    pos.y = std::clamp(pos.y, 0, p_.grid_size - 1);
  }

  void check_agent(int agent) const {
    if (agent < 0 || agent >= num_agents())
      throw std::out_of_range("PredatorPrey: agent index out of range");
  }

  double norm_span() const { return p_.grid_size > 1 ? p_.grid_size - 1.0 : 1.0; }

  PpParams p_;
  std::vector<GridPos> predators_;
  GridPos prey_;
  int steps_ = 0;
  bool done_ = false;
};

// ---------------------------------------------------------------------------
// Cooperative Communication and Navigation: two agents on independent 1-D
// lines must simultaneously sit on their destinations. Each agent observes
// only the other agent's situation (position, destination, arrived flag).

struct CcnParams {
  int length = 16;
  std::array<int, 2> start{0, 0};
  std::array<int, 2> dest{4, 10};
  double step_penalty = -0.01;
  double capture_bonus = 1.0;
  int max_steps = 1000;

  void validate() const {
    if (length < 2) throw std::invalid_argument("ccn.length must be >= 2");
    for (int i = 0; i < 2; ++i) {
      if (start[i] < 0 || start[i] >= length)
        throw std::invalid_argument("ccn.start[" + std::to_string(i) + "] outside [0, length)");
      if (dest[i] < 0 || dest[i] >= length)
        throw std::invalid_argument("ccn.dest[" + std::to_string(i) + "] outside [0, length)");
    }
    // agent 2 begins strictly farther from its destination than agent 1
    if (std::abs(dest[1] - start[1]) <= std::abs(dest[0] - start[0]))
      throw std::invalid_argument("ccn: agent 2 must start farther from its destination than agent 1");
    if (max_steps < 1) throw std::invalid_argument("ccn.max_steps must be >= 1");
  }
};

class CoopNavigation {
 public:
  // actions: 0=left 1=right 2=stay
  static constexpr int kActions = 3;
  static constexpr int kObsDim = 3;
  static constexpr int kAgents = 2;

  explicit CoopNavigation(CcnParams params) : p_(std::move(params)) { p_.validate(); }

  int num_agents() const { return kAgents; }
  int action_count() const { return kActions; }
  int obs_dim() const { return kObsDim; }
  int state_dim() const { return kAgents * kObsDim + 2; }
  const CcnParams& params() const { return p_; }

  void reset(Rng&) {
    pos_ = p_.start;
    steps_ = 0;
    done_ = false;
  }

  StepResult step(const JointAction& actions, Rng&) {
    if (done_) throw std::logic_error("CoopNavigation::step: episode already done");
    if (static_cast<int>(actions.size()) != kAgents)
      throw std::invalid_argument("CoopNavigation::step: wrong joint-action size");
    for (int i = 0; i < kAgents; ++i) {
      switch (actions[i]) {
        case 0: pos_[i] -= 1; break;
        case 1: pos_[i] += 1; break;
        case 2: break;
        default:
          throw std::invalid_argument("CoopNavigation: invalid action id " +
                                      std::to_string(actions[i]));
      }
      pos_[i] = std::clamp(pos_[i], 0, p_.length - 1);
    }
    ++steps_;

    double reward = p_.step_penalty;
    if (arrived(0) && arrived(1)) {
      done_ = true;
      reward += p_.capture_bonus;
    } else if (steps_ >= p_.max_steps) {
      done_ = true;
    }
    return {global_state(), joint_obs(), reward, done_, steps_};
  }

  // an agent sees only the other agent's situation, never its own
  Vec observe(int agent) const {
    check_agent(agent);
    const int other = 1 - agent;
    const double span = p_.length - 1.0;
    return {pos_[other] / span, p_.dest[other] / span, arrived(other) ? 1.0 : 0.0};
  }

  Vec global_state() const {
    Vec s;
    s.reserve(static_cast<std::size_t>(state_dim()));
    for (int i = 0; i < kAgents; ++i) {
      const Vec o = observe(i);
      s.insert(s.end(), o.begin(), o.end());
    }
    const double span = p_.length - 1.0;
    s.push_back(pos_[0] / span);
    s.push_back(pos_[1] / span);
    return s;
  }

  JointObs joint_obs() const { return {observe(0), observe(1)}; }

  bool arrived(int agent) const { check_agent(agent); return pos_[agent] == p_.dest[agent]; }
  bool done() const { return done_; }
  int steps() const { return steps_; }
  int position(int agent) const { check_agent(agent); return pos_[agent]; }

  void set_positions(const std::array<int, 2>& pos) {
    pos_ = pos;
    done_ = false;
    steps_ = 0;
  }

 private:
  void check_agent(int agent) const {
    if (agent < 0 || agent >= kAgents)
      throw std::out_of_range("CoopNavigation: agent index out of range");
  }

  CcnParams p_;
  std::array<int, 2> pos_{};
  int steps_ = 0;
  bool done_ = false;
};

// ---------------------------------------------------------------------------
// Value-semantic wrapper so the training code is environment agnostic.

class Environment {
 public:
  explicit Environment(PpParams p) : impl_(PredatorPrey(std::move(p))) {}
  explicit Environment(CcnParams p) : impl_(CoopNavigation(std::move(p))) {}
  explicit Environment(PredatorPrey e) : impl_(std::move(e)) {}
  explicit Environment(CoopNavigation e) : impl_(std::move(e)) {}

  int num_agents() const { return visit([](const auto& e) { return e.num_agents(); }); }
  int action_count() const { return visit([](const auto& e) { return e.action_count(); }); }
  int obs_dim() const { return visit([](const auto& e) { return e.obs_dim(); }); }
  int state_dim() const { return visit([](const auto& e) { return e.state_dim(); }); }

  void reset(Rng& rng) {
    std::visit([&](auto& e) { e.reset(rng); }, impl_);
  }
  void reset(std::uint64_t seed) {
    Rng rng(seed);
    reset(rng);
  }

  StepResult step(const JointAction& a, Rng& rng) {
    return std::visit([&](auto& e) { return e.step(a, rng); }, impl_);
  }

  Vec observe(int agent) const {
    return visit([&](const auto& e) { return e.observe(agent); });
  }
  Vec global_state() const { return visit([](const auto& e) { return e.global_state(); }); }
  JointObs joint_obs() const { return visit([](const auto& e) { return e.joint_obs(); }); }
  bool done() const { return visit([](const auto& e) { return e.done(); }); }
  int steps() const { return visit([](const auto& e) { return e.steps(); }); }

  bool is_pp() const { return std::holds_alternative<PredatorPrey>(impl_); }
  PredatorPrey& pp() { return std::get<PredatorPrey>(impl_); }
  const PredatorPrey& pp() const { return std::get<PredatorPrey>(impl_); }
  CoopNavigation& ccn() { return std::get<CoopNavigation>(impl_); }
  const CoopNavigation& ccn() const { return std::get<CoopNavigation>(impl_); }

 private:
  template <class F>
  auto visit(F&& f) const {
    return std::visit(std::forward<F>(f), impl_);
  }

  std::variant<PredatorPrey, CoopNavigation> impl_;
};

}  // namespace schednet
