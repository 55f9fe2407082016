#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "schednet/nn.hpp"

// Centralized training-only critic: a shared two-layer trunk on the global
// state feeds both a state-value head V(s) and an action-value head Q(s, w),
// where the weight vector w joins the trunk features at the Q head's input.
namespace schednet {

struct Critic {
  nn::NetSpec trunk_spec;  // s -> features (ReLU output, so the trunk is two hidden layers)
  nn::NetSpec v_spec;      // features -> scalar, one hidden layer
  nn::NetSpec q_spec;      // features ++ w -> scalar, one hidden layer
  nn::ParameterSet trunk;
  nn::ParameterSet v_head;
  nn::ParameterSet q_head;

  static Critic make(int state_dim, int num_agents, int hidden, std::uint64_t seed) {
    Critic c;
    c.trunk_spec = {state_dim, {hidden}, hidden, nn::Activation::relu};
    c.v_spec = {hidden, {hidden}, 1, nn::Activation::linear};
    c.q_spec = {hidden + num_agents, {hidden}, 1, nn::Activation::linear};
    c.trunk = nn::init_params(c.trunk_spec, derive_seed(seed, 0));
    c.v_head = nn::init_params(c.v_spec, derive_seed(seed, 1));
    c.q_head = nn::init_params(c.q_spec, derive_seed(seed, 2));
    return c;
  }

  int num_agents() const { return q_spec.input_dim - trunk_spec.output_dim; }

  double value(std::span<const double> s) const {
    nn::ForwardCache t, v;
    nn::forward(trunk_spec, trunk, s, t);
    return nn::forward(v_spec, v_head, t.output(), v)[0];
  }

  double q(std::span<const double> s, std::span<const double> w) const {
    CriticCache cache;
    double V, Q;
    critic_forward(*this, s, w, cache, &V, &Q);
    return Q;
  }

  struct CriticCache {
    nn::ForwardCache trunk;
    nn::ForwardCache v;
    nn::ForwardCache q;
    std::vector<double> q_in;
    bool has_v = false;
    bool has_q = false;
  };

  struct Grads {
    nn::ParameterSet trunk;
    nn::ParameterSet v_head;
    nn::ParameterSet q_head;

    static Grads zeros_like(const Critic& c) {
      return {nn::zeros(c.trunk_spec), nn::zeros(c.v_spec), nn::zeros(c.q_spec)};
    }
    void zero() {
      std::fill(trunk.data.begin(), trunk.data.end(), 0.0);
      std::fill(v_head.data.begin(), v_head.data.end(), 0.0);
      std::fill(q_head.data.begin(), q_head.data.end(), 0.0);
    }
  };

  // Evaluates V(s) and, when `w` is non-empty, Q(s, w). Outputs are optional.
  friend void critic_forward(const Critic& c, std::span<const double> s,
                             std::span<const double> w, CriticCache& cache,
                             double* V, double* Q) {
    nn::forward(c.trunk_spec, c.trunk, s, cache.trunk);
    const auto feat = cache.trunk.output();
    cache.has_v = V != nullptr;
    cache.has_q = !w.empty();
    if (V) *V = nn::forward(c.v_spec, c.v_head, feat, cache.v)[0];
    if (cache.has_q) {
      if (static_cast<int>(w.size()) != c.num_agents())
        throw std::invalid_argument("critic_forward: weight vector has wrong length");
      cache.q_in.assign(feat.begin(), feat.end());
      cache.q_in.insert(cache.q_in.end(), w.begin(), w.end());
      const double qv = nn::forward(c.q_spec, c.q_head, cache.q_in, cache.q)[0];
      if (Q) *Q = qv;
    } else if (Q) {
      throw std::invalid_argument("critic_forward: Q requested without weights");
    }
  }

  // Backward through both heads and the shared trunk. dV and dQ are dL/dV
  // and dL/dQ. Parameter gradients accumulate into `grads`; if `grad_w` is
  // non-null, dL/dw is accumulated there (the deterministic-policy-gradient
  // hook for the weight generators).
  friend void critic_backward(const Critic& c, const CriticCache& cache, double dV,
                              double dQ, Grads& grads, std::vector<double>* grad_w) {
    const int feat_dim = c.trunk_spec.output_dim;
    thread_local std::vector<double> gfeat, gq_in;
    gfeat.assign(static_cast<std::size_t>(feat_dim), 0.0);

    if (dV != 0.0) {
      if (!cache.has_v) throw std::invalid_argument("critic_backward: no V pass cached");
      const double g[1] = {dV};
      nn::backward(c.v_spec, c.v_head, cache.v, g, grads.v_head, &gfeat);
    }
    if (dQ != 0.0 || grad_w) {
      if (!cache.has_q) throw std::invalid_argument("critic_backward: no Q pass cached");
      const double g[1] = {dQ};
      gq_in.assign(cache.q_in.size(), 0.0);
      nn::backward(c.q_spec, c.q_head, cache.q, g, grads.q_head, &gq_in);
      for (int i = 0; i < feat_dim; ++i) gfeat[i] += gq_in[i];
      if (grad_w) {
        if (grad_w->empty()) grad_w->assign(static_cast<std::size_t>(c.num_agents()), 0.0);
        for (int i = 0; i < c.num_agents(); ++i)
          (*grad_w)[i] += gq_in[static_cast<std::size_t>(feat_dim) + i];
      }
    }
    nn::backward(c.trunk_spec, c.trunk, cache.trunk, gfeat, grads.trunk, nullptr);
  }
};

using CriticCache = Critic::CriticCache;
using CriticGrads = Critic::Grads;

}  // namespace schednet
