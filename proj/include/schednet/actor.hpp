#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "schednet/half.hpp"
#include "schednet/nn.hpp"
#include "schednet/rng.hpp"
#include "schednet/wsa.hpp"

// Per-agent decentralized networks (message encoder, weight generator,
// action selector) and the broadcast bus that concatenates scheduled
// messages. Agents are parameter-heterogeneous: every agent owns its nets.
namespace schednet {

using Message = std::vector<double>;

struct AgentActor {
  nn::NetSpec enc_spec;  // o_i -> message, linear head
  nn::NetSpec wg_spec;   // o_i -> weight, sigmoid head
  nn::NetSpec as_spec;   // (o_i, aggregated message) -> action logits, softmax head
  nn::ParameterSet enc;
  nn::ParameterSet wg;
  nn::ParameterSet as;

  // Three hidden layers for encoder and weight generator, one for the
  // action selector; all `hidden` wide.
  static AgentActor make(int obs_dim, int action_count, int k, int l, int hidden,
                         std::uint64_t seed) {
    AgentActor a;
    a.enc_spec = {obs_dim, {hidden, hidden, hidden}, l, nn::Activation::linear};
    a.wg_spec = {obs_dim, {hidden, hidden, hidden}, 1, nn::Activation::sigmoid};
    a.as_spec = {obs_dim + k * l, {hidden}, action_count, nn::Activation::softmax};
    a.enc = nn::init_params(a.enc_spec, derive_seed(seed, 0));
    a.wg = nn::init_params(a.wg_spec, derive_seed(seed, 1));
    a.as = nn::init_params(a.as_spec, derive_seed(seed, 2));
    return a;
  }

  int message_len() const { return enc_spec.output_dim; }

  Message encode(const Vec& o) const { return nn::forward(enc_spec, enc, o); }

  double weight(const Vec& o) const { return nn::forward(wg_spec, wg, o)[0]; }

  std::vector<double> policy(const Vec& o, std::span<const double> agg) const {
    Vec in;
    in.reserve(o.size() + agg.size());
    in.insert(in.end(), o.begin(), o.end());
    in.insert(in.end(), agg.begin(), agg.end());
    return nn::forward(as_spec, as, in);
  }

  int select_action(const Vec& o, std::span<const double> agg, Rng& rng, bool greedy) const {
    const std::vector<double> p = policy(o, agg);
    if (greedy) {
      int best = 0;
      for (int a = 1; a < static_cast<int>(p.size()); ++a)
        if (p[a] > p[best]) best = a;
      return best;
    }
    const double u = rng.uniform01();
    double acc = 0.0;
    for (int a = 0; a < static_cast<int>(p.size()); ++a) {
      acc += p[a];
      if (u < acc) return a;
    }
    return static_cast<int>(p.size()) - 1;
  }
};

// Exploration noise on the scheduling weight during training rollouts:
// Gaussian, clamped back into [0,1].
inline double noisy_weight(double w, double sigma, Rng& rng) {
  const double v = w + rng.normal(0.0, sigma);
  return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
}

// m (x) c: scheduled agents' messages concatenated in ascending agent index
// order, each component pushed through the 16-bit wire. Always length k*l;
// every agent receives this same vector.
inline Vec aggregate(const std::vector<Message>& messages, const wsa::Profile& c,
                     int k, int l) {
  if (messages.size() != c.size())
    throw std::invalid_argument("aggregate: message/schedule size mismatch");
  if (wsa::profile_sum(c) != k)
    throw std::invalid_argument("aggregate: schedule cardinality != k");
  Vec agg;
  agg.reserve(static_cast<std::size_t>(k) * l);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!c[i]) continue;
    if (static_cast<int>(messages[i].size()) != l)
      throw std::invalid_argument("aggregate: message " + std::to_string(i) +
                                  " has wrong length");
    for (double v : messages[i]) agg.push_back(quantize_half(v));
  }
  return agg;
}

}  // namespace schednet
