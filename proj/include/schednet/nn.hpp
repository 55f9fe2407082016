#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "schednet/rng.hpp"

// Minimal feed-forward engine: MLPs with ReLU hidden layers, exact
// reverse-mode gradients, Adam, and soft target updates. Everything is a
// pure function over flat parameter arrays; callers own all state.
namespace schednet::nn {

enum class Activation { linear, relu, sigmoid, softmax };

inline const char* activation_name(Activation a) {
  switch (a) {
    case Activation::linear: return "linear";
    case Activation::relu: return "relu";
    case Activation::sigmoid: return "sigmoid";
    case Activation::softmax: return "softmax";
  }
  return "?";
}

inline Activation activation_from_name(const std::string& s) {
  if (s == "linear") return Activation::linear;
  if (s == "relu") return Activation::relu;
  if (s == "sigmoid") return Activation::sigmoid;
  if (s == "softmax") return Activation::softmax;
  throw std::invalid_argument("unknown activation: " + s);
}

struct NetSpec {
  int input_dim = 0;
  std::vector<int> hidden;
  int output_dim = 0;
  Activation output_activation = Activation::linear;

  int num_layers() const { return static_cast<int>(hidden.size()) + 1; }
  int layer_in(int l) const { return l == 0 ? input_dim : hidden[l - 1]; }
  int layer_out(int l) const {
    return l == num_layers() - 1 ? output_dim : hidden[l];
  }

  std::size_t param_count() const {
    std::size_t total = 0;
    for (int l = 0; l < num_layers(); ++l)
      total += static_cast<std::size_t>(layer_in(l)) * layer_out(l) + layer_out(l);
    return total;
  }

  void validate() const {
    if (input_dim < 1) throw std::invalid_argument("NetSpec: input_dim must be >= 1");
    if (output_dim < 1) throw std::invalid_argument("NetSpec: output_dim must be >= 1");
    for (int h : hidden)
      if (h < 1) throw std::invalid_argument("NetSpec: hidden dims must be >= 1");
  }

  bool operator==(const NetSpec&) const = default;
};

// Flat parameter storage. Layer l occupies [offset_l, offset_l + in*out + out):
// first the weight matrix, row-major (out x in), then the biases. The layout
// is fully determined by the NetSpec.
struct ParameterSet {
  std::vector<double> data;

  std::size_t size() const { return data.size(); }
  double* begin() { return data.data(); }
  const double* begin() const { return data.data(); }
};

struct LayerView {
  double* w;  // out x in, row-major
  double* b;  // out
  int in = 0;
  int out = 0;
};

struct ConstLayerView {
  const double* w;
  const double* b;
  int in = 0;
  int out = 0;
};

inline std::size_t layer_offset(const NetSpec& spec, int layer) {
  std::size_t off = 0;
  for (int l = 0; l < layer; ++l)
    off += static_cast<std::size_t>(spec.layer_in(l)) * spec.layer_out(l) +
           spec.layer_out(l);
  return off;
}

inline LayerView layer_view(ParameterSet& p, const NetSpec& spec, int layer) {
  const std::size_t off = layer_offset(spec, layer);
  const int in = spec.layer_in(layer), out = spec.layer_out(layer);
  return {p.data.data() + off, p.data.data() + off + static_cast<std::size_t>(in) * out, in, out};
}

inline ConstLayerView layer_view(const ParameterSet& p, const NetSpec& spec, int layer) {
  const std::size_t off = layer_offset(spec, layer);
  const int in = spec.layer_in(layer), out = spec.layer_out(layer);
  return {p.data.data() + off, p.data.data() + off + static_cast<std::size_t>(in) * out, in, out};
}

inline ParameterSet zeros(const NetSpec& spec) {
  return ParameterSet{std::vector<double>(spec.param_count(), 0.0)};
}

// Glorot-uniform weights (+/- sqrt(6/(fan_in+fan_out))), zero biases.
// Bitwise deterministic for a fixed seed.
inline ParameterSet init_params(const NetSpec& spec, std::uint64_t seed) {
  spec.validate();
  ParameterSet p = zeros(spec);
  Rng rng(seed);
  for (int l = 0; l < spec.num_layers(); ++l) {
    LayerView v = layer_view(p, spec, l);
    const double bound = std::sqrt(6.0 / (v.in + v.out));
    for (int i = 0; i < v.out * v.in; ++i) v.w[i] = rng.uniform(-bound, bound);
    // biases stay zero
  }
  return p;
}

// Pre-activations and activations retained for the backward pass.
// act[0] is the input; act[l+1] the output of layer l; pre[l] its
// pre-activation. Buffers are resized on first use and reused after.
struct ForwardCache {
  std::vector<std::vector<double>> act;
  std::vector<std::vector<double>> pre;

  std::span<const double> output() const { return act.back(); }
};

namespace detail {

inline void affine(ConstLayerView v, std::span<const double> x, std::vector<double>& z) {
  z.resize(static_cast<std::size_t>(v.out));
  for (int o = 0; o < v.out; ++o) {
    const double* row = v.w + static_cast<std::size_t>(o) * v.in;
    double acc = v.b[o];
    for (int i = 0; i < v.in; ++i) acc += row[i] * x[i];
    z[o] = acc;
  }
}

inline void apply_activation(Activation a, const std::vector<double>& z,
                             std::vector<double>& y) {
  y.resize(z.size());
  switch (a) {
    case Activation::linear:
      y = z;
      break;
    case Activation::relu:
      for (std::size_t i = 0; i < z.size(); ++i) y[i] = z[i] > 0.0 ? z[i] : 0.0;
      break;
    case Activation::sigmoid:
      for (std::size_t i = 0; i < z.size(); ++i) y[i] = 1.0 / (1.0 + std::exp(-z[i]));
      break;
    case Activation::softmax: {
      double zmax = z[0];
      for (double v : z) zmax = std::max(zmax, v);
      double sum = 0.0;
      for (std::size_t i = 0; i < z.size(); ++i) {
        y[i] = std::exp(z[i] - zmax);
        sum += y[i];
      }
      for (std::size_t i = 0; i < z.size(); ++i) y[i] /= sum;
      break;
    }
  }
}

// dL/dz from dL/dy at the output layer
inline void output_grad_to_pre(Activation a, const std::vector<double>& z,
                               const std::vector<double>& y,
                               std::span<const double> gy, std::vector<double>& gz) {
  gz.resize(z.size());
  switch (a) {
    case Activation::linear:
      for (std::size_t i = 0; i < z.size(); ++i) gz[i] = gy[i];
      break;
    case Activation::relu:
      for (std::size_t i = 0; i < z.size(); ++i) gz[i] = z[i] > 0.0 ? gy[i] : 0.0;
      break;
    case Activation::sigmoid:
      for (std::size_t i = 0; i < z.size(); ++i) gz[i] = gy[i] * y[i] * (1.0 - y[i]);
      break;
    case Activation::softmax: {
      double dot = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) dot += gy[i] * y[i];
      for (std::size_t i = 0; i < y.size(); ++i) gz[i] = y[i] * (gy[i] - dot);
      break;
    }
  }
}

}  // namespace detail

// Runs the net, retaining per-layer state in `cache`. Returns cache.output().
inline std::span<const double> forward(const NetSpec& spec, const ParameterSet& params,
                                       std::span<const double> input, ForwardCache& cache) {
  if (static_cast<int>(input.size()) != spec.input_dim)
    throw std::invalid_argument("forward: input has dim " + std::to_string(input.size()) +
                                ", spec wants " + std::to_string(spec.input_dim));
  if (params.size() != spec.param_count())
    throw std::invalid_argument("forward: parameter count mismatch");

  const int L = spec.num_layers();
  cache.act.resize(static_cast<std::size_t>(L) + 1);
  cache.pre.resize(static_cast<std::size_t>(L));
  cache.act[0].assign(input.begin(), input.end());

  for (int l = 0; l < L; ++l) {
    ConstLayerView v = layer_view(params, spec, l);
    detail::affine(v, cache.act[l], cache.pre[l]);
    const Activation a = l == L - 1 ? spec.output_activation : Activation::relu;
    detail::apply_activation(a, cache.pre[l], cache.act[l + 1]);
  }
  return cache.output();
}

// Convenience overload for cold paths.
inline std::vector<double> forward(const NetSpec& spec, const ParameterSet& params,
                                   std::span<const double> input) {
  ForwardCache cache;
  auto out = forward(spec, params, input, cache);
  return {out.begin(), out.end()};
}

// Reverse pass. `output_grad` is dL/dy at the net output (after the output
// activation). Parameter gradients are ACCUMULATED into `grad`; if
// `input_grad` is non-null, dL/dinput is accumulated there too (needed for
// the grad-wrt-action term of deterministic policy gradients and for
// backing message gradients out of a downstream consumer).
inline void backward(const NetSpec& spec, const ParameterSet& params,
                     const ForwardCache& cache, std::span<const double> output_grad,
                     ParameterSet& grad, std::vector<double>* input_grad = nullptr) {
  const int L = spec.num_layers();
  if (static_cast<int>(cache.act.size()) != L + 1 ||
      static_cast<int>(cache.pre.size()) != L ||
      static_cast<int>(cache.act[0].size()) != spec.input_dim)
    throw std::invalid_argument("backward: cache does not match spec");
  if (static_cast<int>(output_grad.size()) != spec.output_dim)
    throw std::invalid_argument("backward: output_grad dim mismatch");
  if (grad.size() != spec.param_count())
    throw std::invalid_argument("backward: grad buffer size mismatch");

  thread_local std::vector<double> gz, gprev;
  detail::output_grad_to_pre(spec.output_activation, cache.pre[L - 1], cache.act[L],
                             output_grad, gz);

  for (int l = L - 1; l >= 0; --l) {
    ConstLayerView v = layer_view(params, spec, l);
    const std::size_t off = layer_offset(spec, l);
    double* gw = grad.data.data() + off;
    double* gb = gw + static_cast<std::size_t>(v.in) * v.out;
    const std::vector<double>& a_prev = cache.act[l];

    gprev.assign(static_cast<std::size_t>(v.in), 0.0);
    for (int o = 0; o < v.out; ++o) {
      const double g = gz[o];
      gb[o] += g;
      if (g == 0.0) continue;
      double* gw_row = gw + static_cast<std::size_t>(o) * v.in;
      const double* w_row = v.w + static_cast<std::size_t>(o) * v.in;
      for (int i = 0; i < v.in; ++i) {
        gw_row[i] += g * a_prev[i];
        gprev[i] += g * w_row[i];
      }
    }

    if (l > 0) {
      // hidden layers are always ReLU
      gz.resize(gprev.size());
      const std::vector<double>& z_prev = cache.pre[l - 1];
      for (std::size_t i = 0; i < gprev.size(); ++i)
        gz[i] = z_prev[i] > 0.0 ? gprev[i] : 0.0;
    } else if (input_grad) {
      if (input_grad->empty())
        input_grad->assign(gprev.size(), 0.0);
      else if (input_grad->size() != gprev.size())
        throw std::invalid_argument("backward: input_grad size mismatch");
      for (std::size_t i = 0; i < gprev.size(); ++i) (*input_grad)[i] += gprev[i];
    }
  }
}

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  long long t = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  static AdamState make(std::size_t n) {
    AdamState s;
    s.m.assign(n, 0.0);
    s.v.assign(n, 0.0);
    return s;
  }
};

// One bias-corrected Adam step, minimizing. Rejects non-finite gradients.
inline void adam_step(ParameterSet& params, const ParameterSet& grad, AdamState& state,
                      double lr) {
  const std::size_t n = params.size();
  if (grad.size() != n || state.m.size() != n || state.v.size() != n)
    throw std::invalid_argument("adam_step: size mismatch");
  for (double g : grad.data)
    if (!std::isfinite(g)) throw std::invalid_argument("adam_step: non-finite gradient");

  state.t += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
  for (std::size_t i = 0; i < n; ++i) {
    const double g = grad.data[i];
    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
    state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g;
    const double mhat = state.m[i] / bc1;
    const double vhat = state.v[i] / bc2;
    params.data[i] -= lr * mhat / (std::sqrt(vhat) + state.eps);
  }
}

// target <- tau * online + (1 - tau) * target
inline void soft_update(ParameterSet& target, const ParameterSet& online, double tau) {
  if (target.size() != online.size())
    throw std::invalid_argument("soft_update: layout mismatch");
  if (!(tau >= 0.0 && tau <= 1.0))
    throw std::invalid_argument("soft_update: tau must be in [0,1]");
  for (std::size_t i = 0; i < target.size(); ++i)
    target.data[i] = tau * online.data[i] + (1.0 - tau) * target.data[i];
}

}  // namespace schednet::nn
