#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "schednet/rng.hpp"

// Weight-based scheduling: map per-agent scalar weights to a binary schedule
// profile saying who may broadcast this step.
namespace schednet::wsa {

using Weights = std::vector<double>;
using Profile = std::vector<std::uint8_t>;

enum class Kind { top_k, softmax_k, round_robin, full };

inline const char* kind_name(Kind k) {
  switch (k) {
    case Kind::top_k: return "top_k";
    case Kind::softmax_k: return "softmax_k";
    case Kind::round_robin: return "round_robin";
    case Kind::full: return "full";
  }
  return "?";
}

inline Kind kind_from_name(const std::string& s) {
  if (s == "top_k") return Kind::top_k;
  if (s == "softmax_k") return Kind::softmax_k;
  if (s == "round_robin") return Kind::round_robin;
  if (s == "full") return Kind::full;
  throw std::invalid_argument("unknown wsa: " + s);
}

inline int profile_sum(const Profile& c) {
  return std::accumulate(c.begin(), c.end(), 0);
}

inline std::vector<int> scheduled_indices(const Profile& c) {
  std::vector<int> idx;
  for (int i = 0; i < static_cast<int>(c.size()); ++i)
    if (c[i]) idx.push_back(i);
  return idx;
}

namespace detail {
inline void check_k(int k, int n) {
  if (k < 1 || k > n)
    throw std::invalid_argument("k must be in [1, n]; got k=" + std::to_string(k) +
                                ", n=" + std::to_string(n));
}
}  // namespace detail

// k highest-weight agents; ties broken by lowest agent index.
inline Profile top_k(const Weights& w, int k) {
  const int n = static_cast<int>(w.size());
  detail::check_k(k, n);
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return w[a] > w[b]; });
  Profile c(n, 0);
  for (int j = 0; j < k; ++j) c[idx[j]] = 1;
  return c;
}

// sigma_i(w) = exp(w_i) / sum_j exp(w_j), computed with max subtraction
inline std::vector<double> softmax_probs(const Weights& w) {
  const int n = static_cast<int>(w.size());
  if (n == 0) throw std::invalid_argument("softmax_probs: empty weights");
  double wmax = w[0];
  for (double v : w) wmax = std::max(wmax, v);
  std::vector<double> p(n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    p[i] = std::exp(w[i] - wmax);
    sum += p[i];
  }
  for (int i = 0; i < n; ++i) p[i] /= sum;
  return p;
}

// k sequential softmax draws without replacement, renormalizing after each.
inline Profile softmax_k(const Weights& w, int k, Rng& rng) {
  const int n = static_cast<int>(w.size());
  detail::check_k(k, n);
  std::vector<double> p = softmax_probs(w);
  Profile c(n, 0);
  double remaining = 1.0;
  for (int draw = 0; draw < k; ++draw) {
    const double u = rng.uniform01() * remaining;
    double acc = 0.0;
    int pick = -1;
    for (int i = 0; i < n; ++i) {
      if (c[i]) continue;
      acc += p[i];
      if (u < acc) {
        pick = i;
        break;
      }
    }
    if (pick < 0) {  // numerical slack at the upper edge
      for (int i = n - 1; i >= 0; --i)
        if (!c[i]) {
          pick = i;
          break;
        }
    }
    c[pick] = 1;
    remaining -= p[pick];
  }
  return c;
}

// agents (t*k mod n) .. (t*k + k - 1 mod n)
inline Profile round_robin(long long t, int n, int k) {
  detail::check_k(k, n);
  Profile c(n, 0);
  const long long base = (t % n) * k;
  for (int j = 0; j < k; ++j) c[static_cast<int>((base + j) % n)] = 1;
  return c;
}

inline Profile full(int n) { return Profile(n, 1); }

// Dispatch used by the rollout code. `t` only matters for round_robin,
// `rng` only for softmax_k; `full` ignores k.
inline Profile make_schedule(Kind kind, const Weights& w, int k, long long t, Rng& rng) {
  const int n = static_cast<int>(w.size());
  switch (kind) {
    case Kind::top_k: return top_k(w, k);
    case Kind::softmax_k: return softmax_k(w, k, rng);
    case Kind::round_robin: return round_robin(t, n, k);
    case Kind::full: return full(n);
  }
  throw std::logic_error("make_schedule: bad kind");
}

// effective schedule cardinality (full communication schedules everyone)
inline int effective_k(Kind kind, int k, int n) { return kind == Kind::full ? n : k; }

}  // namespace schednet::wsa
