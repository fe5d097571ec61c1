#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "machina/error.hpp"
#include "machina/hmm.hpp"
#include "machina/majorization.hpp"
#include "machina/minimize.hpp"

namespace machina::testing {

template <typename F>
std::optional<ErrorCode> error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t n, double floor = 0.0) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> v(n);
  double total = 0.0;
  for (auto& x : v) total += (x = expo(rng) + floor);
  for (auto& x : v) x /= total;
  return v;
}

inline Distribution random_distribution(std::mt19937_64& rng, std::size_t n) {
  auto v = random_simplex(rng, n);
  // exact normalization: fold rounding into the largest entry
  double rest = 0.0;
  const auto big = std::max_element(v.begin(), v.end()) - v.begin();
  for (std::size_t i = 0; i < n; ++i)
    if (static_cast<std::ptrdiff_t>(i) != big) rest += v[i];
  v[big] = 1.0 - rest;
  return Distribution::validate(v);
}

// q obtained from p by a few random Robin Hood transfers, so p majorizes q.
inline Distribution random_majorized(std::mt19937_64& rng, const Distribution& p, int steps = 4) {
  std::vector<double> x = p.probs();
  std::uniform_int_distribution<std::size_t> pick(0, x.size() - 1);
  std::uniform_real_distribution<double> frac(0.0, 0.5);
  for (int s = 0; s < steps; ++s) {
    std::size_t i = pick(rng), j = pick(rng);
    if (x[i] < x[j]) std::swap(i, j);
    const double move = frac(rng) * (x[i] - x[j]);
    x[i] -= move;
    x[j] += move;
  }
  return Distribution::validate(x);
}

// Random irreducible unifilar model that is already minimal.
inline FinitePredictiveModel random_epsilon_machine(std::mt19937_64& rng, std::size_t max_states = 6,
                                                    std::size_t max_symbols = 3) {
  std::uniform_int_distribution<std::size_t> n_dist(1, max_states);
  std::uniform_int_distribution<std::size_t> k_dist(2, max_symbols);
  std::bernoulli_distribution keep(0.7);
  const std::size_t n = n_dist(rng), k = k_dist(rng);
  for (;;) {
    std::vector<std::string> states, alphabet;
    for (std::size_t i = 0; i < n; ++i) states.push_back("S" + std::to_string(i));
    for (std::size_t x = 0; x < k; ++x) alphabet.push_back(std::string(1, static_cast<char>('a' + x)));
    std::uniform_int_distribution<std::size_t> next(0, n - 1);
    std::vector<TransitionSpec> specs;
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<std::size_t> used;
      for (std::size_t x = 0; x < k; ++x)
        if (keep(rng)) used.push_back(x);
      if (used.empty()) used.push_back(std::uniform_int_distribution<std::size_t>(0, k - 1)(rng));
      const auto w = random_simplex(rng, used.size(), 0.1);
      double rest = 1.0;
      for (std::size_t i = 0; i < used.size(); ++i) {
        const double p = i + 1 == used.size() ? rest : w[i];
        rest -= w[i];
        specs.push_back({states[s], alphabet[used[i]], p, states[next(rng)]});
      }
    }
    try {
      auto m = FinitePredictiveModel::build(states, alphabet, specs);
      std::size_t edges = specs.size();
      if (edges <= n) continue;  // leave room for a split
      if (is_epsilon_machine(m)) return m;
    } catch (const Error&) {
    }
  }
}

// Splits a random state with at least two incoming edges into two copies.
inline FinitePredictiveModel random_split(std::mt19937_64& rng, const FinitePredictiveModel& m) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    const std::size_t target = std::uniform_int_distribution<std::size_t>(0, m.num_states() - 1)(rng);
    std::vector<RouteEntry> routes;
    for (std::size_t s = 0; s < m.num_states(); ++s)
      for (std::size_t x = 0; x < m.num_symbols(); ++x)
        if (const auto& t = m.transition(s, x); t && t->next == target)
          routes.push_back({m.states()[s], m.alphabet()[x], 0});
    if (routes.size() < 2) continue;
    std::shuffle(routes.begin(), routes.end(), rng);
    routes[1].copy = 1;
    for (std::size_t i = 2; i < routes.size(); ++i) routes[i].copy = std::bernoulli_distribution(0.5)(rng) ? 1 : 0;
    try {
      return split_state(m, m.states()[target], 2, routes);
    } catch (const Error&) {
    }
  }
  throw Error(ErrorCode::InvalidArgument, "no splittable state");
}

inline double max_word_gap(const FinitePredictiveModel& a, const FinitePredictiveModel& b, std::size_t max_len) {
  const Distribution pa = stationary(a), pb = stationary(b);
  double gap = 0.0;
  for (std::size_t len = 1; len <= max_len; ++len)
    for (const auto& w : all_words(a.num_symbols(), len))
      gap = std::max(gap, std::abs(word_probability(a, w, pa) - word_probability(b, w, pb)));
  return gap;
}

}  // namespace machina::testing
