#include "machina/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include "machina/error.hpp"

namespace machina {

namespace {

// Groups items by a tolerant equality predicate. Group ids follow first
// appearance, so results are deterministic in state order.
template <typename Same>
std::vector<std::size_t> group_by(std::size_t n, Same same) {
  std::vector<std::size_t> group(n, 0);
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t g = reps.size();
    for (std::size_t r = 0; r < reps.size(); ++r)
      if (same(reps[r], i)) {
        g = r;
        break;
      }
    if (g == reps.size()) reps.push_back(i);
    group[i] = g;
  }
  return group;
}

StatePartition to_partition(const std::vector<std::size_t>& block_of) {
  StatePartition p;
  p.block_of = block_of;
  const std::size_t count = block_of.empty() ? 0 : *std::max_element(block_of.begin(), block_of.end()) + 1;
  p.blocks.resize(count);
  for (std::size_t s = 0; s < block_of.size(); ++s) p.blocks[block_of[s]].push_back(s);
  return p;
}

}  // namespace

StatePartition refine_partition(const FinitePredictiveModel& m, double tol) {
  const std::size_t n = m.num_states();
  const std::size_t k = m.num_symbols();
  auto emits = [&](std::size_t s, std::size_t x) { return m.emission(s, x) > tol; };

  std::vector<std::size_t> block = group_by(n, [&](std::size_t a, std::size_t b) {
    for (std::size_t x = 0; x < k; ++x)
      if (std::abs(m.emission(a, x) - m.emission(b, x)) > tol) return false;
    return true;
  });

  // Each pass splits blocks by (current block, successor block per emitted
  // symbol). The block count only grows, so at most n passes.
  for (std::size_t pass = 0; pass < n; ++pass) {
    std::vector<std::size_t> next = group_by(n, [&](std::size_t a, std::size_t b) {
      if (block[a] != block[b]) return false;
      for (std::size_t x = 0; x < k; ++x) {
        if (!emits(a, x) || !emits(b, x)) continue;
        if (block[m.transition(a, x)->next] != block[m.transition(b, x)->next]) return false;
      }
      return true;
    });
    const bool stable = *std::max_element(next.begin(), next.end()) == *std::max_element(block.begin(), block.end());
    block = std::move(next);
    if (stable) break;
  }
  return to_partition(block);
}

FinitePredictiveModel merge(const FinitePredictiveModel& m, double tol) {
  const StatePartition part = refine_partition(m, tol);
  if (part.all_singletons()) return m;

  std::vector<std::size_t> rep(part.size());
  std::vector<std::string> names(part.size());
  for (std::size_t b = 0; b < part.size(); ++b) {
    const auto& members = part.blocks[b];
    rep[b] = *std::min_element(members.begin(), members.end(),
                               [&](std::size_t i, std::size_t j) { return m.states()[i] < m.states()[j]; });
    names[b] = m.states()[rep[b]];
  }

  std::vector<TransitionSpec> specs;
  for (std::size_t b = 0; b < part.size(); ++b)
    for (std::size_t x = 0; x < m.num_symbols(); ++x)
      if (const auto& t = m.transition(rep[b], x); t && t->prob > tol)
        specs.push_back({names[b], m.alphabet()[x], t->prob, names[part.block_of[t->next]]});
  return FinitePredictiveModel::build(names, m.alphabet(), specs);
}

bool is_epsilon_machine(const FinitePredictiveModel& m, double tol) {
  return refine_partition(m, tol).all_singletons();
}

bool isomorphic(const FinitePredictiveModel& a, const FinitePredictiveModel& b, double tol) {
  if (a.num_states() != b.num_states() || a.alphabet() != b.alphabet()) return false;
  const std::size_t n = a.num_states();
  // Irreducible + unifilar: fixing the image of state 0 determines the map.
  for (std::size_t start = 0; start < n; ++start) {
    std::vector<std::optional<std::size_t>> to_b(n), to_a(n);
    std::vector<std::size_t> queue{0};
    to_b[0] = start;
    to_a[start] = 0;
    bool ok = true;
    for (std::size_t head = 0; ok && head < queue.size(); ++head) {
      const std::size_t sa = queue[head];
      const std::size_t sb = *to_b[sa];
      for (std::size_t x = 0; ok && x < a.num_symbols(); ++x) {
        const auto& ta = a.transition(sa, x);
        const auto& tb = b.transition(sb, x);
        const double pa = ta ? ta->prob : 0.0;
        const double pb = tb ? tb->prob : 0.0;
        if (std::abs(pa - pb) > tol) {
          ok = false;
          break;
        }
        if (!ta || !tb) continue;
        const std::size_t na = ta->next, nb = tb->next;
        if (!to_b[na] && !to_a[nb]) {
          to_b[na] = nb;
          to_a[nb] = na;
          queue.push_back(na);
        } else if (to_b[na] != nb || to_a[nb] != na) {
          ok = false;
        }
      }
    }
    if (ok && queue.size() == n) return true;
  }
  return false;
}

MinimalityReport strong_minimality_report(const FinitePredictiveModel& m, double tol) {
  FinitePredictiveModel machine = merge(m);
  StatePartition partition = refine_partition(m);
  Distribution machine_pi = stationary(machine);
  Distribution model_pi = stationary(m);
  const Verdict verdict = compare(machine_pi, model_pi, tol);
  std::vector<EntropyRow> rows;
  for (double alpha : standard_alphas())
    rows.push_back({alpha, renyi_entropy(machine_pi, alpha), renyi_entropy(model_pi, alpha)});
  return MinimalityReport{std::move(machine), std::move(partition), std::move(machine_pi), std::move(model_pi),
                          verdict, std::move(rows)};
}

}  // namespace machina
