#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "machina/linalg.hpp"
#include "machina/majorization.hpp"

namespace machina {

inline constexpr double kStochasticTol = 1e-9;
inline constexpr double kPositiveTol = 1e-12;  // edge threshold for connectivity

using Word = std::vector<std::size_t>;  // symbol indices

struct Transition {
  double prob;
  std::size_t next;

  bool operator==(const Transition&) const = default;
};

/// Transition line as written in a model file, by name.
struct TransitionSpec {
  std::string from;
  std::string symbol;
  double prob;
  std::string to;
};

/// Unifilar hidden Markov model: each (state, symbol) has at most one
/// successor. Instances are validated on construction (row-stochastic,
/// irreducible) and immutable afterwards.
class FinitePredictiveModel {
public:
  static FinitePredictiveModel build(std::vector<std::string> states, std::vector<std::string> alphabet,
                                     const std::vector<TransitionSpec>& transitions);

  std::size_t num_states() const noexcept { return states_.size(); }
  std::size_t num_symbols() const noexcept { return alphabet_.size(); }
  const std::vector<std::string>& states() const noexcept { return states_; }
  const std::vector<std::string>& alphabet() const noexcept { return alphabet_; }

  std::optional<std::size_t> state_index(std::string_view name) const;
  std::optional<std::size_t> symbol_index(std::string_view name) const;

  /// Absent when the state never emits the symbol.
  const std::optional<Transition>& transition(std::size_t state, std::size_t symbol) const {
    return table_[state * alphabet_.size() + symbol];
  }
  double emission(std::size_t state, std::size_t symbol) const {
    const auto& t = transition(state, symbol);
    return t ? t->prob : 0.0;
  }

  /// T^(x) as a dense matrix.
  RealMatrix symbol_matrix(std::size_t symbol) const;
  /// T = sum_x T^(x).
  RealMatrix transition_matrix() const;

  std::vector<TransitionSpec> transition_specs() const;

private:
  FinitePredictiveModel() = default;

  std::vector<std::string> states_;
  std::vector<std::string> alphabet_;
  std::vector<std::optional<Transition>> table_;  // states x symbols
};

/// Same labels, same successors, probabilities within tol.
bool structurally_equal(const FinitePredictiveModel& a, const FinitePredictiveModel& b, double tol = 1e-11);

/// Strong connectivity of the positive-probability transition graph.
bool is_irreducible(std::size_t n, const std::vector<std::vector<std::size_t>>& adjacency);

// Model file I/O. parse_model reports the offending line for parse errors.
FinitePredictiveModel parse_model(std::string_view text);
std::string serialize_model(const FinitePredictiveModel& m);

/// Stationary pi with pi^T T = pi^T. Dense solve with a normalization row,
/// power iteration on the lazy chain as fallback.
Distribution stationary(const FinitePredictiveModel& m);

/// Splits a word into symbol indices: whitespace-separated tokens, or one
/// character per symbol when every symbol is a single character.
Word parse_word(const FinitePredictiveModel& m, std::string_view text);
std::string format_word(const std::vector<std::string>& alphabet, const Word& w);

/// P(w) from the stationary state, or from a point mass on `start`.
double word_probability(const FinitePredictiveModel& m, const Word& w,
                        std::optional<std::size_t> start = std::nullopt);
/// Same, reusing a precomputed stationary distribution.
double word_probability(const FinitePredictiveModel& m, const Word& w, const Distribution& initial);

/// All |A|^length words in lexicographic (alphabet-order) sequence.
std::vector<Word> all_words(std::size_t num_symbols, std::size_t length);

double renyi_memory(const FinitePredictiveModel& m, double alpha);

struct RouteEntry {
  std::string source;  // state emitting into the target (may be the target)
  std::string symbol;
  std::size_t copy;    // index into the copies
};

/// Replaces `target` by k copies with target's outgoing distribution.
/// The router assigns every incoming edge of target to a copy; self-loops of
/// the target become edges between copies using the same assignment.
/// copy_names defaults to "<target>_1" ... "<target>_k".
FinitePredictiveModel split_state(const FinitePredictiveModel& m, std::string_view target, std::size_t k,
                                  const std::vector<RouteEntry>& router,
                                  std::vector<std::string> copy_names = {});

}  // namespace machina
