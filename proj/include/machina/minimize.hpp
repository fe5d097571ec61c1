#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "machina/hmm.hpp"
#include "machina/majorization.hpp"

namespace machina {

inline constexpr double kEquivalenceTol = 1e-9;

struct StatePartition {
  std::vector<std::vector<std::size_t>> blocks;  // state indices, ascending
  std::vector<std::size_t> block_of;             // per state

  std::size_t size() const noexcept { return blocks.size(); }
  bool all_singletons() const noexcept { return blocks.size() == block_of.size(); }
};

/// Coarsest partition whose blocks agree on per-symbol emission probabilities
/// (within tol) and send each emitted symbol into a common block. Moore-style
/// signature refinement iterated to a fixed point.
StatePartition refine_partition(const FinitePredictiveModel& m, double tol = kEquivalenceTol);

/// Quotient by refine_partition. Each merged state is named after its
/// lexicographically smallest member and inherits that member's transitions.
FinitePredictiveModel merge(const FinitePredictiveModel& m, double tol = kEquivalenceTol);

bool is_epsilon_machine(const FinitePredictiveModel& m, double tol = kEquivalenceTol);

/// Unifilar isomorphism up to state relabeling: same alphabet, and a
/// bijection of states preserving successors and emission probabilities.
bool isomorphic(const FinitePredictiveModel& a, const FinitePredictiveModel& b, double tol = 1e-9);

struct EntropyRow {
  double alpha;
  double reference;  // epsilon-machine (or quantum) memory
  double other;      // the compared model
};

struct MinimalityReport {
  FinitePredictiveModel machine;
  StatePartition partition;
  Distribution machine_pi;
  Distribution model_pi;
  Verdict verdict;  // compare(machine_pi, model_pi)
  std::vector<EntropyRow> entropies;

  bool holds() const noexcept { return verdict == Verdict::StrictlyMajorizes || verdict == Verdict::Equivalent; }
};

/// Compares a model against its epsilon-machine: the machine's stationary
/// distribution must majorize the model's.
MinimalityReport strong_minimality_report(const FinitePredictiveModel& m, double tol = kCompareTol);

}  // namespace machina
