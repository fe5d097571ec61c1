#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "machina/hmm.hpp"
#include "machina/linalg.hpp"
#include "machina/majorization.hpp"
#include "machina/minimize.hpp"

namespace machina {

inline constexpr double kQuantumTol = 1e-9;  // norms, completeness, phase matching
inline constexpr double kRankTol = 1e-10;
inline constexpr double kEigenClipTol = 1e-10;

/// Pure-state quantum model: n labelled unit vectors in C^d and one Kraus
/// operator per symbol. Validated on construction for unit norms,
/// completeness and unifilarity (images proportional to some state up to a
/// global phase).
class PureStateQuantumModel {
public:
  static PureStateQuantumModel build(std::size_t dim, std::vector<std::string> labels,
                                     std::vector<std::string> alphabet, std::vector<ComplexVector> states,
                                     std::vector<ComplexMatrix> kraus);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t num_states() const noexcept { return labels_.size(); }
  std::size_t num_symbols() const noexcept { return alphabet_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<std::string>& alphabet() const noexcept { return alphabet_; }
  const std::vector<ComplexVector>& states() const noexcept { return states_; }
  const std::vector<ComplexMatrix>& kraus() const noexcept { return kraus_; }

private:
  PureStateQuantumModel() = default;

  std::size_t dim_ = 0;
  std::vector<std::string> labels_;
  std::vector<std::string> alphabet_;
  std::vector<ComplexVector> states_;
  std::vector<ComplexMatrix> kraus_;
};

/// max-abs entry of sum_x K^dagger K - I.
double completeness_residual(const std::vector<ComplexMatrix>& kraus);

/// Hermitian matrix of state overlaps <eta_i|eta_j>.
class GramMatrix {
public:
  /// Checks unit diagonal, Hermiticity and eigenvalues >= -1e-10.
  static GramMatrix validate(ComplexMatrix values);
  static GramMatrix of_states(const std::vector<ComplexVector>& states);

  const ComplexMatrix& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.rows(); }
  complex operator()(std::size_t i, std::size_t j) const { return values_(i, j); }

private:
  explicit GramMatrix(ComplexMatrix v) : values_(std::move(v)) {}
  ComplexMatrix values_;
};

enum class GramStart { Identity, AllOnes };

struct GramSolution {
  GramMatrix gram;
  std::size_t iterations;
};

/// Iterates G <- Phi(G), Phi(G)_{s,t} = sum_x sqrt(P(x|s) P(x|t)) G_{f(s,x), f(t,x)},
/// until the largest update is below tol.
GramSolution gram_fixed_point(const FinitePredictiveModel& m, double tol = 1e-13, std::size_t max_iter = 100'000,
                              GramStart start = GramStart::Identity);

struct Embedding {
  std::size_t dim;
  std::vector<ComplexVector> states;  // n vectors in C^dim
  std::vector<double> eigenvalues;    // of the Gram matrix, descending (all n)
};

/// Realizes vectors with the prescribed overlaps: state s is column s of
/// Lambda_d^{1/2} U_d^dagger for G = U Lambda U^dagger truncated at rank_tol.
Embedding embed_states(const GramMatrix& g, double rank_tol = kRankTol);

/// q-machine of a (preferably minimal) model. Non-minimal inputs still
/// build; a note is appended to `warnings` when given.
PureStateQuantumModel build_qmachine(const FinitePredictiveModel& m, std::vector<std::string>* warnings = nullptr);

/// rho_pi = sum_s pi_s |eta_s><eta_s|.
ComplexMatrix stationary_density(const PureStateQuantumModel& q, const Distribution& pi);

/// Eigenvalues of rho, descending, clipped at zero and zero-padded to pad_to_n.
Distribution spectrum(const ComplexMatrix& rho, std::size_t pad_to_n);

/// Unifilar classical model read off the quantum one.
FinitePredictiveModel classical_equivalent(const PureStateQuantumModel& q);

/// Stationary spectrum of q, padded to the number of states.
Distribution stationary_spectrum(const PureStateQuantumModel& q);

double vn_renyi(const PureStateQuantumModel& q, double alpha);

Word parse_word(const PureStateQuantumModel& q, std::string_view text);
double quantum_word_probability(const PureStateQuantumModel& q, const Word& w);
double quantum_word_probability(const PureStateQuantumModel& q, const Word& w, const ComplexMatrix& rho);

struct AdvantageReport {
  Distribution spectrum;    // lambda, padded to n
  Distribution classical;   // pi of the classical equivalent
  Verdict verdict;          // compare(spectrum, classical)
  std::vector<EntropyRow> entropies;  // reference = S_alpha, other = H_alpha

  bool holds() const noexcept { return verdict == Verdict::StrictlyMajorizes || verdict == Verdict::Equivalent; }
  bool entropy_bound_holds(double tol = 1e-9) const noexcept {
    for (const auto& r : entropies)
      if (r.reference > r.other + tol) return false;
    return true;
  }
};

AdvantageReport strong_advantage_report(const PureStateQuantumModel& q, double tol = kCompareTol);

// Quantum model file I/O.
PureStateQuantumModel parse_quantum_model(std::string_view text);
std::string serialize_quantum_model(const PureStateQuantumModel& q);

}  // namespace machina
