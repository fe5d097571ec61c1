#pragma once

#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "machina/linalg.hpp"

namespace machina {

inline constexpr double kNormTol = 1e-9;       // |sum - 1|
inline constexpr double kClipTol = 1e-12;      // negatives above -kClipTol are clipped
inline constexpr double kSupportTol = 1e-12;   // "nonzero" for support counting
inline constexpr double kCompareTol = 1e-9;    // prefix-sum slack in compare()
inline constexpr double kAlphaInf = std::numeric_limits<double>::infinity();

/// A probability vector. Construction goes through validate(), so every
/// instance has nonnegative entries summing to one.
class Distribution {
public:
  static Distribution validate(std::span<const double> raw);
  static Distribution validate(std::initializer_list<double> raw) {
    return validate(std::span<const double>(raw.begin(), raw.size()));
  }
  static Distribution point_mass(std::size_t n = 1, std::size_t at = 0);
  static Distribution uniform(std::size_t n);

  const std::vector<double>& probs() const noexcept { return probs_; }
  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }

  std::vector<double> sorted_descending() const;

  bool operator==(const Distribution&) const = default;

private:
  explicit Distribution(std::vector<double> p) : probs_(std::move(p)) {}
  std::vector<double> probs_;
};

/// Appends zero-probability events until the vector has length n.
Distribution pad_to(const Distribution& d, std::size_t n);

enum class Verdict { StrictlyMajorizes, StrictlyMajorizedBy, Equivalent, Incomparable };

std::string_view to_string(Verdict v);

/// Hardy-Littlewood-Polya comparison of sorted prefix sums (shorter vector
/// zero-padded). Prefix sums within `tol` count as >= in both directions.
Verdict compare(const Distribution& p, const Distribution& q, double tol = kCompareTol);

/// True iff compare() says p majorizes q (strictly or equivalently).
bool majorizes(const Distribution& p, const Distribution& q, double tol = kCompareTol);

struct LorenzPoint {
  std::size_t k;
  double cum;
};
using LorenzCurve = std::vector<LorenzPoint>;

LorenzCurve lorenz_curve(const Distribution& d);

/// Verdict from pointwise containment of Lorenz curves. Independent of
/// compare(); the two must agree.
Verdict compare_lorenz(const LorenzCurve& a, const LorenzCurve& b, double tol = kCompareTol);

/// `k,cumulative` CSV, 12 significant digits, LF line endings.
std::string lorenz_csv(const LorenzCurve& curve);

/// Renyi entropy in bits. alpha = 0, 1 and kAlphaInf use the limiting forms.
double renyi_entropy(const Distribution& d, double alpha);
double renyi_negentropy(const Distribution& d, double alpha);

/// The alpha grid every report tabulates: 0, 1/2, 1, 2, inf.
const std::vector<double>& standard_alphas();

struct TransferOp {
  std::size_t donor;
  std::size_t recipient;
  double amount;
};

/// Moves `amount` from donor to recipient. Requires p_donor > p_recipient and
/// 0 < amount < p_donor - p_recipient.
Distribution apply_transfer(const Distribution& d, const TransferOp& t);

/// T-transform chain taking sorted(p) to sorted(q), both padded to a common
/// length. Indices address positions of the sorted, padded vector.
std::vector<TransferOp> transfer_chain(const Distribution& p, const Distribution& q,
                                       double tol = kCompareTol);

/// Replays a chain on sorted(pad(p, n)) without renormalizing.
std::vector<double> replay_chain(const Distribution& p, std::span<const TransferOp> chain,
                                 std::size_t n);

/// Product of the 2x2-block T-transforms [[1-l, l], [l, 1-l]] realized by the
/// chain when started from sorted(pad(source, n)). Each block's lambda is
/// amount / (x_donor - x_recipient) at the moment it is applied.
RealMatrix doubly_stochastic_from_chain(const Distribution& source,
                                        std::span<const TransferOp> chain, std::size_t n);

}  // namespace machina
