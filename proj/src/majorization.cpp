#include "machina/majorization.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "machina/error.hpp"
#include "machina/format.hpp"

namespace machina {

Distribution Distribution::validate(std::span<const double> raw) {
  std::vector<double> probs(raw.begin(), raw.end());
  if (probs.empty()) throw Error(ErrorCode::NotNormalized, "empty distribution");
  double sum = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    double& p = probs[i];
    if (!std::isfinite(p)) throw Error(ErrorCode::NegativeEntry, "non-finite entry at index " + std::to_string(i));
    if (p < -kClipTol)
      throw Error(ErrorCode::NegativeEntry,
                  "entry " + std::to_string(i) + " = " + format_number(p) + " is negative");
    if (p < 0.0) p = 0.0;
    sum += p;
  }
  if (std::abs(sum - 1.0) > kNormTol)
    throw Error(ErrorCode::NotNormalized, "entries sum to " + format_number(sum));
  return Distribution(std::move(probs));
}

Distribution Distribution::point_mass(std::size_t n, std::size_t at) {
  std::vector<double> p(n, 0.0);
  p.at(at) = 1.0;
  return Distribution(std::move(p));
}

Distribution Distribution::uniform(std::size_t n) {
  return Distribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

std::vector<double> Distribution::sorted_descending() const {
  std::vector<double> s = probs_;
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

Distribution pad_to(const Distribution& d, std::size_t n) {
  if (n < d.size())
    throw Error(ErrorCode::TooSmall, "cannot pad length " + std::to_string(d.size()) +
                                         " down to " + std::to_string(n));
  std::vector<double> p = d.probs();
  p.resize(n, 0.0);
  return Distribution::validate(p);
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::StrictlyMajorizes: return "StrictlyMajorizes";
    case Verdict::StrictlyMajorizedBy: return "StrictlyMajorizedBy";
    case Verdict::Equivalent: return "Equivalent";
    case Verdict::Incomparable: return "Incomparable";
  }
  return "Incomparable";
}

namespace {

std::vector<double> sorted_padded(const Distribution& d, std::size_t n) {
  std::vector<double> s = d.sorted_descending();
  s.resize(n, 0.0);
  return s;
}

Verdict verdict_from(bool p_ge_q, bool q_ge_p) {
  if (p_ge_q && q_ge_p) return Verdict::Equivalent;
  if (p_ge_q) return Verdict::StrictlyMajorizes;
  if (q_ge_p) return Verdict::StrictlyMajorizedBy;
  return Verdict::Incomparable;
}

}  // namespace

Verdict compare(const Distribution& p, const Distribution& q, double tol) {
  const std::size_t n = std::max(p.size(), q.size());
  const auto ps = sorted_padded(p, n);
  const auto qs = sorted_padded(q, n);
  bool p_ge_q = true, q_ge_p = true;
  double sp = 0.0, sq = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sp += ps[k];
    sq += qs[k];
    if (sp < sq - tol) p_ge_q = false;
    if (sq < sp - tol) q_ge_p = false;
  }
  return verdict_from(p_ge_q, q_ge_p);
}

bool majorizes(const Distribution& p, const Distribution& q, double tol) {
  const Verdict v = compare(p, q, tol);
  return v == Verdict::StrictlyMajorizes || v == Verdict::Equivalent;
}

LorenzCurve lorenz_curve(const Distribution& d) {
  LorenzCurve curve;
  curve.reserve(d.size() + 1);
  curve.push_back({0, 0.0});
  double cum = 0.0;
  const auto s = d.sorted_descending();
  for (std::size_t k = 0; k < s.size(); ++k) {
    cum += s[k];
    curve.push_back({k + 1, cum});
  }
  return curve;
}

Verdict compare_lorenz(const LorenzCurve& a, const LorenzCurve& b, double tol) {
  // A shorter curve continues flat at its final height, which is exactly the
  // zero-padding convention.
  const std::size_t n = std::max(a.size(), b.size());
  auto at = [](const LorenzCurve& c, std::size_t k) { return k < c.size() ? c[k].cum : c.back().cum; };
  bool a_ge_b = true, b_ge_a = true;
  for (std::size_t k = 0; k < n; ++k) {
    if (at(a, k) < at(b, k) - tol) a_ge_b = false;
    if (at(b, k) < at(a, k) - tol) b_ge_a = false;
  }
  return verdict_from(a_ge_b, b_ge_a);
}

std::string lorenz_csv(const LorenzCurve& curve) {
  std::string out = "k,cumulative\n";
  for (const auto& pt : curve) out += std::to_string(pt.k) + "," + format_number(pt.cum, 12) + "\n";
  return out;
}

double renyi_entropy(const Distribution& d, double alpha) {
  if (!(alpha >= 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be nonnegative");
  const auto& p = d.probs();
  if (alpha == 0.0) {
    const auto support = std::count_if(p.begin(), p.end(), [](double x) { return x > kSupportTol; });
    return std::log2(static_cast<double>(support));
  }
  if (std::isinf(alpha)) return -std::log2(*std::max_element(p.begin(), p.end()));
  if (alpha == 1.0) {
    double h = 0.0;
    for (double x : p)
      if (x > 0.0) h -= x * std::log2(x);
    return h;
  }
  double power_sum = 0.0;
  for (double x : p)
    if (x > kSupportTol) power_sum += std::pow(x, alpha);
  return std::log2(power_sum) / (1.0 - alpha);
}

double renyi_negentropy(const Distribution& d, double alpha) {
  return std::log2(static_cast<double>(d.size())) - renyi_entropy(d, alpha);
}

const std::vector<double>& standard_alphas() {
  static const std::vector<double> grid{0.0, 0.5, 1.0, 2.0, kAlphaInf};
  return grid;
}

Distribution apply_transfer(const Distribution& d, const TransferOp& t) {
  const std::size_t n = d.size();
  if (t.donor >= n || t.recipient >= n || t.donor == t.recipient)
    throw Error(ErrorCode::IllegalTransfer, "transfer indices out of range");
  const double gap = d[t.donor] - d[t.recipient];
  if (!(gap > 0.0) || !(t.amount > 0.0) || !(t.amount < gap))
    throw Error(ErrorCode::IllegalTransfer,
                "need p_i > p_j and 0 < eps < p_i - p_j (gap " + format_number(gap) + ", eps " +
                    format_number(t.amount) + ")");
  std::vector<double> p = d.probs();
  p[t.donor] -= t.amount;
  p[t.recipient] += t.amount;
  return Distribution::validate(p);
}

std::vector<TransferOp> transfer_chain(const Distribution& p, const Distribution& q, double tol) {
  if (!majorizes(p, q, tol))
    throw Error(ErrorCode::NotComparable, "source does not majorize target");
  const std::size_t n = std::max(p.size(), q.size());
  auto x = sorted_padded(p, n);
  const auto y = sorted_padded(q, n);
  constexpr double match = 1e-15;

  std::vector<TransferOp> chain;
  // Each step pins one more coordinate to its target; at most n steps.
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t j = n;
    for (std::size_t i = n; i-- > 0;)
      if (x[i] - y[i] > match) {
        j = i;
        break;
      }
    if (j == n) break;
    std::size_t k = n;
    for (std::size_t i = j + 1; i < n; ++i)
      if (y[i] - x[i] > match) {
        k = i;
        break;
      }
    if (k == n) break;  // remaining mismatch is round-off
    const double give = x[j] - y[j];
    const double take = y[k] - x[k];
    const double amount = std::min(give, take);
    chain.push_back({j, k, amount});
    if (give <= take) {
      x[j] = y[j];
      x[k] += amount;
    } else {
      x[k] = y[k];
      x[j] -= amount;
    }
  }
  return chain;
}

std::vector<double> replay_chain(const Distribution& p, std::span<const TransferOp> chain, std::size_t n) {
  auto x = sorted_padded(p, std::max(n, p.size()));
  for (const auto& t : chain) {
    x.at(t.donor) -= t.amount;
    x.at(t.recipient) += t.amount;
  }
  return x;
}

RealMatrix doubly_stochastic_from_chain(const Distribution& source, std::span<const TransferOp> chain,
                                        std::size_t n) {
  n = std::max(n, source.size());
  auto x = sorted_padded(source, n);
  RealMatrix d = RealMatrix::identity(n);
  for (const auto& t : chain) {
    if (t.donor >= n || t.recipient >= n)
      throw Error(ErrorCode::IllegalTransfer, "transfer index exceeds dimension");
    const double gap = x[t.donor] - x[t.recipient];
    if (!(gap > 0.0) || !(t.amount > 0.0) || !(t.amount < gap))
      throw Error(ErrorCode::IllegalTransfer, "chain is not legal from the given source");
    const double lambda = t.amount / gap;
    RealMatrix step = RealMatrix::identity(n);
    step(t.donor, t.donor) = step(t.recipient, t.recipient) = 1.0 - lambda;
    step(t.donor, t.recipient) = step(t.recipient, t.donor) = lambda;
    d = step * d;
    x[t.donor] -= t.amount;
    x[t.recipient] += t.amount;
  }
  return d;
}

}  // namespace machina
