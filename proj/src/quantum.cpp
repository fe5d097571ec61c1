#include "machina/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <sstream>

#include "machina/error.hpp"
#include "machina/format.hpp"

namespace machina {

namespace {

std::optional<std::size_t> find_name(const std::vector<std::string>& names, std::string_view name) {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names.begin());
}

struct Match {
  std::size_t count = 0;
  std::size_t first = 0;
};

// States whose normalized overlap with `image` is one up to a global phase.
Match phase_matches(const std::vector<ComplexVector>& states, const ComplexVector& image, double image_norm) {
  Match m;
  for (std::size_t s = 0; s < states.size(); ++s) {
    const double fidelity = std::abs(inner(states[s], image)) / image_norm;
    if (fidelity > 1.0 - kQuantumTol) {
      if (m.count == 0) m.first = s;
      ++m.count;
    }
  }
  return m;
}

}  // namespace

double completeness_residual(const std::vector<ComplexMatrix>& kraus) {
  if (kraus.empty()) return INFINITY;
  const std::size_t d = kraus.front().cols();
  ComplexMatrix sum(d, d);
  for (const auto& k : kraus) sum = sum + adjoint(k) * k;
  return max_abs_diff(sum, ComplexMatrix::identity(d));
}

PureStateQuantumModel PureStateQuantumModel::build(std::size_t dim, std::vector<std::string> labels,
                                                   std::vector<std::string> alphabet,
                                                   std::vector<ComplexVector> states,
                                                   std::vector<ComplexMatrix> kraus) {
  if (dim == 0) throw Error(ErrorCode::DimensionMismatch, "dimension must be positive");
  if (labels.empty()) throw Error(ErrorCode::SyntaxError, "model has no states");
  if (alphabet.empty()) throw Error(ErrorCode::SyntaxError, "model has an empty alphabet");
  if (labels.size() != states.size()) throw Error(ErrorCode::DimensionMismatch, "one vector per state label");
  if (alphabet.size() != kraus.size()) throw Error(ErrorCode::DimensionMismatch, "one Kraus operator per symbol");
  for (const auto* names : {&labels, &alphabet}) {
    std::set<std::string> seen;
    for (const auto& n : *names)
      if (!seen.insert(n).second) throw Error(ErrorCode::SyntaxError, "duplicate label '" + n + "'");
  }
  for (std::size_t s = 0; s < states.size(); ++s) {
    if (states[s].size() != dim)
      throw Error(ErrorCode::DimensionMismatch, "state '" + labels[s] + "' has the wrong dimension");
    const double nrm = norm(states[s]);
    if (std::abs(nrm - 1.0) > kQuantumTol)
      throw Error(ErrorCode::NotUnitNorm, "state '" + labels[s] + "' has norm " + format_number(nrm));
  }
  for (std::size_t x = 0; x < kraus.size(); ++x)
    if (kraus[x].rows() != dim || kraus[x].cols() != dim)
      throw Error(ErrorCode::DimensionMismatch, "Kraus operator '" + alphabet[x] + "' is not dim x dim");

  const double residual = completeness_residual(kraus);
  if (residual > kQuantumTol)
    throw Error(ErrorCode::CompletenessViolation, "sum K^dagger K deviates from I by " + format_number(residual));

  for (std::size_t s = 0; s < states.size(); ++s)
    for (std::size_t x = 0; x < kraus.size(); ++x) {
      const ComplexVector image = machina::apply(kraus[x], states[s]);
      const double nrm = norm(image);
      if (nrm <= kQuantumTol) continue;
      if (phase_matches(states, image, nrm).count == 0)
        throw Error(ErrorCode::AmbiguousSuccessor,
                    "K(" + alphabet[x] + ") maps state '" + labels[s] + "' outside the state set");
    }

  PureStateQuantumModel q;
  q.dim_ = dim;
  q.labels_ = std::move(labels);
  q.alphabet_ = std::move(alphabet);
  q.states_ = std::move(states);
  q.kraus_ = std::move(kraus);
  return q;
}

// ---------------------------------------------------------------------------
// Gram matrix

GramMatrix GramMatrix::validate(ComplexMatrix values) {
  if (values.rows() != values.cols()) throw Error(ErrorCode::DimensionMismatch, "Gram matrix must be square");
  for (std::size_t i = 0; i < values.rows(); ++i)
    if (std::abs(values(i, i) - 1.0) > kQuantumTol) throw Error(ErrorCode::NotUnitNorm, "Gram diagonal must be 1");
  if (hermiticity_defect(values) > kQuantumTol) throw Error(ErrorCode::NotHermitian, "Gram matrix is not Hermitian");
  const auto eig = hermitian_eigen(values);
  if (!eig.values.empty() && eig.values.back() < -kRankTol)
    throw Error(ErrorCode::NotPSD, "Gram eigenvalue " + format_number(eig.values.back()) + " is negative");
  return GramMatrix(std::move(values));
}

GramMatrix GramMatrix::of_states(const std::vector<ComplexVector>& states) {
  ComplexMatrix g(states.size(), states.size());
  for (std::size_t i = 0; i < states.size(); ++i)
    for (std::size_t j = 0; j < states.size(); ++j) g(i, j) = inner(states[i], states[j]);
  return validate(std::move(g));
}

GramSolution gram_fixed_point(const FinitePredictiveModel& m, double tol, std::size_t max_iter, GramStart start) {
  const std::size_t n = m.num_states();
  const std::size_t k = m.num_symbols();
  RealMatrix g(n, n, start == GramStart::AllOnes ? 1.0 : 0.0);
  for (std::size_t i = 0; i < n; ++i) g(i, i) = 1.0;

  // sqrt-weights and successors, cached per (state, symbol).
  std::vector<double> w(n * k, 0.0);
  std::vector<std::size_t> succ(n * k, 0);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t x = 0; x < k; ++x)
      if (const auto& t = m.transition(s, x)) {
        w[s * k + x] = std::sqrt(t->prob);
        succ[s * k + x] = t->next;
      }

  for (std::size_t iter = 1; iter <= max_iter; ++iter) {
    RealMatrix next(n, n);
    double delta = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      next(a, a) = 1.0;
      for (std::size_t b = a + 1; b < n; ++b) {
        double acc = 0.0;
        for (std::size_t x = 0; x < k; ++x) {
          const double wa = w[a * k + x], wb = w[b * k + x];
          if (wa == 0.0 || wb == 0.0) continue;
          acc += wa * wb * g(succ[a * k + x], succ[b * k + x]);
        }
        next(a, b) = next(b, a) = acc;
        delta = std::max(delta, std::abs(acc - g(a, b)));
      }
    }
    g = std::move(next);
    if (delta < tol) {
      ComplexMatrix c(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) c(i, j) = g(i, j);
      return GramSolution{GramMatrix::validate(std::move(c)), iter};
    }
  }
  throw Error(ErrorCode::NoConvergence, "Gram iteration exceeded " + std::to_string(max_iter) + " steps");
}

Embedding embed_states(const GramMatrix& g, double rank_tol) {
  const std::size_t n = g.size();
  const auto eig = hermitian_eigen(g.values());
  if (!eig.values.empty() && eig.values.back() < -kRankTol)
    throw Error(ErrorCode::NotPSD, "Gram matrix has a negative eigenvalue");
  std::size_t d = 0;
  while (d < n && eig.values[d] > rank_tol) ++d;

  Embedding e;
  e.dim = d;
  e.eigenvalues = eig.values;
  e.states.assign(n, ComplexVector(d));
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t i = 0; i < d; ++i) e.states[s][i] = std::sqrt(eig.values[i]) * std::conj(eig.vectors(s, i));
  return e;
}

PureStateQuantumModel build_qmachine(const FinitePredictiveModel& m, std::vector<std::string>* warnings) {
  if (warnings && !is_epsilon_machine(m))
    warnings->push_back("input is not an epsilon-machine; equivalent states will share a quantum state");

  const auto solution = gram_fixed_point(m);
  const std::size_t n = m.num_states();
  const auto eig = hermitian_eigen(solution.gram.values());
  std::size_t d = 0;
  while (d < n && eig.values[d] > kRankTol) ++d;

  std::vector<ComplexVector> states(n, ComplexVector(d));
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t i = 0; i < d; ++i) states[s][i] = std::sqrt(eig.values[i]) * std::conj(eig.vectors(s, i));

  // Right pseudoinverse of the d x n state matrix S: S^+ = U_d Lambda_d^{-1/2}.
  ComplexMatrix pinv(n, d);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t i = 0; i < d; ++i) pinv(s, i) = eig.vectors(s, i) / std::sqrt(eig.values[i]);

  std::vector<ComplexMatrix> kraus;
  for (std::size_t x = 0; x < m.num_symbols(); ++x) {
    ComplexMatrix target(d, n);
    for (std::size_t s = 0; s < n; ++s)
      if (const auto& t = m.transition(s, x))
        for (std::size_t i = 0; i < d; ++i) target(i, s) = std::sqrt(t->prob) * states[t->next][i];
    kraus.push_back(target * pinv);
  }
  // Drop round-off in the norms before validation.
  for (auto& v : states) {
    const double nrm = norm(v);
    for (auto& c : v) c /= nrm;
  }
  return PureStateQuantumModel::build(d, m.states(), m.alphabet(), std::move(states), std::move(kraus));
}

// ---------------------------------------------------------------------------
// Stationary state and spectra

ComplexMatrix stationary_density(const PureStateQuantumModel& q, const Distribution& pi) {
  if (pi.size() != q.num_states())
    throw Error(ErrorCode::DimensionMismatch, "stationary distribution length differs from state count");
  ComplexMatrix rho(q.dim(), q.dim());
  for (std::size_t s = 0; s < q.num_states(); ++s) rho = rho + complex(pi[s]) * outer(q.states()[s], q.states()[s]);
  return rho;
}

Distribution spectrum(const ComplexMatrix& rho, std::size_t pad_to_n) {
  if (hermiticity_defect(rho) > kQuantumTol) throw Error(ErrorCode::NotHermitian, "density matrix is not Hermitian");
  auto values = hermitian_eigen(rho).values;
  for (double& v : values) {
    if (v < -kEigenClipTol) throw Error(ErrorCode::NotPSD, "density matrix eigenvalue " + format_number(v));
    if (v < kEigenClipTol) v = 0.0;
  }
  values.resize(std::max(pad_to_n, values.size()), 0.0);
  return Distribution::validate(values);
}

FinitePredictiveModel classical_equivalent(const PureStateQuantumModel& q) {
  std::vector<TransitionSpec> specs;
  for (std::size_t s = 0; s < q.num_states(); ++s)
    for (std::size_t x = 0; x < q.num_symbols(); ++x) {
      const ComplexVector image = machina::apply(q.kraus()[x], q.states()[s]);
      const double nrm = norm(image);
      if (nrm <= kQuantumTol) continue;
      const Match match = phase_matches(q.states(), image, nrm);
      if (match.count != 1)
        throw Error(ErrorCode::AmbiguousSuccessor, "K(" + q.alphabet()[x] + ") on state '" + q.labels()[s] + "' matches " +
                                                       std::to_string(match.count) + " states");
      specs.push_back({q.labels()[s], q.alphabet()[x], std::min(1.0, nrm * nrm), q.labels()[match.first]});
    }
  return FinitePredictiveModel::build(q.labels(), q.alphabet(), specs);
}

Distribution stationary_spectrum(const PureStateQuantumModel& q) {
  const Distribution pi = stationary(classical_equivalent(q));
  return spectrum(stationary_density(q, pi), q.num_states());
}

double vn_renyi(const PureStateQuantumModel& q, double alpha) { return renyi_entropy(stationary_spectrum(q), alpha); }

Word parse_word(const PureStateQuantumModel& q, std::string_view text) {
  // Reuse the classical tokenizer through a throwaway one-state model.
  std::vector<TransitionSpec> specs;
  const double share = 1.0 / static_cast<double>(q.num_symbols());
  for (const auto& a : q.alphabet()) specs.push_back({"s", a, share, "s"});
  const auto carrier = FinitePredictiveModel::build({"s"}, q.alphabet(), specs);
  return parse_word(carrier, text);
}

double quantum_word_probability(const PureStateQuantumModel& q, const Word& w, const ComplexMatrix& rho) {
  ComplexMatrix r = rho;
  for (const std::size_t x : w) {
    if (x >= q.num_symbols()) throw Error(ErrorCode::UnknownSymbol, "symbol index out of range");
    const auto& k = q.kraus()[x];
    r = k * r * adjoint(k);
  }
  return trace(r).real();
}

double quantum_word_probability(const PureStateQuantumModel& q, const Word& w) {
  const Distribution pi = stationary(classical_equivalent(q));
  return quantum_word_probability(q, w, stationary_density(q, pi));
}

AdvantageReport strong_advantage_report(const PureStateQuantumModel& q, double tol) {
  Distribution pi = stationary(classical_equivalent(q));
  Distribution lambda = spectrum(stationary_density(q, pi), q.num_states());
  const Verdict verdict = compare(lambda, pi, tol);
  std::vector<EntropyRow> rows;
  for (double alpha : standard_alphas()) rows.push_back({alpha, renyi_entropy(lambda, alpha), renyi_entropy(pi, alpha)});
  return AdvantageReport{std::move(lambda), std::move(pi), verdict, std::move(rows)};
}

// ---------------------------------------------------------------------------
// File I/O

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// "(re,im)" or a bare real.
bool parse_complex(const std::string& tok, complex& out) {
  if (tok.size() >= 2 && tok.front() == '(' && tok.back() == ')') {
    const auto inner_text = tok.substr(1, tok.size() - 2);
    const auto comma = inner_text.find(',');
    if (comma == std::string::npos) return false;
    double re = 0, im = 0;
    if (!parse_number(std::string(trim(inner_text.substr(0, comma))), re) ||
        !parse_number(std::string(trim(inner_text.substr(comma + 1))), im))
      return false;
    out = {re, im};
    return true;
  }
  double re = 0;
  if (!parse_number(tok, re)) return false;
  out = re;
  return true;
}

// Splits on whitespace but keeps "( a , b )" groups together.
std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (const char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if ((c == ' ' || c == '\t') && depth == 0) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
      continue;
    }
    if (c == ' ' || c == '\t') continue;
    cur += c;
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::string format_complex(complex z) {
  return "(" + format_number(z.real(), 12) + "," + format_number(z.imag(), 12) + ")";
}

}  // namespace

PureStateQuantumModel parse_quantum_model(std::string_view text) {
  bool saw_model = false;
  std::optional<std::size_t> dim;
  std::optional<std::vector<std::string>> alphabet;
  std::vector<std::string> labels;
  std::vector<ComplexVector> states;
  std::vector<std::pair<std::string, ComplexMatrix>> kraus_lines;
  std::vector<int> kraus_line_numbers;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw Error(ErrorCode::SyntaxError, "expected 'key: value'", line_no);
    const std::string key(trim(line.substr(0, colon)));
    const auto fields = tokenize(line.substr(colon + 1));

    if (key == "model") {
      if (fields.size() != 1 || fields[0] != "quantum")
        throw Error(ErrorCode::SyntaxError, "expected 'model: quantum'", line_no);
      saw_model = true;
    } else if (key == "dim") {
      double v = 0;
      if (fields.size() != 1 || !parse_number(fields[0], v) || v < 1 || v != std::floor(v))
        throw Error(ErrorCode::SyntaxError, "dim must be a positive integer", line_no);
      dim = static_cast<std::size_t>(v);
    } else if (key == "alphabet") {
      if (alphabet) throw Error(ErrorCode::SyntaxError, "alphabet declared twice", line_no);
      alphabet = fields;
    } else if (key == "state") {
      if (!dim) throw Error(ErrorCode::SyntaxError, "dim must precede states", line_no);
      if (fields.size() != *dim + 1)
        throw Error(ErrorCode::DimensionMismatch, "state needs a label and " + std::to_string(*dim) + " amplitudes",
                    line_no);
      ComplexVector v(*dim);
      for (std::size_t i = 0; i < *dim; ++i)
        if (!parse_complex(fields[i + 1], v[i]))
          throw Error(ErrorCode::SyntaxError, "bad amplitude '" + fields[i + 1] + "'", line_no);
      if (std::find(labels.begin(), labels.end(), fields[0]) != labels.end())
        throw Error(ErrorCode::SyntaxError, "duplicate state '" + fields[0] + "'", line_no);
      labels.push_back(fields[0]);
      states.push_back(std::move(v));
    } else if (key == "kraus") {
      if (!dim) throw Error(ErrorCode::SyntaxError, "dim must precede Kraus operators", line_no);
      if (fields.empty()) throw Error(ErrorCode::SyntaxError, "kraus needs a symbol", line_no);
      ComplexMatrix k(*dim, *dim);
      std::size_t row = 0, col = 0;
      for (std::size_t i = 1; i < fields.size(); ++i) {
        if (fields[i] == "/") {
          if (col != *dim) throw Error(ErrorCode::DimensionMismatch, "Kraus row has the wrong length", line_no);
          ++row;
          col = 0;
          continue;
        }
        if (row >= *dim || col >= *dim) throw Error(ErrorCode::DimensionMismatch, "Kraus matrix too large", line_no);
        if (!parse_complex(fields[i], k(row, col)))
          throw Error(ErrorCode::SyntaxError, "bad entry '" + fields[i] + "'", line_no);
        ++col;
      }
      if (row + 1 != *dim || col != *dim)
        throw Error(ErrorCode::DimensionMismatch, "Kraus matrix must be dim x dim", line_no);
      kraus_lines.emplace_back(fields[0], std::move(k));
      kraus_line_numbers.push_back(line_no);
    } else {
      throw Error(ErrorCode::SyntaxError, "unknown key '" + key + "'", line_no);
    }
  }
  if (!saw_model) throw Error(ErrorCode::SyntaxError, "missing 'model: quantum' header");
  if (!dim) throw Error(ErrorCode::SyntaxError, "missing dim");
  if (!alphabet) throw Error(ErrorCode::SyntaxError, "missing alphabet");

  std::vector<std::optional<ComplexMatrix>> kraus(alphabet->size());
  for (std::size_t i = 0; i < kraus_lines.size(); ++i) {
    const auto x = find_name(*alphabet, kraus_lines[i].first);
    if (!x) throw Error(ErrorCode::UnknownSymbol, "unknown symbol '" + kraus_lines[i].first + "'", kraus_line_numbers[i]);
    if (kraus[*x]) throw Error(ErrorCode::DuplicateTransition, "Kraus operator given twice", kraus_line_numbers[i]);
    kraus[*x] = std::move(kraus_lines[i].second);
  }
  std::vector<ComplexMatrix> ops;
  for (std::size_t x = 0; x < kraus.size(); ++x) {
    if (!kraus[x]) throw Error(ErrorCode::SyntaxError, "missing Kraus operator for '" + (*alphabet)[x] + "'");
    ops.push_back(std::move(*kraus[x]));
  }
  return PureStateQuantumModel::build(*dim, std::move(labels), std::move(*alphabet), std::move(states), std::move(ops));
}

std::string serialize_quantum_model(const PureStateQuantumModel& q) {
  std::string out = "model: quantum\ndim: " + std::to_string(q.dim()) + "\nalphabet:";
  for (const auto& a : q.alphabet()) out += " " + a;
  out += "\n";
  for (std::size_t s = 0; s < q.num_states(); ++s) {
    out += "state: " + q.labels()[s];
    for (const auto& z : q.states()[s]) out += " " + format_complex(z);
    out += "\n";
  }
  for (std::size_t x = 0; x < q.num_symbols(); ++x) {
    out += "kraus: " + q.alphabet()[x];
    const auto& k = q.kraus()[x];
    for (std::size_t r = 0; r < k.rows(); ++r) {
      if (r > 0) out += " /";
      for (std::size_t c = 0; c < k.cols(); ++c) out += " " + format_complex(k(r, c));
    }
    out += "\n";
  }
  return out;
}

}  // namespace machina
