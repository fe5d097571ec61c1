#include "machina/hmm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
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

void require_unique(const std::vector<std::string>& names, std::string_view what) {
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (n.empty()) throw Error(ErrorCode::SyntaxError, std::string(what) + " label is empty");
    if (!seen.insert(n).second)
      throw Error(ErrorCode::SyntaxError, "duplicate " + std::string(what) + " '" + n + "'");
  }
}

void reach(std::size_t start, const std::vector<std::vector<std::size_t>>& adj, std::vector<bool>& seen) {
  std::vector<std::size_t> stack{start};
  seen[start] = true;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t v : adj[u])
      if (!seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
  }
}

}  // namespace

bool is_irreducible(std::size_t n, const std::vector<std::vector<std::size_t>>& adjacency) {
  if (n == 0) return false;
  // Kosaraju's criterion for a single component: everything reachable from
  // node 0 in the graph and in its transpose.
  std::vector<std::vector<std::size_t>> reverse(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v : adjacency[u]) reverse[v].push_back(u);
  std::vector<bool> fwd(n, false), bwd(n, false);
  reach(0, adjacency, fwd);
  reach(0, reverse, bwd);
  return std::all_of(fwd.begin(), fwd.end(), [](bool b) { return b; }) &&
         std::all_of(bwd.begin(), bwd.end(), [](bool b) { return b; });
}

FinitePredictiveModel FinitePredictiveModel::build(std::vector<std::string> states,
                                                   std::vector<std::string> alphabet,
                                                   const std::vector<TransitionSpec>& transitions) {
  if (states.empty()) throw Error(ErrorCode::SyntaxError, "model has no states");
  if (alphabet.empty()) throw Error(ErrorCode::SyntaxError, "model has an empty alphabet");
  require_unique(states, "state");
  require_unique(alphabet, "symbol");

  FinitePredictiveModel m;
  m.states_ = std::move(states);
  m.alphabet_ = std::move(alphabet);
  m.table_.assign(m.states_.size() * m.alphabet_.size(), std::nullopt);
  std::vector<bool> written(m.table_.size(), false);

  for (const auto& t : transitions) {
    const auto from = find_name(m.states_, t.from);
    const auto to = find_name(m.states_, t.to);
    const auto sym = find_name(m.alphabet_, t.symbol);
    if (!from) throw Error(ErrorCode::UnknownState, "unknown state '" + t.from + "'");
    if (!to) throw Error(ErrorCode::UnknownState, "unknown state '" + t.to + "'");
    if (!sym) throw Error(ErrorCode::UnknownSymbol, "unknown symbol '" + t.symbol + "'");
    if (!(t.prob >= 0.0 && t.prob <= 1.0))
      throw Error(ErrorCode::SyntaxError, "probability " + format_number(t.prob) + " outside [0, 1]");
    const std::size_t slot = *from * m.alphabet_.size() + *sym;
    if (written[slot]) {
      const auto& prev = m.table_[slot];
      const bool same_target = prev ? prev->next == *to : true;
      if (!same_target)
        throw Error(ErrorCode::NotUnifilar,
                    "state '" + t.from + "' has two successors on symbol '" + t.symbol + "'");
      throw Error(ErrorCode::DuplicateTransition,
                  "transition " + t.from + " --" + t.symbol + "--> given twice");
    }
    written[slot] = true;
    if (t.prob > 0.0) m.table_[slot] = Transition{t.prob, *to};
  }

  std::vector<std::vector<std::size_t>> adjacency(m.states_.size());
  for (std::size_t s = 0; s < m.states_.size(); ++s) {
    double row = 0.0;
    for (std::size_t x = 0; x < m.alphabet_.size(); ++x) {
      const auto& t = m.transition(s, x);
      if (!t) continue;
      row += t->prob;
      if (t->prob > kPositiveTol) adjacency[s].push_back(t->next);
    }
    if (std::abs(row - 1.0) > kStochasticTol)
      throw Error(ErrorCode::NotStochastic,
                  "outgoing probabilities of state '" + m.states_[s] + "' sum to " + format_number(row));
  }
  if (!is_irreducible(m.states_.size(), adjacency))
    throw Error(ErrorCode::NotIrreducible, "transition graph is not strongly connected");
  return m;
}

std::optional<std::size_t> FinitePredictiveModel::state_index(std::string_view name) const {
  return find_name(states_, name);
}

std::optional<std::size_t> FinitePredictiveModel::symbol_index(std::string_view name) const {
  return find_name(alphabet_, name);
}

RealMatrix FinitePredictiveModel::symbol_matrix(std::size_t symbol) const {
  RealMatrix t(num_states(), num_states());
  for (std::size_t s = 0; s < num_states(); ++s)
    if (const auto& tr = transition(s, symbol)) t(s, tr->next) += tr->prob;
  return t;
}

RealMatrix FinitePredictiveModel::transition_matrix() const {
  RealMatrix t(num_states(), num_states());
  for (std::size_t x = 0; x < num_symbols(); ++x) t = t + symbol_matrix(x);
  return t;
}

std::vector<TransitionSpec> FinitePredictiveModel::transition_specs() const {
  std::vector<TransitionSpec> out;
  for (std::size_t s = 0; s < num_states(); ++s)
    for (std::size_t x = 0; x < num_symbols(); ++x)
      if (const auto& t = transition(s, x)) out.push_back({states_[s], alphabet_[x], t->prob, states_[t->next]});
  return out;
}

bool structurally_equal(const FinitePredictiveModel& a, const FinitePredictiveModel& b, double tol) {
  if (a.states() != b.states() || a.alphabet() != b.alphabet()) return false;
  for (std::size_t s = 0; s < a.num_states(); ++s)
    for (std::size_t x = 0; x < a.num_symbols(); ++x) {
      const auto& ta = a.transition(s, x);
      const auto& tb = b.transition(s, x);
      if (ta.has_value() != tb.has_value()) return false;
      if (ta && (ta->next != tb->next || std::abs(ta->prob - tb->prob) > tol)) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------
// Model file I/O

namespace {

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

FinitePredictiveModel parse_model(std::string_view text) {
  std::optional<std::vector<std::string>> states, alphabet;
  std::vector<TransitionSpec> transitions;
  std::vector<int> transition_lines;
  bool saw_model = false;

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
    const auto fields = split_ws(line.substr(colon + 1));

    if (key == "model") {
      if (fields.size() != 1 || fields[0] != "classical")
        throw Error(ErrorCode::SyntaxError, "expected 'model: classical'", line_no);
      saw_model = true;
    } else if (key == "alphabet") {
      if (alphabet) throw Error(ErrorCode::SyntaxError, "alphabet declared twice", line_no);
      alphabet = fields;
    } else if (key == "states") {
      if (states) throw Error(ErrorCode::SyntaxError, "states declared twice", line_no);
      states = fields;
    } else if (key == "t") {
      if (fields.size() != 4)
        throw Error(ErrorCode::SyntaxError, "transition needs 'from symbol probability to'", line_no);
      double p = 0.0;
      if (!parse_number(fields[2], p))
        throw Error(ErrorCode::SyntaxError, "bad probability '" + fields[2] + "'", line_no);
      transitions.push_back({fields[0], fields[1], p, fields[3]});
      transition_lines.push_back(line_no);
    } else {
      throw Error(ErrorCode::SyntaxError, "unknown key '" + key + "'", line_no);
    }
  }
  if (!saw_model) throw Error(ErrorCode::SyntaxError, "missing 'model: classical' header");
  if (!alphabet) throw Error(ErrorCode::SyntaxError, "missing alphabet");
  if (!states) throw Error(ErrorCode::SyntaxError, "missing states");

  // Name resolution errors get their line numbers here; invariant checks are
  // left to build().
  std::map<std::pair<std::string, std::string>, std::string> seen;
  for (std::size_t i = 0; i < transitions.size(); ++i) {
    const auto& t = transitions[i];
    if (const auto [it, fresh] = seen.emplace(std::pair{t.from, t.symbol}, t.to); !fresh) {
      if (it->second != t.to)
        throw Error(ErrorCode::NotUnifilar, "state '" + t.from + "' has two successors on symbol '" + t.symbol + "'",
                    transition_lines[i]);
      throw Error(ErrorCode::DuplicateTransition, "transition " + t.from + " --" + t.symbol + "--> given twice",
                  transition_lines[i]);
    }
    if (!find_name(*states, t.from)) throw Error(ErrorCode::UnknownState, "unknown state '" + t.from + "'", transition_lines[i]);
    if (!find_name(*states, t.to)) throw Error(ErrorCode::UnknownState, "unknown state '" + t.to + "'", transition_lines[i]);
    if (!find_name(*alphabet, t.symbol))
      throw Error(ErrorCode::UnknownSymbol, "unknown symbol '" + t.symbol + "'", transition_lines[i]);
    if (!(t.prob >= 0.0 && t.prob <= 1.0))
      throw Error(ErrorCode::SyntaxError, "probability outside [0, 1]", transition_lines[i]);
  }
  return FinitePredictiveModel::build(std::move(*states), std::move(*alphabet), transitions);
}

std::string serialize_model(const FinitePredictiveModel& m) {
  std::string out = "model: classical\nalphabet:";
  for (const auto& a : m.alphabet()) out += " " + a;
  out += "\nstates:";
  for (const auto& s : m.states()) out += " " + s;
  out += "\n";
  for (const auto& t : m.transition_specs())
    out += "t: " + t.from + " " + t.symbol + " " + format_number(t.prob, 12) + " " + t.to + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Stationary state and word probabilities

namespace {

std::vector<double> left_multiply(const std::vector<double>& pi, const RealMatrix& t) {
  std::vector<double> out(t.cols(), 0.0);
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t j = 0; j < t.cols(); ++j) out[j] += pi[i] * t(i, j);
  return out;
}

double stationarity_residual(const std::vector<double>& pi, const RealMatrix& t) {
  const auto next = left_multiply(pi, t);
  double worst = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i) worst = std::max(worst, std::abs(next[i] - pi[i]));
  return worst;
}

bool acceptable(const std::vector<double>& pi, const RealMatrix& t) {
  if (std::any_of(pi.begin(), pi.end(), [](double v) { return !std::isfinite(v) || v < -kClipTol; })) return false;
  return stationarity_residual(pi, t) < 1e-10;
}

}  // namespace

Distribution stationary(const FinitePredictiveModel& m) {
  const std::size_t n = m.num_states();
  const RealMatrix t = m.transition_matrix();

  RealMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = t(j, i) - (i == j ? 1.0 : 0.0);
  for (std::size_t j = 0; j < n; ++j) a(n - 1, j) = 1.0;
  std::vector<double> b(n, 0.0);
  b[n - 1] = 1.0;

  std::vector<double> pi;
  if (!solve_linear(a, b, pi) || !acceptable(pi, t)) {
    // Lazy chain (I + T)/2 shares pi and is aperiodic.
    pi.assign(n, 1.0 / static_cast<double>(n));
    bool converged = false;
    for (int iter = 0; iter < 1'000'000; ++iter) {
      auto next = left_multiply(pi, t);
      double delta = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        next[i] = 0.5 * (next[i] + pi[i]);
        delta = std::max(delta, std::abs(next[i] - pi[i]));
      }
      pi = std::move(next);
      if (delta < 1e-15 || stationarity_residual(pi, t) < 1e-13) {
        converged = true;
        break;
      }
    }
    if (!converged) throw Error(ErrorCode::NoConvergence, "power iteration did not reach 1e-13 residual");
  }
  double sum = 0.0;
  for (double& v : pi) {
    if (v < 0.0) v = 0.0;
    sum += v;
  }
  for (double& v : pi) v /= sum;
  return Distribution::validate(pi);
}

Word parse_word(const FinitePredictiveModel& m, std::string_view text) {
  Word w;
  const auto tokens = split_ws(text);
  const bool single_chars = std::all_of(m.alphabet().begin(), m.alphabet().end(),
                                        [](const std::string& a) { return a.size() == 1; });
  const bool spaced = tokens.size() > 1 || !single_chars;
  if (spaced) {
    for (const auto& tok : tokens) {
      const auto x = m.symbol_index(tok);
      if (!x) throw Error(ErrorCode::UnknownSymbol, "unknown symbol '" + tok + "'");
      w.push_back(*x);
    }
    return w;
  }
  for (const char c : trim(text)) {
    const auto x = m.symbol_index(std::string_view(&c, 1));
    if (!x) throw Error(ErrorCode::UnknownSymbol, "unknown symbol '" + std::string(1, c) + "'");
    w.push_back(*x);
  }
  return w;
}

std::string format_word(const std::vector<std::string>& alphabet, const Word& w) {
  const bool single_chars =
      std::all_of(alphabet.begin(), alphabet.end(), [](const std::string& a) { return a.size() == 1; });
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!single_chars && i > 0) out += ' ';
    out += alphabet.at(w[i]);
  }
  return out;
}

double word_probability(const FinitePredictiveModel& m, const Word& w, const Distribution& initial) {
  std::vector<double> v = initial.probs();
  for (const std::size_t x : w) {
    if (x >= m.num_symbols()) throw Error(ErrorCode::UnknownSymbol, "symbol index out of range");
    std::vector<double> next(m.num_states(), 0.0);
    for (std::size_t s = 0; s < m.num_states(); ++s)
      if (const auto& t = m.transition(s, x)) next[t->next] += v[s] * t->prob;
    v = std::move(next);
  }
  double total = 0.0;
  for (double p : v) total += p;
  return total;
}

double word_probability(const FinitePredictiveModel& m, const Word& w, std::optional<std::size_t> start) {
  if (start) {
    if (*start >= m.num_states()) throw Error(ErrorCode::UnknownState, "start state out of range");
    return word_probability(m, w, Distribution::point_mass(m.num_states(), *start));
  }
  return word_probability(m, w, stationary(m));
}

std::vector<Word> all_words(std::size_t num_symbols, std::size_t length) {
  std::vector<Word> out{Word{}};
  for (std::size_t l = 0; l < length; ++l) {
    std::vector<Word> next;
    next.reserve(out.size() * num_symbols);
    for (const auto& w : out)
      for (std::size_t x = 0; x < num_symbols; ++x) {
        Word e = w;
        e.push_back(x);
        next.push_back(std::move(e));
      }
    out = std::move(next);
  }
  return out;
}

double renyi_memory(const FinitePredictiveModel& m, double alpha) { return renyi_entropy(stationary(m), alpha); }

// ---------------------------------------------------------------------------
// State splitting

FinitePredictiveModel split_state(const FinitePredictiveModel& m, std::string_view target, std::size_t k,
                                  const std::vector<RouteEntry>& router, std::vector<std::string> copy_names) {
  const auto t = m.state_index(target);
  if (!t) throw Error(ErrorCode::UnknownState, "unknown state '" + std::string(target) + "'");
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "split needs at least one copy");
  if (k == 1) return m;

  if (copy_names.empty())
    for (std::size_t c = 0; c < k; ++c) copy_names.push_back(std::string(target) + "_" + std::to_string(c + 1));
  if (copy_names.size() != k) throw Error(ErrorCode::InvalidArgument, "need exactly k copy names");

  // Every incoming edge (source, symbol) of the target, in state-major order.
  std::map<std::pair<std::size_t, std::size_t>, std::optional<std::size_t>> route;
  for (std::size_t s = 0; s < m.num_states(); ++s)
    for (std::size_t x = 0; x < m.num_symbols(); ++x)
      if (const auto& tr = m.transition(s, x); tr && tr->next == *t) route[{s, x}] = std::nullopt;

  for (const auto& r : router) {
    const auto s = m.state_index(r.source);
    const auto x = m.symbol_index(r.symbol);
    if (!s || !x) throw Error(ErrorCode::InvalidArgument, "route names unknown edge " + r.source + ":" + r.symbol);
    auto it = route.find({*s, *x});
    if (it == route.end())
      throw Error(ErrorCode::InvalidArgument, "edge " + r.source + ":" + r.symbol + " does not enter the target");
    if (r.copy >= k) throw Error(ErrorCode::InvalidArgument, "route copy index out of range");
    if (it->second) throw Error(ErrorCode::InvalidArgument, "edge " + r.source + ":" + r.symbol + " routed twice");
    it->second = r.copy;
  }
  std::vector<bool> reached(k, false);
  for (const auto& [edge, copy] : route) {
    if (!copy)
      throw Error(ErrorCode::InvalidArgument, "edge " + m.states()[edge.first] + ":" + m.alphabet()[edge.second] +
                                                  " has no route");
    reached[*copy] = true;
  }
  for (std::size_t c = 0; c < k; ++c)
    if (!reached[c]) throw Error(ErrorCode::UnreachableCopy, "copy '" + copy_names[c] + "' has no incoming edge");

  std::vector<std::string> states;
  for (std::size_t s = 0; s < m.num_states(); ++s) {
    if (s == *t)
      states.insert(states.end(), copy_names.begin(), copy_names.end());
    else
      states.push_back(m.states()[s]);
  }
  for (const auto& name : copy_names)
    for (std::size_t s = 0; s < m.num_states(); ++s)
      if (s != *t && m.states()[s] == name)
        throw Error(ErrorCode::InvalidArgument, "copy name '" + name + "' collides with an existing state");

  auto successor = [&](std::size_t s, std::size_t x) -> std::string {
    const auto& tr = m.transition(s, x);
    if (tr->next == *t) return copy_names[*route.at({s, x})];
    return m.states()[tr->next];
  };

  std::vector<TransitionSpec> specs;
  for (std::size_t s = 0; s < m.num_states(); ++s)
    for (std::size_t x = 0; x < m.num_symbols(); ++x) {
      const auto& tr = m.transition(s, x);
      if (!tr) continue;
      if (s == *t) {
        for (const auto& name : copy_names) specs.push_back({name, m.alphabet()[x], tr->prob, successor(s, x)});
      } else {
        specs.push_back({m.states()[s], m.alphabet()[x], tr->prob, successor(s, x)});
      }
    }
  return FinitePredictiveModel::build(std::move(states), m.alphabet(), specs);
}

}  // namespace machina
