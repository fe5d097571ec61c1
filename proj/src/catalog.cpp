#include "machina/catalog.hpp"

#include <cmath>
#include <optional>

#include "machina/error.hpp"
#include "machina/format.hpp"

namespace machina::catalog {

namespace {

void require_bias(double p) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::InvalidArgument, "bias must lie strictly between 0 and 1");
}

// Markov chain whose symbols are the state names: x emits y and moves to y.
FinitePredictiveModel markov_chain(const std::vector<std::string>& names,
                                   const std::vector<std::vector<double>>& rows) {
  std::vector<TransitionSpec> specs;
  for (std::size_t i = 0; i < names.size(); ++i)
    for (std::size_t j = 0; j < names.size(); ++j)
      if (rows[i][j] > 0.0) specs.push_back({names[i], names[j], rows[i][j], names[j]});
  return FinitePredictiveModel::build(names, names, specs);
}

// K_x = scale |eta_x><eta_x| over labels == alphabet.
PureStateQuantumModel projector_model(const std::vector<std::string>& names, std::vector<ComplexVector> states,
                                      double scale) {
  std::vector<ComplexMatrix> kraus;
  for (const auto& s : states) kraus.push_back(complex(scale) * outer(s, s));
  const std::size_t dim = states.front().size();
  return PureStateQuantumModel::build(dim, names, names, std::move(states), std::move(kraus));
}

}  // namespace

FinitePredictiveModel biased_coin(double p) {
  require_bias(p);
  return FinitePredictiveModel::build({"A"}, {"0", "1"}, {{"A", "0", 1.0 - p, "A"}, {"A", "1", p, "A"}});
}

FinitePredictiveModel biased_coin_split(double p, CoinVariant variant) {
  require_bias(p);
  if (variant == CoinVariant::B)
    return FinitePredictiveModel::build({"B", "C"}, {"0", "1"},
                                        {{"B", "0", 1.0 - p, "C"},
                                         {"B", "1", p, "B"},
                                         {"C", "0", 1.0 - p, "C"},
                                         {"C", "1", p, "B"}});
  return FinitePredictiveModel::build({"B", "C"}, {"0", "1"},
                                      {{"B", "0", 1.0 - p, "C"},
                                       {"B", "1", p, "B"},
                                       {"C", "0", 1.0 - p, "B"},
                                       {"C", "1", p, "C"}});
}

FinitePredictiveModel even_odd(double p) {
  require_bias(p);
  return FinitePredictiveModel::build({"A", "B", "C", "D"}, {"0", "1"},
                                      {{"A", "0", 1.0 - p, "C"},
                                       {"A", "1", p, "B"},
                                       {"B", "0", 1.0 - p, "C"},
                                       {"B", "1", p, "D"},
                                       {"C", "0", 1.0, "A"},
                                       {"D", "1", 1.0, "B"}});
}

FinitePredictiveModel even_odd_split(double p) {
  return split_state(even_odd(p), "C", 2, {{"A", "0", 0}, {"B", "0", 1}}, {"E", "F"});
}

FinitePredictiveModel mbw3() {
  const double s = 2.0 / 3.0, o = 1.0 / 6.0;
  return markov_chain({"A", "B", "C"}, {{s, o, o}, {o, s, o}, {o, o, s}});
}

FinitePredictiveModel mbw4() {
  return markov_chain({"A", "B", "C", "D"},
                      {{0.5, 0.0, 0.25, 0.25}, {0.0, 0.5, 0.25, 0.25}, {0.25, 0.25, 0.5, 0.0}, {0.25, 0.25, 0.0, 0.5}});
}

PureStateQuantumModel d3() {
  const double h = std::sqrt(3.0) / 2.0;
  return projector_model({"A", "B", "C"}, std::vector<ComplexVector>{ComplexVector{1.0, 0.0}, ComplexVector{0.5, h}, ComplexVector{0.5, -h}}, std::sqrt(2.0 / 3.0));
}

PureStateQuantumModel d4() {
  const double r = 1.0 / std::sqrt(2.0);
  return projector_model({"A", "B", "C", "D"}, std::vector<ComplexVector>{ComplexVector{1.0, 0.0}, ComplexVector{0.0, 1.0}, ComplexVector{r, r}, ComplexVector{r, -r}}, r);
}

PureStateQuantumModel q3() { return build_qmachine(mbw3()); }
PureStateQuantumModel q4() { return build_qmachine(mbw4()); }

const std::vector<std::string>& names() {
  static const std::vector<std::string> all{"biased_coin", "biased_coin_b", "biased_coin_c", "even_odd",
                                            "even_odd_split", "mbw3", "mbw4", "d3", "d4", "q3", "q4"};
  return all;
}

Entry lookup(std::string_view spec) {
  std::string name(spec);
  std::optional<double> param;
  if (const auto colon = name.find(':'); colon != std::string::npos) {
    double v = 0.0;
    if (!parse_number(name.substr(colon + 1), v))
      throw Error(ErrorCode::InvalidArgument, "bad parameter in '" + name + "'");
    param = v;
    name.resize(colon);
  }
  const double p = param.value_or(0.5);
  auto no_param = [&] {
    if (param) throw Error(ErrorCode::InvalidArgument, "'" + name + "' takes no parameter");
  };
  if (name == "biased_coin") return biased_coin(p);
  if (name == "biased_coin_b") return biased_coin_split(p, CoinVariant::B);
  if (name == "biased_coin_c") return biased_coin_split(p, CoinVariant::C);
  if (name == "even_odd") return even_odd(p);
  if (name == "even_odd_split") return even_odd_split(p);
  no_param();
  if (name == "mbw3") return mbw3();
  if (name == "mbw4") return mbw4();
  if (name == "d3") return d3();
  if (name == "d4") return d4();
  if (name == "q3") return q3();
  if (name == "q4") return q4();
  throw Error(ErrorCode::InvalidArgument, "unknown process '" + name + "'");
}

std::vector<std::pair<std::string, FinitePredictiveModel>> epsilon_machines() {
  return {{"biased_coin:0.6", biased_coin(0.6)},
          {"even_odd:0.5", even_odd(0.5)},
          {"even_odd:0.3", even_odd(0.3)},
          {"mbw3", mbw3()},
          {"mbw4", mbw4()}};
}

std::vector<std::pair<std::string, FinitePredictiveModel>> classical_models() {
  auto out = epsilon_machines();
  out.emplace_back("biased_coin_b:0.6", biased_coin_split(0.6, CoinVariant::B));
  out.emplace_back("biased_coin_c:0.6", biased_coin_split(0.6, CoinVariant::C));
  out.emplace_back("even_odd_split:0.5", even_odd_split(0.5));
  return out;
}

std::vector<std::pair<std::string, PureStateQuantumModel>> quantum_models() {
  return {{"d3", d3()}, {"d4", d4()}, {"q3", q3()}, {"q4", q4()}};
}

}  // namespace machina::catalog
