#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "machina/hmm.hpp"
#include "machina/quantum.hpp"

namespace machina::catalog {

/// Memoryless coin: one state A emitting "1" with probability p.
FinitePredictiveModel biased_coin(double p);

enum class CoinVariant { B, C };

/// Two-state presentations of the biased coin over states B and C.
///  - B: from either state, "1" (prob p) leads to B and "0" leads to C;
///    stationary (p, 1 - p).
///  - C: "1" (prob p) keeps the current state and "0" switches;
///    stationary (1/2, 1/2).
FinitePredictiveModel biased_coin_split(double p, CoinVariant variant);

/// Four-state machine for concatenations of odd-length 1-blocks and
/// even-length 0-blocks. A: a 0-block just closed (or at its even boundary),
/// B: inside a 1-block after an odd count, C: inside a 0-block after an odd
/// count, D: inside a 1-block after an even count. A and B continue with a
/// "1" with probability p.
FinitePredictiveModel even_odd(double p = 0.5);

/// even_odd with C split into E (entered from A) and F (entered from B).
FinitePredictiveModel even_odd_split(double p = 0.5);

/// 3-state MBW Markov chain: P(x|x) = 2/3, P(y|x) = 1/6, successor = symbol.
FinitePredictiveModel mbw3();

/// 4-state MBW Markov chain: A,B go to themselves w.p. 1/2 and to C,D w.p.
/// 1/4 each; C,D symmetrically to themselves and A,B.
FinitePredictiveModel mbw4();

/// Two-dimensional trine model of mbw3 (K_x = sqrt(2/3) |eta_x><eta_x|).
PureStateQuantumModel d3();
/// Two-dimensional model of mbw4 (K_x = |eta_x><eta_x| / sqrt 2).
PureStateQuantumModel d4();
/// q-machines of mbw3 / mbw4.
PureStateQuantumModel q3();
PureStateQuantumModel q4();

using Entry = std::variant<FinitePredictiveModel, PureStateQuantumModel>;

/// Looks up "name" or "name:param" (e.g. "biased_coin:0.6").
Entry lookup(std::string_view spec);

/// Names accepted by lookup(), without parameters.
const std::vector<std::string>& names();

/// Catalog entries that are classical epsilon-machines (with default params).
std::vector<std::pair<std::string, FinitePredictiveModel>> epsilon_machines();
std::vector<std::pair<std::string, FinitePredictiveModel>> classical_models();
std::vector<std::pair<std::string, PureStateQuantumModel>> quantum_models();

}  // namespace machina::catalog
