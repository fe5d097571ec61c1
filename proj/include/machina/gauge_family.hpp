#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "machina/linalg.hpp"
#include "machina/majorization.hpp"
#include "machina/quantum.hpp"

namespace machina::gauge {

/// Gauge-fixed two-dimensional candidate for the 3-state MBW process,
/// parametrized by the relative phase theta of |eta_C>:
///   |eta_A> = |0>, |eta_B> = a|0> + b|1>, |eta_C> = a|0> + e^{i theta} b|1>,
/// with a = |csc(theta/2)| / 2 and b = sqrt(1 - a^2).
struct CandidateModel2D {
  double theta;
  double alpha;
  double beta;
  double phi1, phi2, phi3;               // transition phases, phi1 + phi2 + phi3 = pi
  std::array<ComplexVector, 3> states;   // |eta_A>, |eta_B>, |eta_C>
  std::array<ComplexVector, 3> duals;    // components (<eps_x|0>, <eps_x|1>)

  /// A_xy = <eps_x|eta_y>.
  ComplexMatrix transition_amplitudes() const;
};

/// Throws UnphysicalTheta for |theta| < pi/3, SingularTheta within 1e-6 of
/// pi/3, InvalidArgument outside [-pi, pi].
CandidateModel2D candidate(double theta);

struct CompletenessResidual {
  double operator_norm;  // max-abs entry of sum_x |eps_x><eps_x| - I
  double diagonal;       // numeric <1| sum_x |eps_x><eps_x| |1> - 1
  double analytic;       // (2 + csc^2(theta/2)) / (4 - csc^2(theta/2)) - 1
};

CompletenessResidual completeness_residual(const CandidateModel2D& c);

/// Modulus of 8 + (e^{i(pAB+pBC+pCA)} + e^{i(pBA+pCB+pAC)})
///   - 2 (e^{i(pAB+pBA)} + e^{i(pAC+pCA)} + e^{i(pBC+pCB)}),
/// with the phases read off the candidate's amplitude matrix. Zero means the
/// characteristic polynomial of sqrt(6) A carries a factor of lambda.
double phase_cancellation(const CandidateModel2D& c);

/// The candidate as a pure-state model with K_x = |eta_x><eps_x|. Only
/// theta = +-pi passes the completeness check.
PureStateQuantumModel to_model(const CandidateModel2D& c);

struct SweepRow {
  double theta;
  CompletenessResidual residual;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  std::vector<double> zeros;  // thetas where operator_norm <= threshold
  double cell_width;
  bool unique;                // zeros only within one cell of +-pi, and present
  bool monotone;              // residual decreasing in |theta| on each side
};

inline constexpr double kSweepZero = 1e-6;
inline constexpr double kSweepMargin = 1e-3;

/// Uniform grid of grid_size points on each of [pi/3 + 1e-3, pi] and its
/// mirror. Throws InvalidArgument below 100 points and UniquenessViolated if
/// a near-zero appears away from +-pi.
SweepReport uniqueness_sweep(std::size_t grid_size);

/// `theta,matrix_residual,analytic_residual` with 12 significant digits.
std::string sweep_csv(const SweepReport& report);

struct CounterexampleReport {
  SweepReport sweep;
  Verdict d3_vs_q3;
  double s1_d3, s1_q3;
  double s0_d3, s0_q3;
  std::vector<std::string> lines;  // human-readable argument trace
  bool pass;
};

/// Assembles uniqueness of D3, its incomparability with Q3, and the entropy
/// trade-off; throws Error naming the failing step.
CounterexampleReport counterexample_report(std::size_t grid_size = 10'000);

}  // namespace machina::gauge
