#include "machina/gauge_family.hpp"

#include <cmath>
#include <numbers>

#include "machina/catalog.hpp"
#include "machina/error.hpp"
#include "machina/format.hpp"

namespace machina::gauge {

namespace {

constexpr double kPi = std::numbers::pi;
const double kStay = std::sqrt(2.0 / 3.0);   // |<eps_x|eta_x>|
const double kMove = 1.0 / std::sqrt(6.0);   // |<eps_x|eta_y>|, x != y

complex phase(double angle) { return std::polar(1.0, angle); }

double csc2_half(double theta) {
  const double s = std::sin(theta / 2.0);
  return 1.0 / (s * s);
}

}  // namespace

ComplexMatrix CandidateModel2D::transition_amplitudes() const {
  ComplexMatrix a(3, 3);
  for (std::size_t x = 0; x < 3; ++x)
    for (std::size_t y = 0; y < 3; ++y) a(x, y) = duals[x][0] * states[y][0] + duals[x][1] * states[y][1];
  return a;
}

CandidateModel2D candidate(double theta) {
  if (!std::isfinite(theta) || std::abs(theta) > kPi + 1e-12)
    throw Error(ErrorCode::InvalidArgument, "theta must lie in [-pi, pi]");
  const double gap = std::abs(theta) - kPi / 3.0;
  if (std::abs(gap) < 1e-6)
    throw Error(ErrorCode::SingularTheta, "|theta| = pi/3 makes beta vanish");
  if (gap < 0.0)
    throw Error(ErrorCode::UnphysicalTheta, "|theta| < pi/3 requires alpha > 1 (theta = " + format_number(theta) + ")");

  CandidateModel2D c;
  c.theta = theta;
  c.alpha = 0.5 / std::abs(std::sin(theta / 2.0));
  c.beta = std::sqrt(1.0 - c.alpha * c.alpha);
  const double sgn = theta > 0.0 ? 1.0 : -1.0;
  c.phi2 = theta;
  c.phi3 = (-theta + sgn * kPi) / 2.0;
  c.phi1 = kPi - c.phi2 - c.phi3;

  const double a = c.alpha, b = c.beta;
  c.states = {ComplexVector{1.0, 0.0}, ComplexVector{a, b}, ComplexVector{a, phase(theta) * b}};
  c.duals = {
      ComplexVector{kStay, kStay / b * (0.5 * phase(c.phi1) - a)},
      ComplexVector{kMove * phase(-c.phi1), kStay / b * (1.0 - 0.5 * a * phase(-c.phi1))},
      ComplexVector{kMove * phase(c.phi3), kStay / (2.0 * b) * (phase(-c.phi2) - a * phase(c.phi3))},
  };
  return c;
}

CompletenessResidual completeness_residual(const CandidateModel2D& c) {
  ComplexMatrix sum(2, 2);
  for (const auto& dual : c.duals)
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) sum(i, j) += std::conj(dual[i]) * dual[j];
  const double k = csc2_half(c.theta);
  return CompletenessResidual{
      max_abs_diff(sum, ComplexMatrix::identity(2)),
      sum(1, 1).real() - 1.0,
      (2.0 + k) / (4.0 - k) - 1.0,
  };
}

double phase_cancellation(const CandidateModel2D& c) {
  const ComplexMatrix a = c.transition_amplitudes();
  auto ph = [&](std::size_t x, std::size_t y) { return std::arg(a(x, y)); };
  enum { A = 0, B = 1, C = 2 };
  const complex expr = 8.0 + (phase(ph(A, B) + ph(B, C) + ph(C, A)) + phase(ph(B, A) + ph(C, B) + ph(A, C))) -
                       2.0 * (phase(ph(A, B) + ph(B, A)) + phase(ph(A, C) + ph(C, A)) + phase(ph(B, C) + ph(C, B)));
  return std::abs(expr);
}

PureStateQuantumModel to_model(const CandidateModel2D& c) {
  std::vector<ComplexVector> states(c.states.begin(), c.states.end());
  std::vector<ComplexMatrix> kraus;
  for (std::size_t x = 0; x < 3; ++x) {
    ComplexMatrix k(2, 2);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) k(i, j) = c.states[x][i] * c.duals[x][j];
    kraus.push_back(std::move(k));
  }
  return PureStateQuantumModel::build(2, {"A", "B", "C"}, {"A", "B", "C"}, std::move(states), std::move(kraus));
}

SweepReport uniqueness_sweep(std::size_t grid_size) {
  if (grid_size < 100) throw Error(ErrorCode::InvalidArgument, "sweep grid needs at least 100 points");
  const double lo = kPi / 3.0 + kSweepMargin;
  const double hi = kPi;
  const double h = (hi - lo) / static_cast<double>(grid_size - 1);

  SweepReport report;
  report.cell_width = h;
  std::vector<double> thetas;
  thetas.reserve(2 * grid_size);
  for (std::size_t i = 0; i < grid_size; ++i) thetas.push_back(-(hi - static_cast<double>(i) * h));
  for (std::size_t i = 0; i < grid_size; ++i) thetas.push_back(lo + static_cast<double>(i) * h);
  thetas[0] = -kPi;
  thetas.back() = kPi;

  for (double theta : thetas) {
    const auto r = completeness_residual(candidate(theta));
    report.rows.push_back({theta, r});
    if (r.operator_norm <= kSweepZero) report.zeros.push_back(theta);
  }

  report.unique = !report.zeros.empty();
  for (double z : report.zeros)
    if (std::abs(z) < kPi - h * 1.0000001) {
      throw Error(ErrorCode::UniquenessViolated,
                  "completeness residual vanishes at theta = " + format_number(z) + ", away from +-pi");
    }

  // Negative half runs -pi -> -lo (residual increasing), positive half lo -> pi
  // (residual decreasing).
  report.monotone = true;
  for (std::size_t i = 1; i < grid_size; ++i) {
    if (report.rows[i].residual.diagonal < report.rows[i - 1].residual.diagonal - 1e-12) report.monotone = false;
    const std::size_t j = grid_size + i;
    if (report.rows[j].residual.diagonal > report.rows[j - 1].residual.diagonal + 1e-12) report.monotone = false;
  }
  return report;
}

std::string sweep_csv(const SweepReport& report) {
  std::string out = "theta,matrix_residual,analytic_residual\n";
  for (const auto& row : report.rows)
    out += format_number(row.theta, 12) + "," + format_number(row.residual.diagonal, 12) + "," +
           format_number(row.residual.analytic, 12) + "\n";
  return out;
}

CounterexampleReport counterexample_report(std::size_t grid_size) {
  CounterexampleReport rep;
  rep.sweep = uniqueness_sweep(grid_size);
  if (!rep.sweep.unique) throw Error(ErrorCode::UniquenessViolated, "step (i): no completeness zero found at +-pi");
  rep.lines.push_back("(i) completeness holds on the gauge-fixed 2-D family only at theta = +-pi (grid " +
                      std::to_string(grid_size) + " per sign, cell " + format_number(rep.sweep.cell_width, 6) + ")");

  const auto d3 = catalog::d3();
  const auto q3 = catalog::q3();
  const auto at_pi = candidate(kPi);
  const double gauge_gap = max_abs_diff(GramMatrix::of_states({at_pi.states.begin(), at_pi.states.end()}).values(),
                                        GramMatrix::of_states(d3.states()).values());
  if (gauge_gap > 1e-12)
    throw Error(ErrorCode::CheckFailed, "step (i): theta = pi candidate differs from D3 by " + format_number(gauge_gap));
  rep.lines.push_back("    theta = pi candidate has D3's overlaps (max gap " + format_number(gauge_gap, 3) + ")");

  const Distribution lambda_d3 = stationary_spectrum(d3);
  const Distribution lambda_q3 = stationary_spectrum(q3);
  rep.d3_vs_q3 = compare(lambda_d3, lambda_q3);
  if (rep.d3_vs_q3 != Verdict::Incomparable)
    throw Error(ErrorCode::CheckFailed, "step (ii): spectra of D3 and Q3 are comparable (" +
                                            std::string(to_string(rep.d3_vs_q3)) + ")");
  rep.lines.push_back("(ii) spectrum(D3) vs spectrum(Q3): " + std::string(to_string(rep.d3_vs_q3)));

  rep.s1_d3 = renyi_entropy(lambda_d3, 1.0);
  rep.s1_q3 = renyi_entropy(lambda_q3, 1.0);
  rep.s0_d3 = renyi_entropy(lambda_d3, 0.0);
  rep.s0_q3 = renyi_entropy(lambda_q3, 0.0);
  if (!(rep.s1_d3 > rep.s1_q3) || !(rep.s0_d3 < rep.s0_q3))
    throw Error(ErrorCode::CheckFailed, "step (iii): entropy ordering does not split");
  rep.lines.push_back("(iii) S(D3) = " + format_number(rep.s1_d3, 6) + " > S(Q3) = " + format_number(rep.s1_q3, 6) +
                      ", but S0(D3) = " + format_number(rep.s0_d3, 6) + " < S0(Q3) = " + format_number(rep.s0_q3, 6));
  rep.lines.push_back("=> D3 only weakly minimizes topological memory; the 3-state MBW process has no strongly "
                      "minimal pure-state model");
  rep.pass = true;
  return rep;
}

}  // namespace machina::gauge
