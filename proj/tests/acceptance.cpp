// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "machina/gauge_family.hpp"
#include "machina/catalog.hpp"
#include "machina/format.hpp"
#include "machina/hmm.hpp"
#include "machina/majorization.hpp"
#include "machina/minimize.hpp"
#include "machina/quantum.hpp"
#include "support.hpp"

using namespace machina;
namespace mt = machina::testing;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [failed: " << what << "]";
    }
  }
};

using Check = std::function<void(Outcome&)>;

int failures = 0;

void run(int id, const char* title, double budget_s, const Check& check) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    check(o);
  } catch (const std::exception& e) {
    o.ok = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > budget_s) {
    o.ok = false;
    o.detail << " [over budget: " << format_number(secs, 3) << " s > " << budget_s << " s]";
  }
  if (!o.ok) ++failures;
  std::printf("%s %2d  %s (%.2fs)%s\n", o.ok ? "PASS" : "FAIL", id, title, secs, o.detail.str().c_str());
  std::fflush(stdout);
}

double entropy_of(std::initializer_list<double> probs, double alpha) {
  return renyi_entropy(Distribution::validate(probs), alpha);
}

bool close(const Distribution& a, std::initializer_list<double> b, double tol) {
  if (a.size() != b.size()) return false;
  std::size_t i = 0;
  for (double v : b)
    if (std::abs(a[i++] - v) > tol) return false;
  return true;
}

}  // namespace

int main() {
  const double pi = std::numbers::pi;

  run(1, "S(Q3) ~ 0.61 bit; spectrum (8/9, 1/18, 1/18)", 5, [&](Outcome& o) {
    const auto q3 = catalog::q3();
    const double s = vn_renyi(q3, 1.0);
    const double oracle = entropy_of({8.0 / 9, 1.0 / 18, 1.0 / 18}, 1.0);
    const auto gram = gram_fixed_point(catalog::mbw3()).gram;
    o.detail << " S=" << format_number(s, 6) << " oracle=" << format_number(oracle, 6);
    o.require(std::abs(s - 0.6144) <= 0.005, "S within 0.6144 +- 0.005");
    o.require(std::abs(s - oracle) <= 1e-9, "S matches oracle");
    o.require(std::abs(gram(0, 1).real() - 5.0 / 6) <= 1e-12, "Gram off-diagonal 5/6");
    o.require(close(stationary_spectrum(q3), {8.0 / 9, 1.0 / 18, 1.0 / 18}, 1e-9), "spectrum");
  });

  run(2, "S(Q4) ~ 1.2 bit, S_inf(Q4) ~ 0.46", 5, [&](Outcome& o) {
    const auto q4 = catalog::q4();
    const double s1 = vn_renyi(q4, 1.0), sinf = vn_renyi(q4, kAlphaInf);
    const double r2 = std::sqrt(2.0);
    o.detail << " S=" << format_number(s1, 6) << " S_inf=" << format_number(sinf, 6);
    o.require(std::abs(s1 - 1.202) <= 0.01, "S within 1.202 +- 0.01");
    o.require(std::abs(sinf - 0.457) <= 0.01, "S_inf within 0.457 +- 0.01");
    o.require(close(stationary_spectrum(q4), {(1.5 + r2) / 4, 0.125, 0.125, (1.5 - r2) / 4}, 1e-9), "spectrum");
  });

  run(3, "S(D3) = S(D4) = S_inf(D4) = 1", 5, [&](Outcome& o) {
    const auto d3 = catalog::d3(), d4 = catalog::d4();
    const double a = vn_renyi(d3, 1.0), b = vn_renyi(d4, 1.0), c = vn_renyi(d4, kAlphaInf);
    o.detail << " S(D3)=" << format_number(a, 12) << " S(D4)=" << format_number(b, 12)
             << " S_inf(D4)=" << format_number(c, 12);
    o.require(std::abs(a - 1.0) <= 1e-9 && std::abs(b - 1.0) <= 1e-9 && std::abs(c - 1.0) <= 1e-9, "values");
    const ComplexMatrix half = complex(0.5) * ComplexMatrix::identity(2);
    for (const auto* q : {&d3, &d4}) {
      const auto rho = stationary_density(*q, stationary(classical_equivalent(*q)));
      o.require(max_abs_diff(rho, half) <= 1e-12, "rho = I/2");
    }
  });

  run(4, "spectrum(Q) majorizes pi for mbw3 and mbw4", 5, [&](Outcome& o) {
    const Verdict v4 = compare(pad_to(stationary_spectrum(catalog::q4()), 4), stationary(catalog::mbw4()));
    const Verdict v3 = compare(stationary_spectrum(catalog::q3()), stationary(catalog::mbw3()));
    o.detail << " Q4:" << to_string(v4) << " Q3:" << to_string(v3);
    o.require(v4 == Verdict::StrictlyMajorizes, "Q4");
    o.require(v3 == Verdict::StrictlyMajorizes, "Q3");
  });

  run(5, "D4 vs Q4 and D3 vs Q3 incomparable", 5, [&](Outcome& o) {
    const Verdict v4 = compare(stationary_spectrum(catalog::d4()), stationary_spectrum(catalog::q4()));
    const Verdict v3 = compare(stationary_spectrum(catalog::d3()), stationary_spectrum(catalog::q3()));
    o.detail << " D4/Q4:" << to_string(v4) << " D3/Q3:" << to_string(v3);
    o.require(v4 == Verdict::Incomparable, "D4 vs Q4");
    o.require(v3 == Verdict::Incomparable, "D3 vs Q3");
  });

  run(6, "2-D family completeness: unique zero at +-pi, residual 0.25 at 2pi/3", 5, [&](Outcome& o) {
    const auto sweep = gauge::uniqueness_sweep(10'000);
    bool neg = false, pos = false, far = false;
    for (double z : sweep.zeros) {
      if (std::abs(z) < pi - sweep.cell_width) far = true;
      (z < 0 ? neg : pos) = true;
    }
    const auto r = gauge::completeness_residual(gauge::candidate(2 * pi / 3));
    o.detail << " zeros=" << sweep.zeros.size() << " residual(2pi/3)=" << format_number(r.diagonal, 12);
    o.require(neg && pos && !far, "zeros only within one cell of +-pi");
    o.require(std::abs(r.diagonal - 0.25) <= 1e-6, "matrix residual 0.25");
    o.require(std::abs(r.analytic - 0.25) <= 1e-6, "analytic residual 0.25");
  });

  run(7, "five-vector verdicts: majorizes / incomparable", 5, [&](Outcome& o) {
    const Verdict a = compare(Distribution::validate({0.75, 0.125, 0.125, 0.0, 0.0}),
                              Distribution::validate({0.4, 0.2, 0.2, 0.1, 0.1}));
    const Verdict b = compare(Distribution::validate({0.6, 0.1, 0.1, 0.1, 0.1}),
                              Distribution::validate({1.0 / 3, 1.0 / 3, 1.0 / 3, 0.0, 0.0}));
    o.detail << " " << to_string(a) << " / " << to_string(b);
    o.require(a == Verdict::StrictlyMajorizes, "first pair");
    o.require(b == Verdict::Incomparable, "second pair");
  });

  run(8, "200 random eps-machines with splits: pi_eM majorizes pi_split, merge recovers", 60, [&](Outcome& o) {
    std::mt19937_64 rng(20240801);
    int violations = 0, recover = 0;
    double worst_gap = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      const auto m = mt::random_epsilon_machine(rng);
      auto split = m;
      const int splits = std::uniform_int_distribution<int>(1, 3)(rng);
      for (int s = 0; s < splits; ++s) split = mt::random_split(rng, split);
      if (!majorizes(stationary(m), stationary(split))) ++violations;
      const auto merged = merge(split);
      if (!isomorphic(merged, m)) ++recover;
      worst_gap = std::max(worst_gap, mt::max_word_gap(merged, split, 6));
    }
    o.detail << " violations=" << violations << " non-isomorphic=" << recover
             << " max word gap=" << format_number(worst_gap, 3);
    o.require(violations == 0, "majorization");
    o.require(recover == 0, "merge recovers machine");
    o.require(worst_gap <= 1e-9, "word distributions");
  });

  run(9, "200 random eps-machines: spectrum majorizes pi, S_alpha <= H_alpha", 120, [&](Outcome& o) {
    std::mt19937_64 rng(20240802);
    int major = 0, bound_fail = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const auto m = mt::random_epsilon_machine(rng);
      const auto report = strong_advantage_report(build_qmachine(m));
      if (!report.holds()) ++major;
      if (!report.entropy_bound_holds(1e-9)) ++bound_fail;
    }
    o.detail << " majorization violations=" << major << " entropy violations=" << bound_fail;
    o.require(major == 0 && bound_fail == 0, "no violations");
  });

  run(10, "1000 pairs: Schur-concavity and monotonicity in alpha", 5, [&](Outcome& o) {
    std::mt19937_64 rng(20240803);
    const std::vector<double> alphas{0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 5.0, kAlphaInf};
    int schur = 0, mono = 0, lorenz = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 8)(rng);
      const auto p = mt::random_distribution(rng, n);
      const auto q = trial % 2 ? mt::random_majorized(rng, p) : mt::random_distribution(rng, n);
      const Verdict v = compare(p, q);
      if (v != compare_lorenz(lorenz_curve(p), lorenz_curve(q))) ++lorenz;
      for (double a : alphas) {
        const double hp = renyi_entropy(p, a), hq = renyi_entropy(q, a);
        if (v == Verdict::StrictlyMajorizes && hp > hq + 1e-9) ++schur;
        if (v == Verdict::StrictlyMajorizedBy && hq > hp + 1e-9) ++schur;
      }
      for (const auto* d : {&p, &q})
        for (std::size_t i = 1; i < alphas.size(); ++i)
          if (renyi_entropy(*d, alphas[i]) > renyi_entropy(*d, alphas[i - 1]) + 1e-9) ++mono;
    }
    o.detail << " schur=" << schur << " monotone=" << mono << " lorenz-disagree=" << lorenz;
    o.require(schur == 0 && mono == 0 && lorenz == 0, "zero violations");
  });

  run(11, "500 transfer chains replay and give doubly stochastic D", 5, [&](Outcome& o) {
    std::mt19937_64 rng(20240804);
    double replay = 0.0, stochastic = 0.0, image = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
      const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 8)(rng);
      const auto p = mt::random_distribution(rng, n);
      const auto q = mt::random_majorized(rng, p, 6);
      const auto chain = transfer_chain(p, q);
      const auto target = q.sorted_descending();
      const auto x = replay_chain(p, chain, n);
      for (std::size_t i = 0; i < n; ++i) replay = std::max(replay, std::abs(x[i] - target[i]));
      const auto d = doubly_stochastic_from_chain(p, chain, n);
      const auto src = p.sorted_descending();
      for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0, col = 0.0, y = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          row += d(i, j);
          col += d(j, i);
          y += d(i, j) * src[j];
          if (d(i, j) < -1e-15) stochastic = std::max(stochastic, -d(i, j));
        }
        stochastic = std::max({stochastic, std::abs(row - 1.0), std::abs(col - 1.0)});
        image = std::max(image, std::abs(y - target[i]));
      }
    }
    o.detail << " replay=" << format_number(replay, 3) << " stochastic=" << format_number(stochastic, 3)
             << " image=" << format_number(image, 3);
    o.require(replay <= 1e-9 && stochastic <= 1e-9 && image <= 1e-9, "within 1e-9");
  });

  run(12, "quantum vs classical word probabilities, all catalog models, length <= 6", 5, [&](Outcome& o) {
    double worst = 0.0;
    for (const auto& [name, q] : catalog::quantum_models()) {
      const auto c = classical_equivalent(q);
      const auto pi_c = stationary(c);
      const auto rho = stationary_density(q, pi_c);
      for (std::size_t len = 1; len <= 6; ++len)
        for (const auto& w : all_words(q.num_symbols(), len))
          worst = std::max(worst, std::abs(quantum_word_probability(q, w, rho) - word_probability(c, w, pi_c)));
    }
    o.detail << " max delta=" << format_number(worst, 3);
    o.require(worst < 1e-9, "delta < 1e-9");
  });

  run(13, "round trips: file format and q-machine -> classical equivalent", 5, [&](Outcome& o) {
    for (const auto& [name, m] : catalog::classical_models()) {
      const std::string text = serialize_model(m);
      const auto back = parse_model(text);
      o.require(structurally_equal(back, m) && serialize_model(back) == text, "classical " + name);
    }
    for (const auto& [name, q] : catalog::quantum_models()) {
      const std::string text = serialize_quantum_model(q);
      const auto back = parse_quantum_model(text);
      double gap = 0.0;
      for (std::size_t s = 0; s < q.num_states(); ++s)
        for (std::size_t i = 0; i < q.dim(); ++i) gap = std::max(gap, std::abs(back.states()[s][i] - q.states()[s][i]));
      for (std::size_t x = 0; x < q.num_symbols(); ++x) gap = std::max(gap, max_abs_diff(back.kraus()[x], q.kraus()[x]));
      o.require(gap <= 1e-11 && serialize_quantum_model(back) == text && back.labels() == q.labels(),
                "quantum " + name);
    }
    for (const auto& [name, m] : catalog::epsilon_machines()) {
      const auto recovered = classical_equivalent(build_qmachine(m));
      o.require(structurally_equal(recovered, m, 1e-9), "q-machine recovers " + name);
    }
  });

  std::printf("%s: %d failing criteria\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
