#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qcoh/coherence.hpp"
#include "qcoh/detectors.hpp"
#include "qcoh/state_zoo.hpp"

namespace qcoh {

inline constexpr double kOracleTol = 1e-10;

// Outcome of a brute-force verification run. Each failure carries the
// per-trial seed so the trial can be replayed exactly.
struct OracleReport {
  int trials = 0;
  double max_abs_error = 0.0;
  std::vector<std::pair<std::uint64_t, std::string>> failures;

  bool ok() const { return failures.empty(); }
};

inline std::uint64_t trial_seed(std::uint64_t base, int trial) {
  return base + static_cast<std::uint64_t>(trial) * 0x9e3779b97f4a7c15ULL;
}

// Compares the entrywise coherence of an explicit Kronecker product against
// the closed-form combination of the factor coherences. The left side never
// touches the closed form; the right side never touches the product matrix.
inline OracleReport verify_product_law(int trials, const Dims& dims_a,
                                       const Dims& dims_b,
                                       double tol = kOracleTol,
                                       std::uint64_t seed = 1) {
  OracleReport report;
  report.trials = trials;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t ts = trial_seed(seed, t);
    Rng rng(ts);
    const State a = random_state(dims_a, rng, rng.uniform() < 0.5);
    const State b = random_state(dims_b, rng, rng.uniform() < 0.5);
    const double entrywise = l1_coherence(kron(a, b));
    const double closed = product_law(l1_coherence(a), l1_coherence(b));
    const double err = std::abs(entrywise - closed);
    report.max_abs_error = std::max(report.max_abs_error, err);
    if (err > tol)
      report.failures.emplace_back(
          ts, "product law deviation " + std::to_string(err) + " on dims " +
                  dims_a.to_string() + "x" + dims_b.to_string());
  }
  return report;
}

// C(sum p_i rho_i) <= sum p_i C(rho_i) on random ensembles of k states.
inline OracleReport verify_convexity(int trials, const Dims& dims, int k,
                                     double tol = kOracleTol,
                                     std::uint64_t seed = 1) {
  OracleReport report;
  report.trials = trials;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t ts = trial_seed(seed, t);
    Rng rng(ts);
    const std::vector<double> w = dirichlet_weights(k, rng);
    std::vector<std::pair<double, State>> parts;
    double rhs = 0.0;
    for (int i = 0; i < k; ++i) {
      State s = random_state(dims, rng, rng.uniform() < 0.5);
      rhs += w[static_cast<size_t>(i)] * l1_coherence(s);
      parts.emplace_back(w[static_cast<size_t>(i)], std::move(s));
    }
    const double lhs = l1_coherence(mix(parts));
    const double excess = lhs - rhs;
    report.max_abs_error = std::max(report.max_abs_error, excess);
    if (excess > tol)
      report.failures.emplace_back(
          ts, "convexity violated by " + std::to_string(excess));
  }
  return report;
}

// No-false-alarm checks: states assembled to satisfy a detector's premise
// must pass it. Runs `trials` of each family: one-cut products against the
// product equality, mixed-cut ensembles against the mixed-cut bound, and
// separable ensembles against the separable bound.
inline OracleReport verify_detector_soundness(int trials, const Dims& dims,
                                              double tol = kDetectionTol,
                                              std::uint64_t seed = 1) {
  OracleReport report;
  report.trials = trials * 3;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t ts = trial_seed(seed, t);
    Rng rng(ts);

    const Cut cut{rng.below(dims.count())};
    std::vector<int> rest_dims;
    for (int j = 0; j < dims.count(); ++j)
      if (j != cut.solo) rest_dims.push_back(dims.local(j));
    const State solo = random_state(Dims({dims.local(cut.solo)}), rng,
                                    rng.uniform() < 0.5);
    const State rest = random_state(Dims(rest_dims), rng, rng.uniform() < 0.5);
    const State prod = product_at(solo, rest, cut.solo);
    const InequalityRecord eq = check_product_equality(prod, cut, tol);
    report.max_abs_error =
        std::max(report.max_abs_error, std::abs(eq.lhs - eq.rhs));
    if (!eq.satisfied)
      report.failures.emplace_back(ts, "product equality fired on a product state");

    const int k = 1 + rng.below(4);
    const InequalityRecord r3 =
        check_result3(random_bisep_ensemble(dims, k, ts ^ 0x5bd1e995), tol);
    report.max_abs_error = std::max(report.max_abs_error, -r3.slack);
    if (!r3.satisfied)
      report.failures.emplace_back(ts, "mixed-cut bound fired on a biseparable mixture");

    const InequalityRecord r4 =
        check_result4(random_sep_ensemble(dims, k, ts ^ 0xc2b2ae35), tol);
    report.max_abs_error = std::max(report.max_abs_error, -r4.slack);
    if (!r4.satisfied)
      report.failures.emplace_back(ts, "separable bound fired on a separable mixture");
  }
  return report;
}

}  // namespace qcoh
