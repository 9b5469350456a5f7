#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qcoh/coherence.hpp"
#include "qcoh/decomposition.hpp"
#include "qcoh/state.hpp"

namespace qcoh {

inline constexpr double kDetectionTol = 1e-9;

enum class Check {
  result2,
  result3,
  result4,
  corollary2_eq,
  corollary3_eq,
};

inline const char* check_name(Check c) {
  switch (c) {
    case Check::result2: return "RESULT2";
    case Check::result3: return "RESULT3";
    case Check::result4: return "RESULT4";
    case Check::corollary2_eq: return "COROLLARY2_EQ";
    case Check::corollary3_eq: return "COROLLARY3_EQ";
  }
  return "?";
}

// One evaluated criterion. Equalities hold when |lhs-rhs| <= tol,
// inequalities when lhs <= rhs + tol; slack = rhs - lhs either way.
struct InequalityRecord {
  Check name = Check::corollary2_eq;
  std::string label;  // cut label when the check is cut-specific
  double lhs = 0.0;
  double rhs = 0.0;
  std::vector<double> x_terms;
  bool satisfied = false;
  double slack = 0.0;
};

inline InequalityRecord make_equality_record(Check name, std::string label,
                                             double lhs, double rhs,
                                             std::vector<double> x_terms,
                                             double tol) {
  InequalityRecord r;
  r.name = name;
  r.label = std::move(label);
  r.lhs = lhs;
  r.rhs = rhs;
  r.x_terms = std::move(x_terms);
  r.slack = rhs - lhs;
  r.satisfied = std::abs(lhs - rhs) <= tol;
  return r;
}

inline InequalityRecord make_bound_record(Check name, std::string label,
                                          double lhs, double rhs,
                                          std::vector<double> x_terms,
                                          double tol) {
  InequalityRecord r;
  r.name = name;
  r.label = std::move(label);
  r.lhs = lhs;
  r.rhs = rhs;
  r.x_terms = std::move(x_terms);
  r.slack = rhs - lhs;
  r.satisfied = lhs <= rhs + tol;
  return r;
}

// Coherence of both sides of a one-vs-rest cut of `s`.
inline std::pair<double, double> cut_coherences(const State& s, Cut cut) {
  const int n = s.parties();
  if (cut.solo < 0 || cut.solo >= n)
    fail(ErrorKind::index_out_of_range, "cut index out of range");
  const std::vector<int> solo_keep{cut.solo};
  const std::vector<int> rest_keep = cut.rest(n);
  const double c_solo = l1_coherence(partial_trace(s, solo_keep));
  const double c_rest = l1_coherence(partial_trace(s, rest_keep));
  return {c_solo, c_rest};
}

// X for one component: coherence of the solo side plus coherence of the rest,
// both taken from the component's own reduced states.
inline double component_x(const State& s, Cut cut) {
  auto [c_solo, c_rest] = cut_coherences(s, cut);
  return c_solo + c_rest;
}

// Product equality across one cut: a state that factors as solo (x) rest has
// C(s) = product_law(C(solo), C(rest)); a mismatch rules the product form out.
inline InequalityRecord check_product_equality(const State& s, Cut cut,
                                               double tol = kDetectionTol) {
  auto [c_solo, c_rest] = cut_coherences(s, cut);
  const double lhs = l1_coherence(s);
  const double rhs = product_law(c_solo, c_rest);
  return make_equality_record(Check::corollary2_eq, cut_label(cut, s.parties()),
                              lhs, rhs, {c_solo, c_rest}, tol);
}

// Full product equality: C(s) against product_law_n over all single-party
// reduced coherences; a mismatch rules out the full product form.
inline InequalityRecord check_full_separable_equality(const State& s,
                                                      double tol = kDetectionTol) {
  std::vector<double> cs;
  for (int k = 0; k < s.parties(); ++k) {
    const std::vector<int> keep{k};
    cs.push_back(l1_coherence(partial_trace(s, keep)));
  }
  const double lhs = l1_coherence(s);
  const double rhs = product_law_n(cs);
  return make_equality_record(Check::corollary3_eq, "", lhs, rhs, std::move(cs),
                              tol);
}

// Single-cut mixture bound: for components all claimed product across the
// same cut, C(mixture) <= sum_i p_i (X_i^2/4 + X_i).
inline InequalityRecord check_result2(const Decomposition& d,
                                      double tol = kDetectionTol) {
  if (!d.single_cut())
    fail(ErrorKind::mixed_cuts,
         "components disagree on the cut; use the mixed-cut bound instead");
  const Cut cut = *d.components.front().cut;
  std::vector<double> xs;
  double rhs = 0.0;
  for (const Component& c : d.components) {
    const double x = component_x(c.state, cut);
    xs.push_back(x);
    rhs += c.weight * (x * x / 4.0 + x);
  }
  const double lhs = l1_coherence(d.assemble());
  return make_bound_record(Check::result2, cut_label(cut, d.dims().count()), lhs,
                           rhs, std::move(xs), tol);
}

// Mixed-cut mixture bound: 1 + C(mixture) <= (1/4) sum_i p_i (X_i + 2)^2,
// with each X_i taken across that component's own cut. Works for any number
// of parties.
inline InequalityRecord check_result3(const Decomposition& d,
                                      double tol = kDetectionTol) {
  if (!d.all_have_cuts())
    fail(ErrorKind::mixed_cuts, "every component needs a cut label");
  std::vector<double> xs;
  double rhs = 0.0;
  for (const Component& c : d.components) {
    const double x = component_x(c.state, *c.cut);
    xs.push_back(x);
    rhs += c.weight * (x + 2.0) * (x + 2.0) / 4.0;
  }
  const double lhs = 1.0 + l1_coherence(d.assemble());
  return make_bound_record(Check::result3, "", lhs, rhs, std::move(xs), tol);
}

// Separable mixture bound: for components that are products of per-party
// factors, C(mixture) <= sum_i p_i product_law_n(factor coherences).
inline InequalityRecord check_result4(const Decomposition& d,
                                      double tol = kDetectionTol) {
  std::vector<double> xs;
  double rhs = 0.0;
  for (const Component& c : d.components) {
    if (c.factors.empty())
      fail(ErrorKind::factor_dim_mismatch,
           "every component needs per-party factors");
    const Dims& dims = d.dims();
    if (static_cast<int>(c.factors.size()) != dims.count())
      fail(ErrorKind::factor_dim_mismatch, "expected one factor per subsystem");
    std::vector<double> cs;
    for (int k = 0; k < dims.count(); ++k) {
      const State& f = c.factors[static_cast<size_t>(k)];
      if (f.parties() != 1 || f.dims().local(0) != dims.local(k))
        fail(ErrorKind::factor_dim_mismatch,
             "factor " + std::to_string(k) + " does not match subsystem dims");
      cs.push_back(l1_coherence(f));
    }
    const double bound = product_law_n(cs);
    xs.push_back(bound);
    rhs += c.weight * bound;
  }
  const double lhs = l1_coherence(d.assemble());
  return make_bound_record(Check::result4, "", lhs, rhs, std::move(xs), tol);
}

enum class Verdict {
  consistent_with_separable,
  consistent_with_biseparable,
  not_separable,
  not_biseparable,
  genuine_entangled_candidate,
};

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::consistent_with_separable: return "CONSISTENT_WITH_SEPARABLE";
    case Verdict::consistent_with_biseparable:
      return "CONSISTENT_WITH_BISEPARABLE";
    case Verdict::not_separable: return "NOT_SEPARABLE";
    case Verdict::not_biseparable: return "NOT_BISEPARABLE";
    case Verdict::genuine_entangled_candidate:
      return "GENUINE_ENTANGLED_CANDIDATE";
  }
  return "?";
}

enum class ClassifyMode { decomposition_given, reduced_state_heuristic };

inline const char* mode_name(ClassifyMode m) {
  return m == ClassifyMode::decomposition_given ? "decomposition_given"
                                                : "reduced_state_heuristic";
}

struct ClassificationReport {
  std::vector<InequalityRecord> records;
  Verdict verdict = Verdict::consistent_with_separable;
  ClassifyMode mode = ClassifyMode::reduced_state_heuristic;
};

// Verdict aggregation. Separability is refuted by a violated full-product
// equality or separable-mixture bound. Biseparability is refuted by a
// violated mixture bound when a decomposition was given; under the
// reduced-state heuristic it needs every cut equality violated and, for
// mixed states, the mixed-cut bound violated as well. A genuine-entanglement
// verdict requires both refutations. A biseparable-consistent verdict needs
// positive evidence: a cut equality that actually holds.
inline Verdict aggregate_verdict(const std::vector<InequalityRecord>& records,
                                 bool pure, ClassifyMode mode) {
  bool sep_violated = false;
  bool eq_cut_all_violated = true;
  bool any_eq_cut = false;
  bool given_bound_violated = false;
  bool heuristic_r3_violated = false;

  for (const InequalityRecord& r : records) {
    switch (r.name) {
      case Check::corollary3_eq:
      case Check::result4:
        if (!r.satisfied) sep_violated = true;
        break;
      case Check::corollary2_eq:
        any_eq_cut = true;
        if (r.satisfied) eq_cut_all_violated = false;
        break;
      case Check::result2:
        if (mode == ClassifyMode::decomposition_given && !r.satisfied)
          given_bound_violated = true;
        break;
      case Check::result3:
        if (mode == ClassifyMode::decomposition_given) {
          if (!r.satisfied) given_bound_violated = true;
        } else if (!r.satisfied) {
          heuristic_r3_violated = true;
        }
        break;
    }
  }

  bool bisep_violated = false;
  if (mode == ClassifyMode::decomposition_given) {
    bisep_violated = given_bound_violated;
  } else {
    bisep_violated =
        any_eq_cut && eq_cut_all_violated && (pure || heuristic_r3_violated);
  }

  if (sep_violated && bisep_violated)
    return Verdict::genuine_entangled_candidate;
  if (bisep_violated) return Verdict::not_biseparable;
  if (sep_violated) {
    if (any_eq_cut && !eq_cut_all_violated)
      return Verdict::consistent_with_biseparable;
    return Verdict::not_separable;
  }
  return Verdict::consistent_with_separable;
}

// Single-term candidate decomposition built from the state itself.
inline Decomposition heuristic_candidate(const State& s, Cut cut) {
  return Decomposition({Component(1.0, s, cut)});
}

// Candidate separable decomposition: per-party reduced states as factors,
// realized by the state itself.
inline Decomposition heuristic_product_candidate(const State& s) {
  std::vector<State> factors;
  for (int k = 0; k < s.parties(); ++k) {
    const std::vector<int> keep{k};
    factors.push_back(partial_trace(s, keep));
  }
  Component c(1.0, s, std::move(factors));
  return Decomposition({std::move(c)});
}

// Runs every applicable check and aggregates a verdict. Without a
// decomposition, the mixture bounds are evaluated on single-term candidates
// built from the state's own reduced states.
inline ClassificationReport classify(
    const State& s, const std::optional<Decomposition>& d = std::nullopt,
    double tol = kDetectionTol) {
  if (s.parties() < 2)
    fail(ErrorKind::dims_mismatch, "classification needs at least two subsystems");
  ClassificationReport report;
  report.mode = d ? ClassifyMode::decomposition_given
                  : ClassifyMode::reduced_state_heuristic;
  const int n = s.parties();

  report.records.push_back(check_full_separable_equality(s, tol));
  for (int k = 0; k < n; ++k)
    report.records.push_back(check_product_equality(s, Cut{k}, tol));

  if (d) {
    const State assembled = d->assemble();
    const double diff = assembled.matrix().max_abs_diff(s.matrix());
    if (assembled.dims() != s.dims() || diff > 1e-9)
      fail(ErrorKind::decomposition_mismatch,
           "assembled mixture deviates from the state by " +
               std::to_string(diff));
    if (d->single_cut() && !d->all_have_factors())
      report.records.push_back(check_result2(*d, tol));
    if (d->all_have_cuts())
      report.records.push_back(check_result3(*d, tol));
    if (d->all_have_factors())
      report.records.push_back(check_result4(*d, tol));
    else
      report.records.push_back(
          check_result4(heuristic_product_candidate(s), tol));
  } else {
    for (int k = 0; k < n; ++k)
      report.records.push_back(check_result2(heuristic_candidate(s, Cut{k}), tol));

    // the most favorable single-term candidate: largest X, hence largest rhs
    int best = 0;
    double best_x = -1.0;
    for (int k = 0; k < n; ++k) {
      const double x = component_x(s, Cut{k});
      if (x > best_x) {
        best_x = x;
        best = k;
      }
    }
    InequalityRecord r3 = check_result3(heuristic_candidate(s, Cut{best}), tol);
    r3.label = cut_label(Cut{best}, n);
    report.records.push_back(std::move(r3));

    report.records.push_back(
        check_result4(heuristic_product_candidate(s), tol));
  }

  report.verdict = aggregate_verdict(report.records, s.is_pure(), report.mode);
  return report;
}

}  // namespace qcoh
