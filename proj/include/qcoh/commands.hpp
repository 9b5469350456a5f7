#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qcoh/detectors.hpp"
#include "qcoh/oracle.hpp"
#include "qcoh/qstate_io.hpp"
#include "qcoh/state_zoo.hpp"

namespace qcoh {

// CLI exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitReproductionFailed = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitDecompositionMismatch = 4;
inline constexpr int kExitUnwritable = 5;

inline std::string fmt12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12f", x);
  return buf;
}

inline std::string fmt9(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9f", x);
  return buf;
}

namespace cmd_detail {

inline int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::decomposition_mismatch) {
      err << "decomposition mismatch: " << e.what() << "\n";
      return kExitDecompositionMismatch;
    }
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  }
}

inline ParseResult load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  return parse_qstate(in);
}

inline void require_valid(const State& s) {
  const ValidationReport r = validate(s);
  if (!r.ok())
    fail(ErrorKind::invalid_state,
         "state failed validation (hermiticity deviation " +
             std::to_string(r.hermiticity_dev) + ", trace deviation " +
             std::to_string(r.trace_dev) + ", min eigenvalue " +
             std::to_string(r.min_eigenvalue) + ")");
}

inline void print_record(std::ostream& out, const InequalityRecord& r) {
  out << check_name(r.name);
  if (!r.label.empty()) out << ' ' << r.label;
  out << " lhs=" << fmt12(r.lhs) << " rhs=" << fmt12(r.rhs)
      << " slack=" << fmt12(r.slack) << ' '
      << (r.satisfied ? "SAT" : "VIOLATED") << "\n";
}

}  // namespace cmd_detail

inline int cmd_coherence(const std::string& path, std::ostream& out,
                         std::ostream& err) {
  return cmd_detail::guarded(err, [&] {
    const ParseResult doc = cmd_detail::load(path);
    cmd_detail::require_valid(doc.state);
    out << fmt12(l1_coherence(doc.state)) << "\n";
    return kExitOk;
  });
}

inline int cmd_classify(const std::string& path,
                        const std::optional<std::string>& decomposition_path,
                        double tol, std::ostream& out, std::ostream& err) {
  return cmd_detail::guarded(err, [&] {
    const ParseResult doc = cmd_detail::load(path);
    cmd_detail::require_valid(doc.state);

    std::optional<Decomposition> decomp = doc.decomposition;
    if (decomposition_path) {
      const ParseResult ddoc = cmd_detail::load(*decomposition_path);
      if (!ddoc.decomposition)
        throw ParseError(0, "'" + *decomposition_path +
                                "' has components without cut or product tags");
      decomp = ddoc.decomposition;
      if (decomp->dims() != doc.state.dims())
        fail(ErrorKind::decomposition_mismatch,
             "decomposition dims " + decomp->dims().to_string() +
                 " disagree with state dims " + doc.state.dims().to_string());
    }

    const ClassificationReport report = classify(doc.state, decomp, tol);
    for (const InequalityRecord& r : report.records)
      cmd_detail::print_record(out, r);
    out << "VERDICT " << verdict_name(report.verdict)
        << " mode=" << mode_name(report.mode) << "\n";
    return kExitOk;
  });
}

struct FigureRow {
  double a0 = 0.0;
  double coherence = 0.0;
  double upper_bound = 0.0;
  bool violated = false;
};

// One-vs-rest bound sweep for the a0|000> + a1|100> + |111>/sqrt(2) family:
// a0 in [0, 1/sqrt(2)], a1 = sqrt(1/2 - a0^2), bound taken across the A cut.
inline std::vector<FigureRow> figure_rows(int steps, double tol = kDetectionTol) {
  const double hi = 1.0 / std::sqrt(2.0);
  std::vector<FigureRow> rows;
  rows.reserve(static_cast<size_t>(steps));
  for (int k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) / (steps - 1);
    const double a0 = hi * t;
    // 0.5 - a0^2 in a cancellation-free form; exact zero at the endpoint
    const double a1 = std::sqrt(0.5 * (1.0 - t) * (1.0 + t));
    const State s = tilted_ghz(a0, a1, 1e-6);
    FigureRow row;
    row.a0 = a0;
    row.coherence = l1_coherence(s);
    const double x = component_x(s, Cut{0});
    row.upper_bound = x + x * x / 4.0;
    row.violated = row.coherence > row.upper_bound + tol;
    rows.push_back(row);
  }
  return rows;
}

inline void write_figure_csv(std::ostream& out, const std::vector<FigureRow>& rows) {
  out << "a0,coherence,upper_bound,violated\n";
  for (const FigureRow& r : rows)
    out << fmt9(r.a0) << ',' << fmt9(r.coherence) << ',' << fmt9(r.upper_bound)
        << ',' << (r.violated ? "true" : "false") << "\n";
}

inline int cmd_figure1(int steps, const std::optional<std::string>& out_path,
                       double tol, std::ostream& out, std::ostream& err) {
  if (steps < 2) {
    err << "steps must be at least 2\n";
    return kExitParse;
  }
  const std::vector<FigureRow> rows = figure_rows(steps, tol);
  if (out_path) {
    std::ofstream f(*out_path);
    if (!f) {
      err << "cannot write '" << *out_path << "'\n";
      return kExitUnwritable;
    }
    write_figure_csv(f, rows);
    if (!f.good()) {
      err << "write failed for '" << *out_path << "'\n";
      return kExitUnwritable;
    }
  } else {
    write_figure_csv(out, rows);
  }
  return kExitOk;
}

inline int cmd_reduce(const std::string& path, const std::vector<int>& keep,
                      std::ostream& out, std::ostream& err) {
  return cmd_detail::guarded(err, [&] {
    const ParseResult doc = cmd_detail::load(path);
    cmd_detail::require_valid(doc.state);
    const State reduced =
        partial_trace(doc.state, std::span<const int>(keep.data(), keep.size()));
    write_qstate(out, reduced);
    return kExitOk;
  });
}

// ---------------------------------------------------------------------------
// Reproduction table
// ---------------------------------------------------------------------------

namespace cmd_detail {

struct ExampleRow {
  std::string name;
  bool pass = true;
  std::string discrepancy;
  std::vector<std::string> lines;

  void expect_value(const std::string& what, double computed, double expected,
                    double tol = 1e-12) {
    const bool ok = std::abs(computed - expected) <= tol;
    pass = pass && ok;
    lines.push_back(what + " expected " + fmt12(expected) + " computed " +
                    fmt12(computed) + (ok ? "" : "  <-- MISMATCH"));
  }

  void expect_status(const std::string& what, const InequalityRecord& r,
                     bool expected_sat) {
    const bool ok = r.satisfied == expected_sat;
    pass = pass && ok;
    lines.push_back(what + " expected " + (expected_sat ? "SAT" : "VIOLATED") +
                    " computed " + (r.satisfied ? "SAT" : "VIOLATED") +
                    " (lhs " + fmt12(r.lhs) + ", rhs " + fmt12(r.rhs) + ")" +
                    (ok ? "" : "  <-- MISMATCH"));
  }

  void expect_verdict(const ClassificationReport& report, Verdict expected) {
    const bool ok = report.verdict == expected;
    pass = pass && ok;
    lines.push_back(std::string("verdict expected ") + verdict_name(expected) +
                    " computed " + verdict_name(report.verdict) +
                    (ok ? "" : "  <-- MISMATCH"));
  }

  void note(const std::string& text) { lines.push_back(text); }
};

inline const InequalityRecord& find_record(const ClassificationReport& report,
                                           Check name,
                                           const std::string& label = "") {
  for (const InequalityRecord& r : report.records)
    if (r.name == name && (label.empty() || r.label == label)) return r;
  fail(ErrorKind::invalid_state, "missing record in classification report");
}

inline void print_rows(std::ostream& out, const std::vector<ExampleRow>& rows) {
  for (const ExampleRow& row : rows) {
    out << (row.pass ? "PASS" : "FAIL") << ' ' << row.name;
    if (!row.discrepancy.empty()) out << "  DISCREPANCY: " << row.discrepancy;
    out << "\n";
    for (const std::string& line : row.lines) out << "     " << line << "\n";
  }
}

}  // namespace cmd_detail

// Runs every built-in worked example and compares computed outcomes against
// the expected ones. Exits 0 only if every qualitative conclusion holds;
// value disagreements that leave the conclusion intact are flagged, not
// failed.
inline int cmd_examples(std::ostream& out, std::ostream& err) {
  using cmd_detail::ExampleRow;
  using cmd_detail::find_record;
  const double pi = std::numbers::pi;
  std::vector<ExampleRow> rows;

  {  // pure state that factors across the A cut
    ExampleRow row;
    row.name = "bisep-pure";
    const double l = 1.0 / std::sqrt(3.0);
    const State s = bisep_pure(l, l, l);
    row.expect_value("C_l1", l1_coherence(s), 2.0 * (l * l + l * l + l * l));
    const ClassificationReport rep = classify(s);
    row.expect_status("COROLLARY2_EQ A-BC", find_record(rep, Check::corollary2_eq, "A-BC"), true);
    row.expect_status("RESULT2 A-BC", find_record(rep, Check::result2, "A-BC"), true);
    row.expect_verdict(rep, Verdict::consistent_with_biseparable);
    rows.push_back(std::move(row));
  }

  {  // W state: every product form ruled out
    ExampleRow row;
    row.name = "w-state";
    const State s = w_state();
    row.expect_value("C_l1", l1_coherence(s), 2.0);
    const ClassificationReport rep = classify(s);
    for (int k = 0; k < 3; ++k) {
      const std::string label = cut_label(Cut{k}, 3);
      row.expect_status("COROLLARY2_EQ " + label,
                        find_record(rep, Check::corollary2_eq, label), false);
      row.expect_status("RESULT2 " + label,
                        find_record(rep, Check::result2, label), false);
    }
    row.expect_status("COROLLARY3_EQ", find_record(rep, Check::corollary3_eq), false);
    row.expect_verdict(rep, Verdict::genuine_entangled_candidate);
    rows.push_back(std::move(row));
  }

  {  // GHZ family over a small angle grid
    ExampleRow row;
    row.name = "ghz";
    for (double theta : {pi / 6.0, pi / 4.0, pi / 3.0}) {
      for (double delta : {0.0, pi / 3.0}) {
        const State s = ghz_state(theta, delta);
        row.expect_value("C_l1(theta=" + fmt9(theta) + ",delta=" + fmt9(delta) + ")",
                         l1_coherence(s), std::abs(std::sin(2.0 * theta)));
        const ClassificationReport rep = classify(s);
        int satisfied = 0;
        for (int k = 0; k < 3; ++k) {
          const std::string label = cut_label(Cut{k}, 3);
          if (find_record(rep, Check::result2, label).satisfied) ++satisfied;
          if (find_record(rep, Check::corollary2_eq, label).satisfied) ++satisfied;
        }
        row.expect_value("satisfied cut checks(theta=" + fmt9(theta) + ")",
                         satisfied, 0.0);
        row.expect_verdict(rep, Verdict::genuine_entangled_candidate);
      }
    }
    row.note("reduced states carry no off-diagonal entries; every bound and equality fails");
    rows.push_back(std::move(row));
  }

  {  // a0|000> + a1|100> + |111>/sqrt(2) at the symmetric point
    ExampleRow row;
    row.name = "tilted-ghz";
    const double a0 = 0.5, a1 = 0.5;
    const State s = tilted_ghz(a0, a1);
    const double s2 = std::sqrt(2.0);
    row.expect_value("C_l1", l1_coherence(s), 2 * a0 * a1 + s2 * a0 + s2 * a1);
    row.expect_value("C_l1(A)", l1_coherence(partial_trace(s, {0})), 2 * a0 * a1);
    row.expect_value("C_l1(B)", l1_coherence(partial_trace(s, {1})), 0.0);
    row.expect_value("C_l1(C)", l1_coherence(partial_trace(s, {2})), 0.0);
    row.expect_value("C_l1(AB)", l1_coherence(partial_trace(s, {0, 1})), 2 * a0 * a1);
    row.expect_value("C_l1(AC)", l1_coherence(partial_trace(s, {0, 2})), 2 * a0 * a1);
    row.expect_value("C_l1(BC)", l1_coherence(partial_trace(s, {1, 2})), s2 * a1);
    const ClassificationReport rep = classify(s);
    for (int k = 0; k < 3; ++k) {
      const std::string label = cut_label(Cut{k}, 3);
      row.expect_status("RESULT2 " + label, find_record(rep, Check::result2, label), false);
      row.expect_status("COROLLARY2_EQ " + label,
                        find_record(rep, Check::corollary2_eq, label), false);
    }
    row.expect_verdict(rep, Verdict::genuine_entangled_candidate);
    rows.push_back(std::move(row));
  }

  {  // mixture of Bell products across two different cuts
    ExampleRow row;
    row.name = "bell-mixture";
    for (double q : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const Decomposition d = bell_mixture(q);
      const State s = d.assemble();
      row.expect_value("C_l1(q=" + fmt9(q) + ")", l1_coherence(s), 1.0);
      const InequalityRecord r3 = check_result3(d);
      row.expect_status("RESULT3(q=" + fmt9(q) + ")", r3, true);
      if (q == 0.5) {
        row.expect_value("RESULT3 lhs", r3.lhs, 2.0);
        row.expect_value("RESULT3 rhs", r3.rhs, 2.25);
        row.expect_value("X1", r3.x_terms[0], 1.0);
        row.expect_value("X2", r3.x_terms[1], 1.0);
        row.expect_value("X3", r3.x_terms[2], 0.0);
        // a genuine two-cut mixture: no single product form, bounds all hold
        row.expect_verdict(classify(s, d), Verdict::not_separable);
      }
    }
    rows.push_back(std::move(row));
  }

  {  // GHZ/W mixture: bounds fail for every mixing weight
    ExampleRow row;
    row.name = "ghz-w-mixture";
    row.discrepancy =
        "printed coherence 3 disagrees with the entrywise value 2-q; "
        "the violation conclusion is unchanged";
    for (int i = 0; i <= 10; ++i) {
      const double q = i / 10.0;
      const Decomposition d = ghz_w_mixture(q);
      const State s = d.assemble();
      row.expect_value("C_l1(q=" + fmt9(q) + ")", l1_coherence(s), 2.0 - q);
      const ClassificationReport rep = classify(s, d);
      const InequalityRecord& r3 = find_record(rep, Check::result3);
      row.expect_status("RESULT3(q=" + fmt9(q) + ")", r3, false);
      row.expect_value("RESULT3 lhs(q=" + fmt9(q) + ")", r3.lhs, 3.0 - q);
      if (r3.lhs <= 16.0 / 9.0) {
        row.pass = false;
        row.note("RESULT3 lhs does not exceed 16/9  <-- MISMATCH");
      }
      row.expect_status("RESULT4(q=" + fmt9(q) + ")", find_record(rep, Check::result4), false);
      row.expect_verdict(rep, Verdict::genuine_entangled_candidate);
    }
    rows.push_back(std::move(row));
  }

  {  // four-qubit mixture of products across two cuts
    ExampleRow row;
    row.name = "four-qubit-bisep";
    const Decomposition d = four_qubit_bisep();
    const State s = d.assemble();
    row.expect_value("C_l1", l1_coherence(s), 1.0);
    const InequalityRecord r3 = check_result3(d);
    row.expect_status("RESULT3", r3, true);
    row.expect_value("RESULT3 lhs", r3.lhs, 2.0);
    row.expect_value("RESULT3 rhs", r3.rhs, 2.25);
    row.expect_value("X1", r3.x_terms[0], 1.0);
    row.expect_value("X2", r3.x_terms[1], 1.0);
    row.expect_value("X3", r3.x_terms[2], 0.0);
    row.expect_value("X4", r3.x_terms[3], 0.0);
    // the D factor is |0><0| in both components, so the D-ABC equality holds
    row.expect_verdict(classify(s, d), Verdict::consistent_with_biseparable);
    rows.push_back(std::move(row));
  }

  {  // diagonal four-qubit mixture of basis products
    ExampleRow row;
    row.name = "four-qubit-diag";
    const State s = four_qubit_diag();
    row.expect_value("C_l1", l1_coherence(s), 0.0);
    std::vector<Component> comps;
    for (int idx : {0, 3, 8, 15}) {
      std::vector<State> factors;
      const std::vector<int> digits = s.dims().digits(idx);
      for (int k = 0; k < 4; ++k)
        factors.push_back(diagonal_projector(Dims({2}), digits[static_cast<size_t>(k)]));
      comps.push_back(product_component(0.25, std::move(factors)));
    }
    const Decomposition d(std::move(comps));
    const InequalityRecord r4 = check_result4(d);
    row.expect_status("RESULT4", r4, true);
    row.expect_value("RESULT4 lhs", r4.lhs, 0.0);
    row.expect_value("RESULT4 rhs", r4.rhs, 0.0);
    row.expect_verdict(classify(s, d), Verdict::consistent_with_separable);
    rows.push_back(std::move(row));
  }

  {  // three-qutrit pure state that factors across the A cut
    ExampleRow row;
    row.name = "qutrit-bisep";
    const State s = qutrit_bisep();
    row.expect_value("C_l1", l1_coherence(s), 2.0);
    const Decomposition d({Component(1.0, s, Cut{0})});
    const InequalityRecord r3 = check_result3(d);
    row.expect_value("X1", r3.x_terms[0], 2.0);
    row.expect_status("RESULT3", r3, true);
    row.expect_value("RESULT3 lhs", r3.lhs, 3.0);
    row.expect_value("RESULT3 rhs", r3.rhs, 4.0);
    row.expect_verdict(classify(s, d), Verdict::consistent_with_biseparable);
    rows.push_back(std::move(row));
  }

  cmd_detail::print_rows(out, rows);
  int failures = 0;
  for (const ExampleRow& row : rows)
    if (!row.pass) ++failures;
  out << (failures == 0 ? "ALL ROWS PASS" : "ROWS FAILED") << "\n";
  if (failures) err << failures << " example row(s) failed\n";
  return failures == 0 ? kExitOk : kExitReproductionFailed;
}

inline int cmd_oracle(const std::string& suite, int trials, std::uint64_t seed,
                      std::optional<double> tol, std::ostream& out,
                      std::ostream& err) {
  OracleReport report;
  if (suite == "product-law") {
    const double t = tol.value_or(kOracleTol);
    const Dims q1({2}), q2({2, 2}), t1({3}), t2({3, 3});
    OracleReport a = verify_product_law(trials, q1, q2, t, seed);
    OracleReport b = verify_product_law(trials, q2, q2, t, seed + 1);
    OracleReport c = verify_product_law(trials, t1, t2, t, seed + 2);
    report.trials = a.trials + b.trials + c.trials;
    report.max_abs_error =
        std::max({a.max_abs_error, b.max_abs_error, c.max_abs_error});
    for (const auto* r : {&a, &b, &c})
      report.failures.insert(report.failures.end(), r->failures.begin(),
                             r->failures.end());
  } else if (suite == "convexity") {
    report = verify_convexity(trials, three_qubits(), 4, tol.value_or(kOracleTol),
                              seed);
  } else if (suite == "soundness") {
    report = verify_detector_soundness(trials, three_qubits(),
                                       tol.value_or(kDetectionTol), seed);
  } else {
    err << "unknown suite '" << suite
        << "' (expected product-law, convexity or soundness)\n";
    return kExitParse;
  }

  out << "suite " << suite << " trials " << report.trials << " max_abs_error "
      << report.max_abs_error << " failures " << report.failures.size() << "\n";
  for (const auto& [fseed, what] : report.failures)
    out << "  seed " << fseed << ": " << what << "\n";
  return report.ok() ? kExitOk : kExitReproductionFailed;
}

}  // namespace qcoh
