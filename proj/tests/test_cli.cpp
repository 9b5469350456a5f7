#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "helpers.hpp"
#include "qcoh/coherence.hpp"
#include "qcoh/commands.hpp"
#include "qcoh/qstate_io.hpp"
#include "qcoh/state_zoo.hpp"

using namespace qcoh;
using Catch::Matchers::ContainsSubstring;

namespace {

namespace fs = std::filesystem;

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() /
                 ("qcoh-cli-test-" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string write_file(const std::string& name, const std::string& content) {
  const fs::path p = scratch_dir() / name;
  std::ofstream out(p);
  out << content;
  return p.string();
}

const std::string kWStateText =
    "qstate v1\n"
    "dims 2 2 2\n"
    "pure\n"
    "amp 100 0.57735026918962576 0\n"
    "amp 010 0.57735026918962576 0\n"
    "amp 001 0.57735026918962576 0\n";

const std::string kBellMixtureText =
    "qstate v1\n"
    "dims 2 2 2\n"
    "mixed\n"
    "component 0.5\n"
    "cut 0\n"
    "pure\n"
    "amp 000 0.70710678118654752 0\n"
    "amp 011 0.70710678118654752 0\n"
    "end\n"
    "component 0.5\n"
    "cut 1\n"
    "pure\n"
    "amp 010 0.70710678118654752 0\n"
    "amp 111 -0.70710678118654752 0\n"
    "end\n"
    "component 0 # canonical zero-weight tail\n"
    "cut 2\n"
    "pure\n"
    "amp 000 1 0\n"
    "end\n";

struct CmdResult {
  int code = 0;
  std::string out;
  std::string err;
};

template <typename F>
CmdResult run(F&& f) {
  std::ostringstream out, err;
  CmdResult r;
  r.code = f(out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

}  // namespace

TEST_CASE("coherence command") {
  const std::string w = write_file("w.qstate", kWStateText);
  const CmdResult r =
      run([&](auto& out, auto& err) { return cmd_coherence(w, out, err); });
  CHECK(r.code == 0);
  CHECK(r.out == "2.000000000000\n");

  SECTION("diagonal state prints zero") {
    const std::string diag = write_file(
        "diag.qstate", "qstate v1\ndims 2\nmatrix\n0.5 0 0 0\n0 0 0.5 0\n");
    const CmdResult d =
        run([&](auto& out, auto& err) { return cmd_coherence(diag, out, err); });
    CHECK(d.code == 0);
    CHECK(d.out == "0.000000000000\n");
  }

  SECTION("parse errors exit 2 and name the line") {
    const std::string bad =
        write_file("bad.qstate", "qstate v1\ndims 2 2\npure\namp 5 1 0\n");
    const CmdResult b =
        run([&](auto& out, auto& err) { return cmd_coherence(bad, out, err); });
    CHECK(b.code == kExitParse);
    CHECK_THAT(b.err, ContainsSubstring("line 4"));
  }

  SECTION("validation errors exit 3") {
    const std::string unnorm =
        write_file("unnorm.qstate", "qstate v1\ndims 2\npure\namp 0 0.5 0\n");
    const CmdResult u =
        run([&](auto& out, auto& err) { return cmd_coherence(unnorm, out, err); });
    CHECK(u.code == kExitValidation);
  }

  SECTION("missing files exit 2") {
    const CmdResult m = run([&](auto& out, auto& err) {
      return cmd_coherence("/nonexistent/x.qstate", out, err);
    });
    CHECK(m.code == kExitParse);
  }
}

TEST_CASE("classify command") {
  SECTION("W is genuine under the heuristic") {
    const std::string w = write_file("w2.qstate", kWStateText);
    const CmdResult r = run([&](auto& out, auto& err) {
      return cmd_classify(w, std::nullopt, 1e-9, out, err);
    });
    CHECK(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("VERDICT GENUINE_ENTANGLED_CANDIDATE"));
    CHECK_THAT(r.out, ContainsSubstring("mode=reduced_state_heuristic"));
    CHECK_THAT(r.out, ContainsSubstring("RESULT2 A-BC"));
    CHECK_THAT(r.out, ContainsSubstring("VIOLATED"));
  }

  SECTION("mixture with an inline decomposition") {
    const std::string mixfile = write_file("mix.qstate", kBellMixtureText);
    const CmdResult r = run([&](auto& out, auto& err) {
      return cmd_classify(mixfile, std::nullopt, 1e-9, out, err);
    });
    CHECK(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("RESULT3 lhs=2.000000000000 "
                                        "rhs=2.250000000000"));
    CHECK_THAT(r.out, ContainsSubstring("mode=decomposition_given"));
    CHECK_THAT(r.out, ContainsSubstring("VERDICT NOT_SEPARABLE"));
  }

  SECTION("separate decomposition file for a matrix state") {
    const State assembled = bell_mixture(0.25).assemble();
    const std::string sfile = write_file("mix25.qstate", to_qstate_string(assembled));
    const std::string dfile = write_file("mix25-decomp.qstate", [] {
      std::string t =
          "qstate v1\ndims 2 2 2\nmixed\n"
          "component 0.25\ncut 0\npure\n"
          "amp 000 0.70710678118654752 0\namp 011 0.70710678118654752 0\nend\n"
          "component 0.75\ncut 1\npure\n"
          "amp 010 0.70710678118654752 0\namp 111 -0.70710678118654752 0\nend\n";
      return t;
    }());
    const CmdResult r = run([&](auto& out, auto& err) {
      return cmd_classify(sfile, dfile, 1e-9, out, err);
    });
    CHECK(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("RESULT3"));
    CHECK_THAT(r.out, ContainsSubstring("SAT"));
  }

  SECTION("mismatched decomposition exits 4") {
    const std::string w = write_file("w3.qstate", kWStateText);
    const std::string dfile = write_file("ghz-decomp.qstate",
                                         "qstate v1\ndims 2 2 2\nmixed\n"
                                         "component 1\ncut 0\npure\n"
                                         "amp 000 0.70710678118654752 0\n"
                                         "amp 111 0.70710678118654752 0\nend\n");
    const CmdResult r = run([&](auto& out, auto& err) {
      return cmd_classify(w, dfile, 1e-9, out, err);
    });
    CHECK(r.code == kExitDecompositionMismatch);
  }
}

TEST_CASE("figure sweep command") {
  SECTION("three-point sweep hits both endpoints") {
    const CmdResult r = run([&](auto& out, auto& err) {
      return cmd_figure1(3, std::nullopt, 1e-9, out, err);
    });
    CHECK(r.code == 0);
    std::istringstream lines(r.out);
    std::string header, row0, row1, row2;
    std::getline(lines, header);
    std::getline(lines, row0);
    std::getline(lines, row1);
    std::getline(lines, row2);
    CHECK(header == "a0,coherence,upper_bound,violated");
    CHECK(row0 == "0.000000000,1.000000000,1.250000000,false");
    CHECK_THAT(row2, ContainsSubstring("0.707106781,1.000000000,0.000000000,true"));
  }

  SECTION("csv output is deterministic") {
    const auto once = run([&](auto& out, auto& err) {
      return cmd_figure1(141, std::nullopt, 1e-9, out, err);
    });
    const auto twice = run([&](auto& out, auto& err) {
      return cmd_figure1(141, std::nullopt, 1e-9, out, err);
    });
    CHECK(once.out == twice.out);
    CHECK(std::count(once.out.begin(), once.out.end(), '\n') == 142);
  }

  SECTION("file output") {
    const fs::path p = scratch_dir() / "fig.csv";
    const CmdResult r = run([&](auto& out, auto& err) {
      return cmd_figure1(5, p.string(), 1e-9, out, err);
    });
    CHECK(r.code == 0);
    std::ifstream in(p);
    std::string header;
    std::getline(in, header);
    CHECK(header == "a0,coherence,upper_bound,violated");
  }

  SECTION("unwritable path exits 5") {
    const CmdResult r = run([&](auto& out, auto& err) {
      return cmd_figure1(5, std::string("/nonexistent-dir/x.csv"), 1e-9, out, err);
    });
    CHECK(r.code == kExitUnwritable);
  }

  SECTION("degenerate step counts exit 2") {
    const CmdResult r = run([&](auto& out, auto& err) {
      return cmd_figure1(1, std::nullopt, 1e-9, out, err);
    });
    CHECK(r.code == kExitParse);
  }
}

TEST_CASE("reduce command") {
  const std::string w = write_file("w4.qstate", kWStateText);
  const CmdResult r = run([&](auto& out, auto& err) {
    return cmd_reduce(w, {0}, out, err);
  });
  CHECK(r.code == 0);
  const ParseResult doc = parse_qstate(r.out);
  CHECK(doc.state.dims() == Dims({2}));
  CHECK_THAT(doc.state.entry(0, 0).real(),
             Catch::Matchers::WithinAbs(2.0 / 3.0, 1e-12));

  SECTION("two kept subsystems") {
    const CmdResult pair = run([&](auto& out, auto& err) {
      return cmd_reduce(w, {1, 2}, out, err);
    });
    CHECK(pair.code == 0);
    const ParseResult reduced = parse_qstate(pair.out);
    CHECK(reduced.state.dims() == Dims({2, 2}));
    CHECK_THAT(l1_coherence(reduced.state),
               Catch::Matchers::WithinAbs(2.0 / 3.0, 1e-12));
  }

  SECTION("bad keep sets exit 3") {
    const CmdResult bad = run([&](auto& out, auto& err) {
      return cmd_reduce(w, {7}, out, err);
    });
    CHECK(bad.code == kExitValidation);
  }
}

TEST_CASE("oracle command") {
  const CmdResult r = run([&](auto& out, auto& err) {
    return cmd_oracle("product-law", 50, 1, std::nullopt, out, err);
  });
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("failures 0"));

  SECTION("unknown suites exit 2") {
    const CmdResult u = run([&](auto& out, auto& err) {
      return cmd_oracle("nope", 10, 1, std::nullopt, out, err);
    });
    CHECK(u.code == kExitParse);
  }

  SECTION("recorded failures exit 1") {
    // a negative tolerance cannot be met, so every trial is recorded
    const CmdResult f = run([&](auto& out, auto& err) {
      return cmd_oracle("product-law", 5, 1, -1.0, out, err);
    });
    CHECK(f.code == kExitReproductionFailed);
    CHECK_THAT(f.out, ContainsSubstring("failures 15"));
    CHECK_THAT(f.out, ContainsSubstring("seed"));
  }
}

TEST_CASE("examples command") {
  const CmdResult r = run([&](auto& out, auto& err) { return cmd_examples(out, err); });
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("ALL ROWS PASS"));
  CHECK_THAT(r.out, !ContainsSubstring("FAIL "));

  // exactly one flagged value disagreement
  size_t count = 0, pos = 0;
  while ((pos = r.out.find("DISCREPANCY", pos)) != std::string::npos) {
    ++count;
    pos += 1;
  }
  CHECK(count == 1);
}

#ifdef QCOH_CLI_PATH
TEST_CASE("binary smoke") {
  const std::string w = write_file("w5.qstate", kWStateText);
  const std::string outfile = (scratch_dir() / "smoke.out").string();

  const int code = std::system(
      (std::string(QCOH_CLI_PATH) + " coherence " + w + " > " + outfile).c_str());
  REQUIRE(code != -1);
  CHECK(WEXITSTATUS(code) == 0);
  std::ifstream in(outfile);
  std::string line;
  std::getline(in, line);
  CHECK(line == "2.000000000000");

  const int bad = std::system(
      (std::string(QCOH_CLI_PATH) + " figure1 --steps x > /dev/null 2>&1").c_str());
  REQUIRE(bad != -1);
  CHECK(WEXITSTATUS(bad) == kExitParse);
}
#endif
