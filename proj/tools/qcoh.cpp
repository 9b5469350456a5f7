#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcoh/commands.hpp"

namespace {

std::vector<int> parse_keep(const std::string& arg) {
  std::vector<int> keep;
  std::string tok;
  for (char c : arg + ",") {
    if (c == ',') {
      if (!tok.empty()) keep.push_back(std::stoi(tok));
      tok.clear();
    } else {
      tok += c;
    }
  }
  return keep;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"l1-coherence toolkit: coherence, product laws and "
               "separability detectors for small multi-party states"};
  app.require_subcommand(1);

  double tol = 1e-9;
  std::string path, decomposition_path, out_path, keep_arg;
  int steps = 141;
  int trials = 1000;
  std::uint64_t seed = 1;

  CLI::App* coherence = app.add_subcommand("coherence", "print the l1 coherence of a state file");
  coherence->add_option("file", path, "QSTATE v1 file")->required();

  CLI::App* classify = app.add_subcommand("classify", "run every detector on a state file");
  classify->add_option("file", path, "QSTATE v1 file")->required();
  classify->add_option("decomposition", decomposition_path,
                       "QSTATE v1 mixed file with cut/product tags");
  classify->add_option("--tol", tol, "detection tolerance")->capture_default_str();

  CLI::App* figure1 = app.add_subcommand("figure1", "sweep the tilted-GHZ family and emit CSV");
  figure1->add_option("--steps", steps, "sweep points")->capture_default_str();
  figure1->add_option("--out", out_path, "CSV output path (stdout when omitted)");
  figure1->add_option("--tol", tol, "detection tolerance")->capture_default_str();

  app.add_subcommand("examples", "reproduce the built-in worked examples");

  CLI::App* reduce = app.add_subcommand("reduce", "print a reduced density matrix");
  reduce->add_option("file", path, "QSTATE v1 file")->required();
  reduce->add_option("--keep", keep_arg, "comma-separated subsystem indices")->required();

  CLI::App* oracle = app.add_subcommand("oracle", "run a brute-force verification suite");
  oracle->add_option("suite", path, "product-law | convexity | soundness")->required();
  oracle->add_option("--trials", trials, "trials per family")->capture_default_str();
  oracle->add_option("--seed", seed, "base seed")->capture_default_str();
  CLI::Option* oracle_tol =
      oracle->add_option("--tol", tol, "override the suite tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qcoh::kExitParse;
  }

  if (coherence->parsed())
    return qcoh::cmd_coherence(path, std::cout, std::cerr);
  if (classify->parsed()) {
    std::optional<std::string> dpath;
    if (!decomposition_path.empty()) dpath = decomposition_path;
    return qcoh::cmd_classify(path, dpath, tol, std::cout, std::cerr);
  }
  if (figure1->parsed()) {
    std::optional<std::string> opath;
    if (!out_path.empty()) opath = out_path;
    return qcoh::cmd_figure1(steps, opath, tol, std::cout, std::cerr);
  }
  if (app.get_subcommand("examples")->parsed())
    return qcoh::cmd_examples(std::cout, std::cerr);
  if (reduce->parsed())
    return qcoh::cmd_reduce(path, parse_keep(keep_arg), std::cout, std::cerr);
  if (oracle->parsed()) {
    std::optional<double> otol;
    if (oracle_tol->count() > 0) otol = tol;
    return qcoh::cmd_oracle(path, trials, seed, otol, std::cout, std::cerr);
  }
  return qcoh::kExitParse;
}
