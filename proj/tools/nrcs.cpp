// nrcs: analyze, design and verify diffusively coupled networks.
//
//   nrcs analyze model.json [--seed S] [--tol-rank f] [--tol-eig f] [--json]
//   nrcs design  model.json [--seed S] [--out weights.json]
//   nrcs verify  model.json [--trials T] [--seed S] [--weights weights.json]
//   nrcs example msd|tanks|power --n N [--out model.json]
//
// Exit codes: 0 controllable, 1 not, 2 undecided, 3 input error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nrcs/cli.hpp"

namespace {

std::string join_args(int argc, char** argv) {
  std::string out = "nrcs";
  for (int i = 1; i < argc; ++i) {
    out += ' ';
    out += argv[i];
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Controllability analysis for diffusively coupled networks"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  int trials = 50;
  int n_vertices = 3;
  nrcs::TolerancePolicy tol;
  bool as_json = false;
  std::string out_path;
  std::string model_path;
  std::string weights_path;
  std::string example_name;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Random seed");
    cmd->add_option("--tol-rank", tol.rank_rel_tol, "Relative numerical-rank tolerance");
    cmd->add_option("--tol-eig", tol.eig_match_tol, "Eigenvalue matching tolerance");
    cmd->add_flag("--json", as_json, "Machine-readable report");
  };

  auto* analyze = app.add_subcommand("analyze", "Decide structural controllability");
  analyze->add_option("model", model_path, "Model JSON")->required();
  add_common(analyze);

  auto* design = app.add_subcommand("design", "Synthesize weights for a SISO model");
  design->add_option("model", model_path, "Model JSON")->required();
  design->add_option("--out", out_path, "Weights file to write");
  add_common(design);

  auto* verify = app.add_subcommand("verify", "Monte Carlo or single-point controllability check");
  verify->add_option("model", model_path, "Model JSON")->required();
  verify->add_option("--trials", trials, "Monte Carlo trials");
  verify->add_option("--weights", weights_path, "Pinned weights file (single-point check)");
  add_common(verify);

  auto* example = app.add_subcommand("example", "Write a built-in example model");
  example->add_option("name", example_name, "msd, tanks or power")->required();
  example->add_option("--n", n_vertices, "Number of subsystems");
  example->add_option("--out", out_path, "Model file to write (stdout if omitted)");
  example->add_flag("--json", as_json, "Machine-readable report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return nrcs::kExitInputError;
  }

  const std::string command = join_args(argc, argv);
  try {
    nrcs::CliReport report;
    if (*analyze) {
      report = nrcs::cmd_analyze(command, model_path, seed, tol);
    } else if (*design) {
      report = nrcs::cmd_design(command, model_path, seed, out_path, tol);
    } else if (*verify) {
      const std::optional<std::string> pinned =
          weights_path.empty() ? std::nullopt : std::optional<std::string>(weights_path);
      report = nrcs::cmd_verify(command, model_path, trials, seed, pinned, tol);
    } else {
      nrcs::Model model;
      report = nrcs::cmd_example(command, example_name, n_vertices, out_path, &model);
      if (out_path.empty() && !as_json) {
        std::cout << nrcs::model_to_json(model).dump(2) << "\n";
        return nrcs::kExitControllable;
      }
    }
    std::cout << (as_json ? nrcs::render_json(report) + "\n" : nrcs::render_text(report));
    return nrcs::exit_code_for(report);
  } catch (const nrcs::Error& e) {
    std::cerr << "error [" << nrcs::to_string(e.kind()) << "]: " << e.what() << "\n";
    return nrcs::exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return nrcs::kExitInputError;
  }
}
