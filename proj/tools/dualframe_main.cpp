#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cli/run_commands.hpp"
#include "dualframe/errors.hpp"

namespace {

int emit(const dualframe::cli::CommandResult& result,
         const std::string& outPath) {
  const std::string text = result.report.dump(2) + "\n";
  if (!outPath.empty()) {
    std::ofstream out(outPath);
    if (!out) {
      std::cerr << "error: cannot write " << outPath << "\n";
      return 2;
    }
    out << text;
  }
  std::cout << text;
  if (!result.error.empty()) std::cerr << "error: " << result.error << "\n";
  return result.exitCode;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bandlimited dual wavelet frame construction and verification"};
  app.require_subcommand(1);

  std::string configPath;
  std::string outPath;
  dualframe::cli::RunOptions opts;

  auto addCommon = [&](CLI::App* cmd) {
    cmd->add_option("--config", configPath, "JSON config file")->required();
    cmd->add_option("--out", outPath, "write the JSON report here");
    cmd->add_flag("--parallel", opts.parallel, "parallel sample evaluation");
  };

  CLI::App* inspect = app.add_subcommand("inspect", "matrix spectrum and associated norm");
  CLI::App* build = app.add_subcommand("build", "construct a dual generator pair");
  CLI::App* verify = app.add_subcommand("verify", "run all numerical frame checks");
  CLI::App* transform = app.add_subcommand("transform", "frequency-domain round trip");
  CLI::App* exportCmd = app.add_subcommand("export", "write CSV data for plotting");
  for (CLI::App* cmd : {inspect, build, verify, transform, exportCmd}) {
    addCommon(cmd);
  }
  exportCmd->add_option("--what", opts.what, "psi | phi | shells | lattice")
      ->required();
  exportCmd->add_option("--resolution", opts.resolution, "export resolution");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  dualframe::cli::json config;
  try {
    config = dualframe::cli::load_config_file(configPath);
  } catch (const dualframe::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  opts.outPath = outPath;
  dualframe::cli::CommandResult result;
  if (*inspect) result = dualframe::cli::run_inspect(config, opts);
  if (*build) result = dualframe::cli::run_build(config, opts);
  if (*verify) result = dualframe::cli::run_verify(config, opts);
  if (*transform) result = dualframe::cli::run_transform(config, opts);
  if (*exportCmd) result = dualframe::cli::run_export(config, opts);
  return emit(result, outPath);
}
