#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "molt/config.hpp"
#include "molt/errors.hpp"
#include "molt/scenarios.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_numerical = 3;

molt::RunConfig load(const std::string& path) {
  molt::RunConfig cfg = molt::load_config(path);
  if (const char* dir = std::getenv("MOLT_OUTPUT_DIR"); dir != nullptr && *dir != '\0') cfg.output_dir = dir;
  return cfg;
}

int cmd_run(const std::string& path) {
  const molt::RunConfig cfg = load(path);
  const molt::RunReport rep = molt::run_scenario(cfg, &std::cout);
  std::cout << "scenario " << cfg.scenario << "\n" << rep.summary();
  std::printf("wall_seconds %.3f\n", rep.wall_seconds);
  for (const std::string& f : rep.files) std::cout << "wrote " << f << "\n";
  return exit_ok;
}

int cmd_converge(const std::string& path, std::size_t levels) {
  const molt::RunConfig cfg = load(path);
  const molt::RefinementReport rep = molt::run_convergence(cfg, levels, &std::cerr);
  std::cout << rep.to_text();
  std::filesystem::create_directories(cfg.output_dir);
  const std::string csv = (std::filesystem::path(cfg.output_dir) / (cfg.scenario + "_convergence.csv")).string();
  std::ofstream out(csv);
  if (!out) throw molt::Error(molt::ErrorCode::IoError, "cannot write '" + csv + "'");
  out << rep.to_csv();
  std::cout << "wrote " << csv << "\n";
  return exit_ok;
}

int cmd_scenarios() {
  for (const std::string& name : molt::scenario_names()) {
    std::cout << name << "  " << molt::scenario_description(name) << "\n";
  }
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Implicit line-by-line wave solver"};
  app.require_subcommand(1);

  std::string run_path;
  auto* run = app.add_subcommand("run", "run a scenario from a config file");
  run->add_option("config", run_path, "config file")->required();

  std::string conv_path;
  std::size_t levels = 3;
  auto* conv = app.add_subcommand("converge", "nested refinement study");
  conv->add_option("config", conv_path, "config file")->required();
  conv->add_option("--levels", levels, "number of grid levels")->check(CLI::Range(2, 8));

  auto* list = app.add_subcommand("scenarios", "list available scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_config;
  }

  try {
    if (run->parsed()) return cmd_run(run_path);
    if (conv->parsed()) return cmd_converge(conv_path, levels);
    if (list->parsed()) return cmd_scenarios();
  } catch (const molt::Error& e) {
    std::cerr << "error [" << molt::to_string(e.code()) << "]: " << e.what() << "\n";
    return molt::is_config_error(e.code()) ? exit_config : exit_numerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_numerical;
  }
  return exit_ok;
}
