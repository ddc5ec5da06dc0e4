#include <iostream>

#include <CLI11.hpp>

#include "acotot_cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace acotot::cli;

  CLI::App app{"Ant colony search over generated trees of thought"};
  app.require_subcommand(1);

  RunOptions run;
  std::string run_out_dir;
  auto* run_cmd = app.add_subcommand("run", "Run the colony on one configured task");
  run_cmd->add_option("--config", run.config, "Run configuration (JSON)")->required();
  run_cmd->add_option("--seed", run.seed, "Override the engine and synth seeds");
  run_cmd->add_flag("--answer", run.answer, "Ask the generator for a final answer");
  run_cmd->add_option("--out-dir", run_out_dir, "Directory for relative output paths");

  BenchOptions bench;
  std::string bench_out_dir;
  auto* bench_cmd = app.add_subcommand("bench", "Run a synthetic benchmark manifest");
  bench_cmd->add_option("--config", bench.manifest, "Manifest: JSON list of synth specs")
      ->required();
  bench_cmd->add_option("--repeats", bench.repeats, "Seeds per manifest entry")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--out-dir", bench_out_dir, "Directory for summary.csv/json");
  bench_cmd->add_option("--jobs", bench.jobs, "Worker threads")->check(CLI::PositiveNumber);

  InspectOptions inspect;
  auto* inspect_cmd = app.add_subcommand("inspect", "Summarize a result file");
  inspect_cmd->add_option("result", inspect.result, "Result JSON written by run")->required();
  inspect_cmd->add_option("--dot", inspect.dot, "Write a DOT graph to this file ('-' = stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  if (!run_out_dir.empty()) run.out_dir = run_out_dir;
  if (!bench_out_dir.empty()) bench.out_dir = bench_out_dir;

  if (*run_cmd) return cmd_run(run, std::cout, std::cerr);
  if (*bench_cmd) return cmd_bench(bench, std::cout, std::cerr);
  return cmd_inspect(inspect, std::cout, std::cerr);
}
