#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "coocnet/errors.hpp"
#include "coocnet/pipeline.hpp"
#include "coocnet/version.hpp"

namespace {

struct Cli {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<double> z;
  std::optional<unsigned> topics;
  std::optional<std::size_t> randomizations;
  std::optional<unsigned> threads;
  std::optional<std::string> out;
};

void add_common_options(CLI::App* cmd, Cli& cli) {
  cmd->add_option("--config", cli.config_path, "Run configuration (JSON)")
      ->required();
  cmd->add_option("--seed", cli.seed, "Master seed (overrides config)");
  cmd->add_option("--samples", cli.samples,
                  "Null-ensemble sample count (overrides config)");
  cmd->add_option("--z", cli.z, "Z threshold (overrides config)");
  cmd->add_option("--topics", cli.topics, "Topic count (overrides config)");
  cmd->add_option("--randomizations", cli.randomizations,
                  "Permutation count for z-tests (overrides config)");
  cmd->add_option("--threads", cli.threads,
                  "Worker threads (never changes results)");
  cmd->add_option("--out", cli.out, "Output directory (overrides config)");
}

coocnet::RunConfig resolve(const Cli& cli) {
  coocnet::ConfigOverrides overrides;
  overrides.seed = cli.seed;
  overrides.n_samples = cli.samples;
  overrides.z_threshold = cli.z;
  overrides.topics = cli.topics;
  overrides.n_rand = cli.randomizations;
  overrides.threads = cli.threads;
  if (cli.out) overrides.out_dir = *cli.out;
  return coocnet::load_config(cli.config_path, overrides);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(coocnet::kToolName) + " " + coocnet::kToolVersion +
               " - bipartite co-occurrence backbone toolkit"};
  app.require_subcommand(1);

  Cli cli;
  void (*stage)(const coocnet::RunConfig&) = nullptr;

  const struct {
    const char* name;
    const char* help;
    void (*fn)(const coocnet::RunConfig&);
  } commands[] = {
      {"ingest", "Parse, clean and filter the article corpus", coocnet::cmd_ingest},
      {"network", "Project, randomize and validate the outlet network", coocnet::cmd_network},
      {"modularity", "Score attribute classifications against the network", coocnet::cmd_modularity},
      {"content", "Topic model, over-representation and style tables", coocnet::cmd_content},
      {"robustness", "Threshold sweep and leave-one-out reruns", coocnet::cmd_robustness},
      {"all", "Run every stage in order", coocnet::cmd_all},
  };
  for (const auto& command : commands) {
    CLI::App* sub = app.add_subcommand(command.name, command.help);
    add_common_options(sub, cli);
    sub->callback([&stage, fn = command.fn] { stage = fn; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    stage(resolve(cli));
  } catch (const coocnet::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
