// Command-line front end: encode, sample, fit, validate, table1, dock.
//
// Settings come from an optional `--config` file (key = value) and are then
// overridden by flags. Exit codes: 0 ok, 1 validation/numerical failure,
// 2 bad input.

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"

#include "hgbs/pipeline.hpp"

namespace {

struct Flag {
  const char* name;
  const char* help;
};

// Long flags map 1:1 onto RunConfig keys.
constexpr Flag kFlags[] = {
    {"graph", "graph JSON file"},
    {"random", "random G(M,p) graph as M,p,seed"},
    {"covariance", "covariance JSON to check (validate)"},
    {"t", "safety factor for c, in (0,1)"},
    {"layers", "MPS layers (1 or 2)"},
    {"nmax", "largest photon number enumerated (even)"},
    {"shots", "number of samples"},
    {"seed", "root seed"},
    {"out", "output directory"},
    {"cutoff", "Fock cutoff for validation (2..10)"},
    {"squeeze", "squeezing r for validation circuits"},
    {"restarts", "random restarts per fit"},
    {"max_iterations", "conjugate-gradient iteration cap"},
    {"tolerance", "relative improvement stopping threshold"},
    {"budget", "enumeration work budget"},
    {"sizes", "comma-separated mode counts (fit/table1)"},
    {"graphs", "graphs per size (table1)"},
    {"p", "edge probability for generated graphs (fit/table1)"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Holographic Gaussian boson sampling for weighted-clique search"};
  app.require_subcommand(1);

  std::string config_path;
  std::map<std::string, std::string> flag_values;
  app.add_option("--config", config_path, "key = value configuration file");
  for (const auto& f : kFlags)
    app.add_option(std::string("--") + f.name, flag_values[f.name], f.help);

  using Command = int (*)(const hgbs::RunConfig&, std::ostream&);
  const std::pair<const char*, Command> commands[] = {
      {"encode", hgbs::cmd_encode},     {"sample", hgbs::cmd_sample},
      {"fit", hgbs::cmd_fit},           {"validate", hgbs::cmd_validate},
      {"table1", hgbs::cmd_table1},     {"dock", hgbs::cmd_dock},
  };
  const char* descriptions[] = {
      "write kernel, covariance and Takagi JSON for a graph",
      "sample photon patterns and post-process them into cliques",
      "fit MPS beam-splitter circuits to the graph covariance",
      "run the Fock-space equivalence checks",
      "regenerate the MPS fidelity table over a random-graph ensemble",
      "graph -> samples -> cliques, with top clique weights",
  };
  std::map<std::string, Command> dispatch;
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    auto* sub = app.add_subcommand(commands[i].first, descriptions[i]);
    sub->fallthrough();
    dispatch[commands[i].first] = commands[i].second;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : hgbs::kExitInput;
  }

  try {
    hgbs::RunConfig config;
    if (!config_path.empty()) config.load_file(config_path);
    for (const auto& f : kFlags)
      if (app.count(std::string("--") + f.name) > 0) config.set(f.name, flag_values[f.name]);

    const std::string name = app.get_subcommands().front()->get_name();
    std::cout << "hgbs " << name << " (config " << config.hash() << ", seed " << config.seed
              << ")\n";
    return dispatch.at(name)(config, std::cout);
  } catch (const hgbs::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return hgbs::kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return hgbs::kExitValidation;
  }
}
