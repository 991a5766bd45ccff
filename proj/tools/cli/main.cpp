#include "artifacts.hpp"
#include "commands.hpp"
#include "run_config.hpp"

#include <qmix/errors.hpp>

#include <CLI11.hpp>

#include <iostream>

namespace {

struct FlagSpec {
  const char* name;
  const char* help;
};

// Every subcommand accepts the same flat parameter set; each command reads
// the keys it needs and rejects missing required ones.
constexpr FlagSpec kFlags[] = {
    {"config", "key=value file; flags override its entries"},
    {"out", "output directory"},
    {"master-seed", "master seed for every derived stream"},
    {"chain", "chain file, or complete:N / cycle:N / random:N"},
    {"marked", "comma-separated marked states"},
    {"j", "start state"},
    {"s", "interpolation grid start:stop:step or list"},
    {"n", "graph size"},
    {"p", "edge probability"},
    {"epsilon", "precision in (0,1)"},
    {"seeds", "seeds per size"},
    {"sizes", "sizes start:stop:step or list"},
    {"t-max", "largest time on the grid"},
    {"grid-points", "points on the geometric time grid"},
    {"trials", "Monte Carlo walks"},
    {"threads", "worker threads"},
    {"suite", "verify suite: lemma1 (pointer), spectral, hitting, sandwich, all"},
    {"representation", "effective or full"},
    {"sizing", "pointer sizing: hamiltonian or chain"},
    {"eps-exponent", "rigidity envelope exponent"},
    {"exponent-slack", "slack on the scaling exponents"},
    {"max-n", "cap on the graph size"},
};

}  // namespace

int main(int argc, char** argv) {
  using namespace qmix::cli;
  CLI::App app{"Quantum walk sampling and mixing experiments"};
  app.require_subcommand(1);
  std::map<std::string, std::map<std::string, std::string>> values;
  for (const auto& [name, fn] : commands()) {
    (void)fn;
    CLI::App* sub = app.add_subcommand(name);
    for (const FlagSpec& f : kFlags) sub->add_option(std::string("--") + f.name, values[name][f.name], f.help);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string command = chosen->get_name();
  std::map<std::string, std::string> flags;
  for (const FlagSpec& f : kFlags)
    if (chosen->count(std::string("--") + f.name) > 0) flags[f.name] = values[command][f.name];

  RunConfig cfg;
  try {
    const auto from_file = flags.count("config") ? read_config_file(flags.at("config"))
                                                 : std::map<std::string, std::string>{};
    cfg = make_run_config(command, from_file, flags);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  std::unique_ptr<Artifacts> art;
  try {
    art = std::make_unique<Artifacts>(cfg);
    commands().at(command)(cfg, *art);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (art) art->finish(1, e.what());
    return 1;
  } catch (const qmix::Error& e) {
    // Library precondition failures trace back to the inputs.
    std::cerr << "error: " << e.what() << "\n";
    if (art) art->finish(1, e.what());
    return 1;
  }
  const int status = art->failed() ? 2 : 0;
  art->finish(status, "");
  for (const auto& f : art->failures()) std::cerr << "check failed: " << f << "\n";
  std::cout << command << ": " << (status ? "checks failed" : "ok") << ", artifacts in " << cfg.output_dir.string()
            << "\n";
  return status;
}
