// Command-line front end: maps flags (or a JSON config file) onto an
// ExperimentConfig and dispatches to the command layer.  Exit codes:
// 0 = success / accept, 1 = reject or failed check, 2 = error.
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qsv/commands.hpp"
#include "qsv/errors.hpp"

namespace {

// Fill config fields from a JSON file, but only where the user did not pass
// the matching flag: explicit flags always win.
void merge_config_file(const std::string& path, const CLI::App& sub,
                       qsv::ExperimentConfig& config) {
  std::ifstream in(path);
  if (!in) throw qsv::validation_error("cannot open config file: " + path);
  const nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw qsv::validation_error("config: malformed JSON document");
  }
  const auto absent = [&](const char* flag) { return sub.count(flag) == 0; };
  if (doc.contains("target") && absent("--target")) config.target = doc["target"];
  if (doc.contains("n") && absent("--n")) config.n = doc["n"];
  if (doc.contains("protocol") && absent("--protocol")) config.protocol = doc["protocol"];
  if (doc.contains("level") && absent("--level")) config.level = doc["level"];
  if (doc.contains("scheme") && absent("--scheme")) config.scheme = doc["scheme"];
  if (doc.contains("epsilon") && absent("--epsilon")) config.epsilon = doc["epsilon"];
  if (doc.contains("delta") && absent("--delta")) config.delta = doc["delta"];
  if (doc.contains("chi") && absent("--chi")) config.chi = doc["chi"];
  if (doc.contains("trials") && absent("--trials")) {
    config.trials = doc["trials"].is_string() ? doc["trials"].get<std::string>()
                                              : doc["trials"].dump();
  }
  if (doc.contains("samples") && absent("--samples")) config.samples = doc["samples"];
  if (doc.contains("bins") && absent("--bins")) config.bins = doc["bins"];
  if (doc.contains("nu") && absent("--nu")) config.nu = doc["nu"];
  if (doc.contains("device") && absent("--device")) config.device = doc["device"];
  if (doc.contains("seed") && absent("--seed")) config.seed = doc["seed"];
  if (doc.contains("out") && absent("--out")) config.out = doc["out"];
  if (doc.contains("format") && absent("--format")) config.format = doc["format"];
  if (doc.contains("threads") && absent("--threads")) config.threads = doc["threads"];
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qsv: quantum state verification experiments"};
  app.require_subcommand(1);

  qsv::ExperimentConfig config;
  std::string config_path;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path,
                    "JSON config file; explicit flags override its values");
    cmd->add_option("--target", config.target,
                    "ghz | haar | random-stabilizer | <file.json>");
    cmd->add_option("--n", config.n, "qubit count for generated targets");
    cmd->add_option("--protocol", config.protocol, "plm | sop | dpso");
    cmd->add_option("--level", config.level, "kept-subsystem size r (sop: level l)");
    cmd->add_option("--scheme", config.scheme, "naive | classes | lp | grid | ascent");
    cmd->add_option("--epsilon", config.epsilon, "infidelity threshold");
    cmd->add_option("--delta", config.delta, "type II failure budget");
    cmd->add_option("--chi", config.chi, "type I failure budget (default: delta)");
    cmd->add_option("--trials", config.trials, "\"auto\" or an explicit trial count");
    cmd->add_option("--samples", config.samples, "Haar samples for sweep/hist");
    cmd->add_option("--bins", config.bins, "histogram bin count");
    cmd->add_option("--nu", config.nu,
                    "use this spectral gap instead of probing the target");
    cmd->add_option("--device", config.device,
                    "exact | worst:<eps> | depol:<p> | <file.json>");
    cmd->add_option("--seed", config.seed, "base RNG seed");
    cmd->add_option("--out", config.out, "write the table here instead of stdout");
    cmd->add_option("--format", config.format, "csv | json");
    cmd->add_option("--threads", config.threads, "worker threads (0 = hardware)");
    return cmd;
  };

  add_common(app.add_subcommand("gap", "spectral gap of one configuration"));
  add_common(app.add_subcommand("verify", "run a verification protocol end to end"));
  add_common(app.add_subcommand("sweep", "gap statistics over Haar-random targets"));
  add_common(app.add_subcommand("hist", "gap histogram over Haar-random targets"));
  add_common(app.add_subcommand("complexity", "sample-complexity table per level"));
  add_common(app.add_subcommand("ghz-check",
                                "compare GHZ gaps against their closed forms"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  config.command = sub->get_name();
  if (!config_path.empty()) {
    try {
      merge_config_file(config_path, *sub, config);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    }
  }
  return qsv::run_command(config, std::cout, std::cerr);
}
