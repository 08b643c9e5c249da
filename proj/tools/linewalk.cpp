// linewalk: run configured random-walk experiments on PL homeomorphisms of
// the line.
//
//   linewalk presets [--json]
//   linewalk validate <config> [--echo]
//   linewalk run <config> [--out DIR] [--threads N] [--quiet]
//
// Exit status: 0 ok, 1 usage or config error, 2 numeric failure.

#include "linewalk/presets.hpp"
#include "linewalk/scenario.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <thread>

using namespace linewalk;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 1;
constexpr int exit_numeric = 2;

int list_presets(bool as_json) {
  if (as_json) {
    Json all = Json::object();
    for (const auto& p : presets()) all[p.name] = {{"description", p.description}, {"system", system_to_json(p.system)}};
    std::cout << all.dump(2) << '\n';
    return exit_ok;
  }
  for (const auto& p : presets()) {
    const auto k = recurrence_interval(p.system);
    std::cout << p.name << "\n  " << p.description << "\n  K = [" << ScalarTraits<Rational>::to_string(k.lo) << ", "
              << ScalarTraits<Rational>::to_string(k.hi) << "]\n";
    for (const auto& g : p.system.generators())
      std::cout << "  " << g.name << "  weight " << ScalarTraits<Rational>::to_string(g.weight) << "  "
                << map_to_json(g.map).dump() << '\n';
  }
  return exit_ok;
}

int validate_config(const std::string& file, bool echo) {
  const auto config = load_scenario(file);
  std::cout << "ok: " << to_string(config.experiment) << " on "
            << (config.preset ? "preset " + *config.preset : std::to_string(config.system.size()) + " generators")
            << "\nconfig_sha1 " << config_hash(config) << "\nK = [" << ScalarTraits<Rational>::to_string(config.k.lo)
            << ", " << ScalarTraits<Rational>::to_string(config.k.hi) << "]\n"
            << validate(config.system).summary() << '\n';
  if (echo) std::cout << config.echo.dump(2) << '\n';
  return exit_ok;
}

int run_config(const std::string& file, const std::optional<std::string>& out, unsigned threads, bool quiet) {
  const auto config = load_scenario(file);
  RunOptions options;
  options.output_dir = resolve_output_dir(config, out ? std::optional<std::filesystem::path>(*out) : std::nullopt);
  options.threads = threads;
  if (!quiet) options.log = &std::cerr;
  const auto result = run_scenario(config, options);
  std::cout << "config_sha1 " << config_hash(config) << '\n';
  for (const auto& v : result.verdicts) std::cout << (v.passed ? "PASS " : "FAIL ") << v.name << " (" << v.detail << ")\n";
  for (const auto& f : result.files) std::cout << "wrote " << f.string() << '\n';
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random walks of PL homeomorphisms of the line"};
  app.require_subcommand(1);

  bool as_json = false;
  auto* presets_cmd = app.add_subcommand("presets", "List the built-in generator systems");
  presets_cmd->add_flag("--json", as_json, "Print the systems as JSON");

  std::string validate_file;
  bool echo = false;
  auto* validate_cmd = app.add_subcommand("validate", "Check a scenario file and print its filled-in echo");
  validate_cmd->add_option("config", validate_file, "Scenario file, summary.json or stamped CSV")->required();
  validate_cmd->add_flag("--echo", echo, "Print the config with every default filled in");

  std::string run_file;
  std::optional<std::string> out;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  bool quiet = false;
  auto* run_cmd = app.add_subcommand("run", "Run the experiment of a scenario file");
  run_cmd->add_option("config", run_file, "Scenario file, summary.json or stamped CSV")->required();
  run_cmd->add_option("--out", out, std::string("Output directory (default: config output_dir, then $") +
                                        output_dir_env + ", then ./linewalk-out)");
  run_cmd->add_option("--threads", threads, "Worker threads; outputs do not depend on it")
      ->check(CLI::PositiveNumber);
  run_cmd->add_flag("--quiet", quiet, "No progress lines on stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? exit_ok : exit_config;
  }

  try {
    if (*presets_cmd) return list_presets(as_json);
    if (*validate_cmd) return validate_config(validate_file, echo);
    if (*run_cmd) return run_config(run_file, out, threads, quiet);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const StoppingCapExceeded& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return exit_numeric;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return exit_numeric;
  }
  return exit_config;
}
