// Command-line runner for Kerr-nonlinear Mach-Zehnder phase-estimation
// sweeps. Subcommands:
//   run <config>        execute a sweep, write <name>.csv and <name>.json
//   validate <config>   resolve cutoffs and report sizes, no computation
//   preset <name>       print a bundled config to stdout
//   list-presets        list bundled config names
//
// Exit codes: 0 ok, 1 internal error, 2 config parse error, 3 domain
// validation error, 4 truncation failure.

#include <CLI11.hpp>

#include <iostream>

#include "kerrmzi/parallel.hpp"
#include "kerrmzi/scenario.hpp"

namespace {

int exit_code_for(const kerrmzi::ConfigError& e) {
  return e.kind() == kerrmzi::ConfigError::Kind::Parse ? 2 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kerr-nonlinear Mach-Zehnder interferometer sweep runner"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  int workers = kerrmzi::default_worker_count();

  CLI::App* run = app.add_subcommand("run", "execute a sweep config");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--out", out_dir, "output directory (default: current)");
  run->add_option("--workers", workers, "worker threads (default: KERRMZI_WORKERS or cores)");

  CLI::App* validate = app.add_subcommand("validate", "check a config, report sizes");
  validate->add_option("config", config_path, "config file")->required();

  std::string preset_name;
  CLI::App* preset = app.add_subcommand("preset", "print a bundled config");
  preset->add_option("name", preset_name, "preset name")->required();

  app.add_subcommand("list-presets", "list bundled config names");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("list-presets")) {
      for (const std::string& name : kerrmzi::preset_names()) std::cout << name << "\n";
      return 0;
    }
    if (app.got_subcommand(preset)) {
      auto text = kerrmzi::preset_text(preset_name);
      if (!text) {
        std::cerr << "unknown preset \"" << preset_name << "\" (see list-presets)\n";
        return 2;
      }
      std::cout << *text;
      return 0;
    }
    if (app.got_subcommand(validate)) {
      const kerrmzi::Scenario s = kerrmzi::load_scenario_file(config_path);
      const kerrmzi::ValidationReport report = kerrmzi::validate_scenario(s);
      std::cout << "scenario:        " << s.name << "\n"
                << "input:           " << s.input.describe() << "\n"
                << "resolved n_max:  " << report.n_max << "\n"
                << "sectors:         " << report.sector_count << "\n"
                << "deficit:         "
                << kerrmzi::detail::format_double(report.truncation_deficit) << "\n"
                << "state bytes:     " << report.state_bytes << "\n"
                << "sweep points:    " << s.sweep_points << "\n";
      std::cout << "columns:        ";
      for (const std::string& c : report.header) std::cout << " " << c;
      std::cout << "\n";
      return 0;
    }
    // run
    const kerrmzi::Scenario s = kerrmzi::load_scenario_file(config_path);
    const kerrmzi::RunResult result = kerrmzi::run_scenario(s, out_dir, workers);
    std::cout << result.csv_path.string() << "\n" << result.json_path.string() << "\n";
    return 0;
  } catch (const kerrmzi::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const kerrmzi::TruncationError& e) {
    std::cerr << "truncation error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
