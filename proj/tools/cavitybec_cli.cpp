// Command-line front end: figure data and solver reports.
//
// Exit codes: 0 success, 2 invalid input, 3 solver or I/O failure.

#include "cavitybec/config.hpp"
#include "cavitybec/scenarios.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <string>

namespace {

constexpr int exit_validation = 2;
constexpr int exit_failure = 3;

struct Subcommand {
  const char* name;
  const char* help;
};

constexpr Subcommand subcommands[] = {
    {"fig1", "residual of the cumulative mode count with its running supremum and power-law fit"},
    {"fig2", "condensate fraction: bulk, finite-size corrected and exact"},
    {"fig3", "regime map over the two aspect ratios"},
    {"fig4", "charge fractions by excitation class over a temperature sweep"},
    {"tc", "critical temperatures with equation residuals"},
    {"count", "lattice points in an ellipsoid, by enumeration and by the Bessel series"},
    {"classify", "multistep regime of one cavity"},
};

const std::map<std::string, std::string> key_help{
    {"L1", "edge length"},
    {"L2", "edge length"},
    {"L3", "edge length"},
    {"bc", "neumann or dirichlet"},
    {"m", "mass"},
    {"Q", "net charge"},
    {"engine", "exact, asymptotic or both"},
    {"tmin", "sweep start in units of the reference temperature"},
    {"tmax", "sweep end in units of the reference temperature"},
    {"points", "sweep points"},
    {"scale", "linear or log sweep"},
    {"out", "output file (default stdout)"},
    {"format", "csv, json or table"},
    {"a", "anisotropy, comma separated integers"},
    {"epsilon", "ellipsoid size for count"},
    {"epsilon-max", "last epsilon of the fig1 grid"},
    {"budget", "enumeration limit"},
    {"cutoff", "charge sums keep modes with beta (E - E0) below this"},
    {"dominance", "factor by which a regime inequality must hold"},
    {"q-tilde", "pi Q / (m L2) held fixed in fig3"},
    {"grid", "points per axis in fig3"},
    {"ratio-max", "largest aspect ratio in fig3"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bose-Einstein condensation of a relativistic charged gas in a box"};
  app.require_subcommand(1);

  std::string preset, config_path;
  std::map<std::string, std::string> values;
  for (const auto& sc : subcommands) {
    CLI::App* sub = app.add_subcommand(sc.name, sc.help);
    sub->add_option("--preset", preset, "built-in parameter set");
    sub->add_option("--config", config_path, "file of 'key = value' lines");
    for (const auto& key : cavitybec::config_keys()) {
      sub->add_option("--" + key, values[key], key_help.at(key));
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_validation;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  cavitybec::KeyValues flags;
  for (const auto& key : cavitybec::config_keys()) {
    if (chosen->count("--" + key) > 0) flags[key] = values[key];
  }

  try {
    const cavitybec::KeyValues file =
        config_path.empty() ? cavitybec::KeyValues{} : cavitybec::read_config_file(config_path);
    const cavitybec::RunConfig cfg = cavitybec::resolve_config(chosen->get_name(), preset, file, flags);
    const cavitybec::Table table = cavitybec::run(cfg);

    std::ofstream file_out;
    if (!cfg.out.empty()) {
      file_out.open(cfg.out);
      if (!file_out) {
        std::cerr << "error: cannot write '" << cfg.out << "'\n";
        return exit_failure;
      }
    }
    std::ostream& os = cfg.out.empty() ? std::cout : file_out;
    switch (cfg.output_format()) {
      case cavitybec::OutputFormat::Csv: cavitybec::write_csv(os, table); break;
      case cavitybec::OutputFormat::Json: cavitybec::write_json(os, table); break;
      case cavitybec::OutputFormat::Table: cavitybec::write_text(os, table); break;
    }
    os.flush();
    if (!os) {
      std::cerr << "error: write failed\n";
      return exit_failure;
    }
    if (cfg.subcommand == "fig1") {
      for (const auto& [k, v] : table.metadata)
        if (k == "gamma") std::cerr << "gamma = " << v << '\n';
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_validation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_failure;
  }
  return 0;
}
