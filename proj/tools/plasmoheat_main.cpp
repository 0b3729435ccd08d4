#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "plasmoheat/commands.hpp"
#include "plasmoheat/config.hpp"

namespace {

struct Cli {
  std::string config_path;
  std::string out_override;
  int mode = -2;  // -2 = not given
};

void add_common(CLI::App* sub, Cli& cli, bool with_mode) {
  sub->add_option("--config", cli.config_path, "run configuration (JSON)")
      ->required();
  sub->add_option("--out", cli.out_override,
                  "output directory (overrides the config)");
  if (with_mode) {
    sub->add_option("--mode", cli.mode,
                    "eigenmode index (-1 = strongest coupled)");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "plasmoheat: boundary-integral simulation of plasmonic nanoparticle "
      "fields and surface heating"};
  app.require_subcommand(1);
  Cli cli;

  CLI::App* spectrum =
      app.add_subcommand("spectrum", "NP eigenvalues and mode couplings");
  add_common(spectrum, cli, false);
  CLI::App* coupling =
      app.add_subcommand("coupling", "mode couplings sorted by strength");
  add_common(coupling, cli, false);
  CLI::App* field =
      app.add_subcommand("field", "interior field decomposition at resonance");
  add_common(field, cli, true);
  CLI::App* heat =
      app.add_subcommand("heat", "boundary temperature traces (both variants)");
  add_common(heat, cli, true);
  CLI::App* gap_scan = app.add_subcommand(
      "gap-scan", "two-particle eigenvalue approach to 1/2 vs gap");
  add_common(gap_scan, cli, false);
  CLI::App* validate = app.add_subcommand(
      "validate", "run the built-in invariant/oracle checks");
  add_common(validate, cli, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    plasmoheat::RunConfig cfg = plasmoheat::load_config(cli.config_path);
    if (!cli.out_override.empty()) cfg.output_dir = cli.out_override;
    if (cli.mode != -2) cfg.mode = cli.mode;

    if (spectrum->parsed()) return plasmoheat::cmd_spectrum(cfg);
    if (coupling->parsed()) return plasmoheat::cmd_coupling(cfg);
    if (field->parsed()) return plasmoheat::cmd_field(cfg);
    if (heat->parsed()) return plasmoheat::cmd_heat(cfg);
    if (gap_scan->parsed()) return plasmoheat::cmd_gap_scan(cfg);
    if (validate->parsed()) return plasmoheat::cmd_validate(cfg);
    std::cerr << "no subcommand selected\n";
    return 2;
  } catch (const plasmoheat::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
