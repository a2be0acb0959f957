// carnot: batch front end over the library.  One command per process.
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "carnot/commands.hpp"
#include "carnot/io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"exact computations on Carnot groups: Rumin and spectral complexes, Pansu pullbacks, "
               "central extensions"};
  app.require_subcommand(1);

  std::string json_path;
  bool strict = false;
  app.add_option("--json", json_path, "write the machine-readable report here");
  app.add_flag("--strict-stratified", strict, "reject graded algebras not generated by layer 1");

  std::string input;
  std::optional<int> coeff_degree;
  std::optional<int> page;
  std::string degrees;

  auto* check = app.add_subcommand("check", "validate a group file");
  check->add_option("group", input, "group TOML")->required();
  check->add_option("--coeff-degree", coeff_degree, "coefficient degree bound for the multicomplex check");

  auto* rumin = app.add_subcommand("rumin", "Rumin complex of a group");
  rumin->add_option("group", input, "group TOML")->required();
  rumin->add_option("--degrees", degrees, "form degrees a..b");
  rumin->add_option("--coeff-degree", coeff_degree, "coefficient degree bound for d_c∘d_c = 0");

  auto* pansu = app.add_subcommand("pansu", "contact check, Pansu derivative and pullbacks");
  pansu->add_option("scenario", input, "scenario TOML")->required();

  auto* commute = app.add_subcommand("commute", "Pansu pullback against the spectral differentials");
  commute->add_option("scenario", input, "scenario TOML")->required();
  commute->add_option("--page", page, "spectral page i");
  commute->add_option("--coeff-degree", coeff_degree, "coefficient degree bound");

  auto* extend = app.add_subcommand("extend", "central extension by an invariant 2-cocycle");
  extend->add_option("scenario", input, "scenario TOML")->required();

  auto* lift = app.add_subcommand("lift", "lift a map to central extensions");
  lift->add_option("scenario", input, "scenario TOML")->required();
  lift->add_option("--coeff-degree", coeff_degree, "coefficient degree bound for the primitives");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  carnot::CommandOptions opt;
  opt.strict_stratified = strict;
  opt.coeff_degree = coeff_degree;
  opt.page = page;
  try {
    opt.max_degree = carnot::max_degree_from_env();
    if (!degrees.empty()) opt.degrees = carnot::parse_degree_range(degrees);
  } catch (const carnot::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  std::string cmd = app.get_subcommands().front()->get_name();
  carnot::CommandResult r = carnot::run_command(cmd, input, opt);
  (r.exit_code == 2 ? std::cerr : std::cout) << r.text;
  if (!json_path.empty()) {
    std::ofstream out(json_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << json_path << "\n";
      return 2;
    }
    out << r.json;
  }
  return r.exit_code;
}
