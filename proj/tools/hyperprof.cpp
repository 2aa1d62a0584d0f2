// Command-line experiment runner: delta, tower, compare, growth.

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hyperprof/runner.hpp"

namespace {

void add_common(CLI::App* sub, hyperprof::ExperimentConfig& c) {
  sub->add_option("--out", c.out, "Report path (default: stdout)");
  sub->add_option("--csv", c.csv_out, "CSV companion path (default: next to --out)");
  sub->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--max-vertices", c.max_vertices, "Vertex cap per ball");
}

void add_delta_flags(CLI::App* sub, hyperprof::ExperimentConfig& c) {
  sub->add_flag("--exact-basepoints,!--no-exact-basepoints", c.exact_basepoints,
                "Maximize over every core basepoint (default on)");
  sub->add_flag("--slim,!--no-slim", c.slim, "Also compute the slim-triangle constant");
  sub->add_flag("--naive-oracle,!--no-naive-oracle", c.naive_oracle,
                "Cross-check with the direct quadruple scan");
  sub->add_option("--naive-cap", c.naive_cap, "Core size limit for the naive oracle");
  sub->add_option("--slim-cap", c.slim_cap, "Core size limit for the slim scan");
}

}  // namespace

int main(int argc, char** argv) {
  using hyperprof::Command;
  hyperprof::ExperimentConfig c;

  CLI::App app{"Gromov hyperbolicity of Cayley graphs and finite quotient towers"};
  app.set_config("--config", "", "TOML/INI file with option values");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);

  auto* delta = app.add_subcommand("delta", "Four-point and slim delta of a Cayley ball");
  delta->add_option("--engine", c.engine, "Engine spec, e.g. free:2 or dp(cyclic:0,cyclic:0)")->required();
  delta->add_option("--radius", c.radius, "Ball radius")->required();
  delta->add_option("--graph-out", c.graph_out, "Write the ball as a graph file");
  delta->add_option("--cache", c.cache_dir, "Cache directory for balls and distances");
  add_delta_flags(delta, c);
  add_common(delta, c);

  auto* tower = app.add_subcommand("tower", "Delta profile along a finite quotient tower");
  tower->add_option("--family", c.family, "cyclic-p or exponent-p")->required();
  tower->add_option("--p", c.p, "Prime")->required();
  tower->add_option("--levels", c.levels, "Number of levels (cyclic-p)");
  tower->add_option("--level-radii", c.level_radii, "Explicit radius per level (default: whole group)")
      ->delimiter(',');
  add_delta_flags(tower, c);
  add_common(tower, c);

  auto* compare = app.add_subcommand("compare", "Delta of a free product against its factors");
  compare->add_option("--left", c.left, "Left factor spec")->required();
  compare->add_option("--right", c.right, "Right factor spec")->required();
  compare->add_option("--radius", c.radius, "Ball radius")->required();
  add_common(compare, c);

  auto* growth = app.add_subcommand("growth", "Ball growth sequence as CSV");
  growth->add_option("--engine", c.engine, "Engine spec")->required();
  growth->add_option("--radius", c.radius, "Maximum radius")->required();
  add_common(growth, c);

  try {
    app.parse(argc, argv);
  } catch (CLI::Success const& e) {
    return app.exit(e);
  } catch (CLI::ParseError const& e) {
    app.exit(e);
    return 2;
  }

  if (*delta) c.command = Command::delta;
  if (*tower) c.command = Command::tower;
  if (*compare) c.command = Command::compare;
  if (*growth) c.command = Command::growth;

  try {
    hyperprof::run_and_write(c);
  } catch (std::exception const& e) {
    std::cerr << "error: " << e.what() << '\n';
    return hyperprof::exit_code_for(e);
  }
  return 0;
}
