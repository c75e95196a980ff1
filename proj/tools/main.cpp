#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "cli.hpp"
#include "fellq/version.hpp"

namespace {

using fellq::cli::RunConfig;

void add_common(CLI::App* cmd, RunConfig& cfg, std::string& config_path, std::string& grid_text) {
  cmd->add_option("--config", config_path, "key = value config file; flags override");
  cmd->add_option("--model", cfg.model, "torus|sphere|lens|heisenberg")
      ->check(CLI::IsMember({"torus", "sphere", "lens", "heisenberg"}));
  cmd->add_option("--theta", cfg.theta, "deformation parameter (sphere/torus/lens)");
  cmd->add_option("--p", cfg.p, "lens integer p (nonzero)");
  cmd->add_option("--q", cfg.q, "lens integer q (coprime with p)");
  cmd->add_option("--c", cfg.c, "heisenberg positive integer c");
  cmd->add_option("--mu", cfg.mu, "heisenberg flow direction mu");
  cmd->add_option("--nu", cfg.nu, "heisenberg flow direction nu");
  cmd->add_option("--grid", grid_text, "axis sizes, e.g. 33x64x64");
  cmd->add_option("--hbar-min", cfg.hbar_min, "scan grid lower end");
  cmd->add_option("--hbar-max", cfg.hbar_max, "scan grid upper end");
  cmd->add_option("--hbar-count", cfg.hbar_count, "scan grid point count");
  cmd->add_flag("--log,!--no-log", cfg.log_grid, "log-spaced scan grid (default on)");
  cmd->add_option("--seed", cfg.seed, "seed for all deterministic draws");
  cmd->add_option("--out", cfg.out, "output CSV path (stdout if omitted)");
  cmd->add_option("--cutoff", cfg.cutoff, "max |t| for spectral decompositions");
}

int dispatch(const RunConfig& cfg) {
  if (cfg.command == "verify") return fellq::cli::cmd_verify(cfg);
  if (cfg.command == "derivative-scan") return fellq::cli::cmd_derivative_scan(cfg);
  if (cfg.command == "commutator-scan") return fellq::cli::cmd_commutator_scan(cfg);
  if (cfg.command == "field-scan") return fellq::cli::cmd_field_scan(cfg);
  if (cfg.command == "spectral") return fellq::cli::cmd_spectral(cfg);
  std::fprintf(stderr, "no subcommand given; see --help\n");
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("fellq ") + fellq::kVersion +
               " - graded C*-algebra deformation toolkit"};
  app.require_subcommand(0, 1);

  RunConfig cfg;
  std::string config_path;
  std::string grid_text;

  auto* verify = app.add_subcommand("verify", "run the model invariant suite");
  verify->add_option("--triples", cfg.triples, "number of seeded band-limited triples");
  auto* dscan = app.add_subcommand("derivative-scan", "first-order remainder of the deformed product");
  dscan->add_option("--pair", cfg.pair, "generator pair, e.g. W,Z");
  auto* cscan = app.add_subcommand("commutator-scan", "deformed commutator against the Poisson bracket");
  cscan->add_option("--pair", cfg.pair, "generator pair, e.g. W,Z");
  auto* fscan = app.add_subcommand("field-scan", "norm bracket and Rayleigh columns over hbar");
  fscan->add_option("--element", cfg.expr, "generator-word expression for phi");
  fscan->add_option("--trials", cfg.trials, "random trial sections for the lower bound");
  fscan->add_option("--window", cfg.window, "regular representation window K");
  fscan->add_option("--xi-columns", cfg.xi_columns, "number of fixed-xi Rayleigh columns");
  auto* spect = app.add_subcommand("spectral", "fiber norms of the spectral decomposition");
  spect->add_option("--expr", cfg.expr, "generator-word expression");

  for (CLI::App* cmd : {verify, dscan, cscan, fscan, spect})
    add_common(cmd, cfg, config_path, grid_text);

  CLI11_PARSE(app, argc, argv);

  CLI::App* active = nullptr;
  for (CLI::App* cmd : {verify, dscan, cscan, fscan, spect})
    if (cmd->parsed()) active = cmd;
  if (!active) {
    std::fprintf(stderr, "%s\n", app.help().c_str());
    return 2;
  }
  cfg.command = active->get_name();

  try {
    // config file first, then re-apply flags so they take precedence
    if (!config_path.empty()) {
      RunConfig file_cfg;
      fellq::cli::apply_config_file(file_cfg, config_path);
      RunConfig merged = file_cfg;
      merged.command = cfg.command;
      // CLI11 already wrote flag values into cfg; copy over only options the
      // user actually passed
      auto passed = [&](const std::string& name) {
        const CLI::Option* o = active->get_option_no_throw(name);
        return o != nullptr && o->count() > 0;
      };
      if (passed("--model")) merged.model = cfg.model;
      if (passed("--theta")) merged.theta = cfg.theta;
      if (passed("--p")) merged.p = cfg.p;
      if (passed("--q")) merged.q = cfg.q;
      if (passed("--c")) merged.c = cfg.c;
      if (passed("--mu")) merged.mu = cfg.mu;
      if (passed("--nu")) merged.nu = cfg.nu;
      if (passed("--hbar-min")) merged.hbar_min = cfg.hbar_min;
      if (passed("--hbar-max")) merged.hbar_max = cfg.hbar_max;
      if (passed("--hbar-count")) merged.hbar_count = cfg.hbar_count;
      if (passed("--log") || passed("--no-log")) merged.log_grid = cfg.log_grid;
      if (passed("--seed")) merged.seed = cfg.seed;
      if (passed("--out")) merged.out = cfg.out;
      if (passed("--cutoff")) merged.cutoff = cfg.cutoff;
      if (passed("--triples")) merged.triples = cfg.triples;
      if (passed("--trials")) merged.trials = cfg.trials;
      if (passed("--window")) merged.window = cfg.window;
      if (passed("--xi-columns")) merged.xi_columns = cfg.xi_columns;
      if (passed("--pair")) merged.pair = cfg.pair;
      if (passed("--element") || passed("--expr")) merged.expr = cfg.expr;
      if (!grid_text.empty()) merged.grid = fellq::cli::parse_grid(grid_text);
      cfg = merged;
    } else if (!grid_text.empty()) {
      cfg.grid = fellq::cli::parse_grid(grid_text);
    }
    return dispatch(cfg);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
